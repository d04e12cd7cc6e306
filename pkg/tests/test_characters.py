"""Character construction, evaluation, classification, and group laws."""

import cmath
import math
import random

import numpy as np
import pytest

from charsum_lab import arith, characters
from charsum_lab.characters import (
    DirichletCharacter,
    character_from_label,
    classify,
    enumerate_characters,
    evaluate,
    legendre_character,
    principal_character,
    real_value_table,
    value_matrix,
    value_table,
)
from charsum_lab.errors import DomainError


def brute_conductor(chi) -> int:
    """Definition-level oracle: least d | q with chi = 1 on units == 1 mod d."""
    q = chi.modulus
    for d in arith.divisors(q):
        ok = True
        for u in range(1, q + 1):
            if u % d == 1 % d and math.gcd(u, q) == 1:
                if abs(evaluate(chi, u) - 1) > 1e-12:
                    ok = False
                    break
        if ok:
            return d
    return q


class TestEnumeration:
    def test_q3(self):
        chars = enumerate_characters(arith.unit_group(3))
        assert len(chars) == 2
        orders = sorted(c.order for c in chars)
        assert orders == [1, 2]

    def test_q8_all_real(self):
        chars = enumerate_characters(arith.unit_group(8))
        assert len(chars) == 4
        assert all(c.real for c in chars)

    def test_q5_brute_force_structure(self):
        chars = enumerate_characters(arith.unit_group(5))
        assert sorted(c.order for c in chars) == [1, 2, 4, 4]
        real_nonprincipal = [c for c in chars if c.real and not c.principal]
        assert len(real_nonprincipal) == 1
        # multiplication-table oracle: values must be multiplicative on units
        chi = real_nonprincipal[0]
        for m in range(1, 5):
            for n in range(1, 5):
                lhs = evaluate(chi, m * n)
                rhs = evaluate(chi, m) * evaluate(chi, n)
                assert abs(lhs - rhs) < 1e-12

    @pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 12, 15, 16, 24, 36, 45, 97])
    def test_count_closure_principal(self, q):
        ctx = arith.unit_group(q)
        chars = enumerate_characters(ctx)
        assert len(chars) == arith.euler_phi(q)
        assert len({c.exponent_vector for c in chars}) == len(chars)
        assert sum(1 for c in chars if c.principal) == 1
        # closed under pointwise product: exponent vectors add mod orders
        vecs = {c.exponent_vector for c in chars}
        orders = [int(o) for o in ctx.orders]
        rng = random.Random(q)
        for _ in range(20):
            a = rng.choice(chars).exponent_vector
            b = rng.choice(chars).exponent_vector
            prod = tuple((x + y) % o for x, y, o in zip(a, b, orders))
            assert prod in vecs


class TestEvaluate:
    def test_principal_mod7(self):
        assert evaluate(principal_character(7), 3) == 1

    def test_vanishes_off_units(self):
        for chi in enumerate_characters(arith.unit_group(6)):
            assert evaluate(chi, 3) == 0

    def test_legendre_mod7_nonresidue(self):
        squares = {n * n % 7 for n in range(1, 7)}
        assert 3 not in squares
        chi = legendre_character(7)
        assert abs(evaluate(chi, 3) - (-1)) < 1e-15

    def test_unit_circle_and_zero_pattern(self):
        for q in [12, 35, 64]:
            for chi in enumerate_characters(arith.unit_group(q))[:6]:
                for n in range(q):
                    v = evaluate(chi, n)
                    if math.gcd(n, q) > 1:
                        assert v == 0
                    else:
                        assert abs(abs(v) - 1) < 1e-14

    def test_matches_exponential_formula(self):
        # chi(n) = e(2 pi i <e, dlog(n)> / orders), checked term by term
        ctx = arith.unit_group(13)
        for chi in enumerate_characters(ctx):
            for n in range(1, 13):
                d = ctx.dlog(n)
                angle = sum(
                    e * dd / int(o)
                    for e, dd, o in zip(chi.exponent_vector, d, ctx.orders)
                )
                want = cmath.exp(2j * cmath.pi * angle)
                assert abs(evaluate(chi, n) - want) < 1e-13

    def test_completely_multiplicative_random(self):
        rng = random.Random(2026)
        for q in [7, 9, 24, 101]:
            chars = enumerate_characters(arith.unit_group(q))
            for _ in range(200):
                chi = rng.choice(chars)
                m = rng.randrange(1, 3 * q)
                n = rng.randrange(1, 3 * q)
                lhs = evaluate(chi, m * n)
                rhs = evaluate(chi, m) * evaluate(chi, n)
                assert abs(lhs - rhs) < 1e-12


class TestClassify:
    def test_principal_mod12(self):
        rec = classify(principal_character(12))
        assert rec.conductor == 1
        assert rec.parity == 1
        assert rec.order == 1
        assert rec.principal and not rec.primitive

    def test_legendre_mod5(self):
        rec = classify(legendre_character(5))
        assert rec == classify(legendre_character(5))
        assert rec.conductor == 5 and rec.parity == 1 and rec.order == 2
        assert rec.primitive and rec.real and not rec.principal
        # chi(-1) = chi(4) = 1 directly
        assert abs(evaluate(legendre_character(5), 4) - 1) < 1e-15

    def test_induced_mod9_has_conductor_3(self):
        chars = [
            c
            for c in enumerate_characters(arith.unit_group(9))
            if c.real and not c.principal
        ]
        assert len(chars) == 1
        assert chars[0].conductor == 3
        assert not chars[0].primitive

    def test_conductor_matches_brute_force(self):
        for q in [9, 12, 16, 45, 72]:
            for chi in enumerate_characters(arith.unit_group(q)):
                assert chi.conductor == brute_conductor(chi), chi.label

    def test_parity_sign_of_minus_one(self):
        for q in [5, 7, 11, 13, 16, 21]:
            for chi in enumerate_characters(arith.unit_group(q)):
                v = evaluate(chi, q - 1)
                assert abs(v - chi.parity) < 1e-12


class TestLegendre:
    def test_p3(self):
        chi = legendre_character(3)
        assert abs(evaluate(chi, 1) - 1) < 1e-15
        assert abs(evaluate(chi, 2) + 1) < 1e-15

    def test_p7_values(self):
        chi = legendre_character(7)
        got = [round(evaluate(chi, n).real) for n in range(1, 7)]
        assert got == [1, 1, -1, 1, -1, -1]

    def test_p13_even(self):
        assert legendre_character(13).parity == 1  # 13 = 1 mod 4

    def test_quadratic_residue_agreement(self):
        for p in [11, 29, 97]:
            chi = legendre_character(p)
            for n in range(1, p):
                euler = pow(n, (p - 1) // 2, p)
                want = 1 if euler == 1 else -1
                assert abs(evaluate(chi, n) - want) < 1e-12

    def test_rejects_non_odd_primes(self):
        for bad in [2, 9, 15, 1]:
            with pytest.raises(DomainError):
                legendre_character(bad)


class TestOrthogonality:
    def test_row_sums_vanish(self):
        for q in range(3, 301):
            ctx = arith.unit_group(q)
            chars = enumerate_characters(ctx)
            vm = value_matrix(ctx, chars)
            sums = vm.sum(axis=1)
            for chi, s in zip(chars, sums):
                if not chi.principal:
                    assert abs(s) <= 1e-10 * math.sqrt(q), chi.label

    def test_column_sums_vanish(self):
        for q in [7, 12, 36, 101]:
            ctx = arith.unit_group(q)
            vm = value_matrix(ctx, enumerate_characters(ctx))
            col = vm.sum(axis=0)
            for n in range(2, q):
                if math.gcd(n, q) == 1:
                    assert abs(col[n]) <= 1e-10 * math.sqrt(q)

    def test_real_characters_closed_under_product(self):
        for q in [8, 12, 15, 24]:
            chars = enumerate_characters(arith.unit_group(q))
            orders = [int(o) for o in arith.unit_group(q).orders]
            reals = {c.exponent_vector for c in chars if c.real}
            for a in reals:
                for b in reals:
                    prod = tuple((x + y) % o for x, y, o in zip(a, b, orders))
                    assert prod in reals


class TestTablesAndLabels:
    def test_value_table_matches_evaluate(self):
        for q in [5, 8, 45]:
            for chi in enumerate_characters(arith.unit_group(q)):
                vt = value_table(chi)
                for n in range(q):
                    assert abs(vt[n] - evaluate(chi, n)) < 1e-15

    def test_real_value_table_exact(self):
        chi = legendre_character(11)
        row = real_value_table(chi)
        for n in range(11):
            assert row[n] == round(evaluate(chi, n).real)

    def test_real_value_table_rejects_complex_character(self):
        chi = next(
            c for c in enumerate_characters(arith.unit_group(5)) if c.order == 4
        )
        with pytest.raises(DomainError):
            real_value_table(chi)

    def test_label_roundtrip(self):
        for q in [5, 8, 15, 97]:
            for chi in enumerate_characters(arith.unit_group(q)):
                back = character_from_label(chi.label)
                assert back == chi

    def test_label_format(self):
        assert legendre_character(7).label == "q=7;e=3"

    def test_bad_labels_rejected(self):
        for bad in ["", "q=5", "q=5;e=1,2", "nope"]:
            with pytest.raises(DomainError):
                character_from_label(bad)

    def test_conjugate_inverts_values(self):
        for chi in enumerate_characters(arith.unit_group(13)):
            bar = chi.conjugate()
            for n in range(1, 13):
                assert abs(evaluate(bar, n) - evaluate(chi, n).conjugate()) < 1e-14
