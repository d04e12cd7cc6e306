"""Unit-group, factorization, sieve, and continued-fraction tests.

Oracles are independent of the paths they check: Miller-Rabin witnesses
recomputed in-test, a segmented sieve for the prime count, brute-force
best-approximation search, and direct gcd counting for the totient.
"""

import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charsum_lab import arith
from charsum_lab.errors import DomainError


def mr_is_prime(n: int) -> bool:
    """Independent deterministic Miller-Rabin oracle."""
    if n < 2:
        return False
    small = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
    for p in small:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class TestFactorize:
    def test_twelve(self):
        assert arith.factorize(12).factors == ((2, 2), (3, 1))

    def test_prime(self):
        assert arith.factorize(97).factors == ((97, 1),)

    def test_big_prime(self):
        n = 10**9 + 7
        assert mr_is_prime(n)
        assert arith.factorize(n).factors == ((n, 1),)

    def test_below_two_rejected(self):
        with pytest.raises(DomainError):
            arith.factorize(1)
        with pytest.raises(DomainError):
            arith.factorize(0)

    def test_above_word_rejected(self):
        with pytest.raises(DomainError):
            arith.factorize(2**63)

    def test_invariants(self):
        for n in [2, 36, 720, 2**40 - 1, 600851475143]:
            f = arith.factorize(n)
            prod = 1
            for p, e in f.factors:
                assert mr_is_prime(p)
                assert e >= 1
                prod *= p**e
            assert prod == n
            assert list(f.primes) == sorted(set(f.primes))

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(
            st.sampled_from([2, 3, 5, 7, 11, 13, 101, 65537, 1000003]),
            min_size=1,
            max_size=5,
        )
    )
    def test_multiply_roundtrip(self, primes):
        n = 1
        for p in primes:
            n *= p
        if n >= 2**40:
            return
        f = arith.factorize(n)
        prod = 1
        for p, e in f.factors:
            prod *= p**e
        assert prod == n


class TestEulerPhi:
    def test_examples(self):
        assert arith.euler_phi(1) == 1
        assert arith.euler_phi(arith.factorize(12)) == 4
        assert arith.euler_phi(arith.factorize(2048)) == 1024

    def test_against_gcd_count(self):
        # brute force: phi(q) = #{0 <= n < q : gcd(n, q) = 1}
        for q in range(2, 10**4 + 1):
            counted = int((np.gcd(np.arange(q), q) == 1).sum())
            assert arith.euler_phi(q) == counted


def _mod_powers(g: int, order: int, q: int) -> np.ndarray:
    """g^0..g^(order-1) mod q, blocked so the serial loop stays short."""
    out = np.empty(order, dtype=np.int64)
    block = min(1024, order)
    base = np.empty(block, dtype=np.int64)
    cur = 1
    for j in range(block):
        base[j] = cur
        cur = cur * g % q
    gb = pow(g, block, q)
    start, k0 = 1, 0
    while k0 < order:
        cnt = min(block, order - k0)
        out[k0 : k0 + cnt] = start * base[:cnt] % q
        start = start * gb % q
        k0 += cnt
    return out


class TestUnitGroup:
    def test_q5_smallest_primitive_root(self):
        ctx = arith.unit_group(5)
        assert ctx.generators == ((2, 4),)
        # brute-force order check of 2 mod 5
        assert sorted(pow(2, k, 5) for k in range(4)) == [1, 2, 3, 4]

    def test_q8_classical_structure(self):
        ctx = arith.unit_group(8)
        assert ctx.generators == ((7, 2), (5, 2))

    def test_q15_crt(self):
        ctx = arith.unit_group(15)
        assert sorted(o for _, o in ctx.generators) == [2, 4]
        assert ctx.phi == 8
        # brute-force group enumeration
        units = {n for n in range(15) if math.gcd(n, 15) == 1}
        generated = set()
        (g1, o1), (g2, o2) = ctx.generators
        for i in range(o1):
            for j in range(o2):
                generated.add(pow(g1, i, 15) * pow(g2, j, 15) % 15)
        assert generated == units

    def test_degenerate_q1(self):
        ctx = arith.unit_group(1)
        assert ctx.phi == 1
        assert ctx.generators == ()

    def test_refuses_large(self):
        with pytest.raises(DomainError):
            arith.unit_group(arith.MAX_MODULUS + 1)

    def test_orders_multiply_to_phi(self):
        for q in range(2, 500):
            ctx = arith.unit_group(q)
            prod = 1
            for _, o in ctx.generators:
                prod *= o
            assert prod == arith.euler_phi(q) == ctx.phi

    def test_reconstruction_exhaustive(self):
        # every coprime n is rebuilt from its exponent vector, q <= 10^4
        for q in range(2, 10**4 + 1):
            ctx = arith.unit_group(q)
            units = np.flatnonzero(ctx.unit_mask)
            rebuilt = np.ones(len(units), dtype=np.int64)
            for i, (g, order) in enumerate(ctx.generators):
                powers = _mod_powers(g, order, q)
                rebuilt = rebuilt * powers[ctx.dlog_table[units, i]] % q
            assert np.array_equal(rebuilt, units), f"reconstruction failed mod {q}"

    def test_dlog_rejects_nonunit(self):
        ctx = arith.unit_group(12)
        with pytest.raises(DomainError):
            ctx.dlog(4)


def segmented_sieve_count(limit: int, segment: int = 10**5) -> int:
    """Independent segmented sieve, counting primes <= limit."""
    base = []
    flags = bytearray([1]) * (int(limit**0.5) + 2)
    flags[0:2] = b"\x00\x00"
    for i in range(2, len(flags)):
        if flags[i]:
            base.append(i)
            for j in range(i * i, len(flags), i):
                flags[j] = 0
    count = 0
    lo = 2
    while lo <= limit:
        hi = min(lo + segment, limit + 1)
        seg = bytearray([1]) * (hi - lo)
        for p in base:
            if p * p >= hi:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            for j in range(start, hi, p):
                seg[j - lo] = 0
        count += sum(seg)
        lo = hi
    return count


class TestSieve:
    def test_ten(self):
        assert list(arith.sieve_primes(10).primes) == [2, 3, 5, 7]

    def test_pi_100(self):
        assert len(arith.sieve_primes(100)) == 25

    def test_million_vs_segmented(self):
        table = arith.sieve_primes(10**6)
        assert len(table) == segmented_sieve_count(10**6) == 78498

    def test_rejects_below_two(self):
        with pytest.raises(DomainError):
            arith.sieve_primes(1)

    def test_exact_vs_trial_division(self):
        primes = set(arith.sieve_primes(200).primes.tolist())
        for n in range(2, 201):
            is_p = all(n % d for d in range(2, int(n**0.5) + 1))
            assert (n in primes) == is_p


class TestConvergents:
    def test_zero(self):
        assert arith.convergents(0.0, 10) == [(0, 1)]

    def test_one_third_exact(self):
        conv = arith.convergents(Fraction(1, 3), 10)
        assert conv[-1] == (1, 3)

    def test_reduced_and_monotone(self):
        rng = random.Random(7)
        for _ in range(200):
            alpha = rng.random()
            conv = arith.convergents(alpha, 500)
            errs = [abs(alpha - r / s) for r, s in conv]
            for r, s in conv:
                assert math.gcd(r, s) == 1
                assert s <= 500
            assert all(b <= a + 1e-18 for a, b in zip(errs, errs[1:]))

    def test_best_approximation_vs_brute_force(self):
        # every convergent past the zeroth beats all smaller denominators
        for alpha in [0.3183098, 0.7182818, 0.1234567]:
            conv = arith.convergents(alpha, 200)
            for r, s in conv[1:]:
                err = abs(alpha - r / s)
                for s2 in range(1, s + 1):
                    r2 = round(alpha * s2)
                    assert err <= abs(alpha - r2 / s2) + 1e-15

    def test_reciprocal_pi_contains_1_3(self):
        conv = arith.convergents(0.3183098861837907, 200)
        assert (1, 3) in conv
