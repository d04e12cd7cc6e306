"""Integer and residue-group arithmetic.

Factorization, totients, unit-group generators with dense discrete-log
tables, prime sieves, and continued-fraction convergents.  Everything here
is exact integer arithmetic; floating point only enters in callers.

All returned structures are immutable after construction and safe to share
across threads.  Construction itself is single-threaded per value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError

# Dense dlog tables are refused above this modulus (explicit memory bound).
MAX_MODULUS = 10**7

_TRIAL_LIMIT = 10**6
_INT64_MAX = 2**63 - 1

# Deterministic Miller-Rabin witness set, valid for all n < 3.3e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for n < 2^64)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """Deterministic Brent-cycle rho; returns a nontrivial factor of composite odd n."""
    if n % 2 == 0:
        return 2
    for c in range(1, 64):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = math.gcd(abs(x - y), n)
        if d != n:
            return d
    raise ArithmeticError(f"rho failed to split {n}")


@dataclass(frozen=True)
class Factorization:
    """n as an ordered product of prime powers."""

    n: int
    factors: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)


def factorize(n: int) -> Factorization:
    """Factor n into prime powers (trial division, then Miller-Rabin + rho).

    Raises DomainError below 2 or above 2^63 - 1.
    """
    if n < 2:
        raise DomainError(f"factorize requires n >= 2, got {n}")
    if n > _INT64_MAX:
        raise DomainError(f"factorize requires n <= 2^63 - 1, got {n}")
    m = n
    factors: list[tuple[int, int]] = []
    for p in (2, 3, 5):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    d = 7
    # 2,4,2,4,... wheel over residues coprime to 30 would be marginally faster;
    # a 2-4 wheel mod 6 is plenty at this scale.
    step = 4
    while d <= _TRIAL_LIMIT and d * d <= m:
        if m % d == 0:
            e = 0
            while m % d == 0:
                m //= d
                e += 1
            factors.append((d, e))
        d += step
        step = 6 - step
    if m > 1:
        large = sorted(_split_large(m))
        for p in sorted(set(large)):
            factors.append((p, large.count(p)))
    factors.sort()
    return Factorization(n, tuple(factors))


def _split_large(m: int) -> list[int]:
    """Fully factor m, all of whose prime factors exceed the trial limit."""
    if is_prime(m):
        return [m]
    d = _pollard_rho(m)
    return _split_large(d) + _split_large(m // d)


def euler_phi(f: Factorization | int) -> int:
    """Euler totient from a factorization (or a plain integer, n >= 1)."""
    if isinstance(f, int):
        if f < 1:
            raise DomainError(f"euler_phi requires n >= 1, got {f}")
        if f == 1:
            return 1
        f = factorize(f)
    phi = 1
    for p, e in f.factors:
        phi *= (p - 1) * p ** (e - 1)
    return phi


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    if n == 1:
        return [1]
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


# ---------------------------------------------------------------------------
# prime sieves


@dataclass(frozen=True)
class PrimeTable:
    """Ascending primes <= limit."""

    limit: int
    primes: np.ndarray  # int64, ascending

    def __len__(self) -> int:
        return len(self.primes)


def sieve_primes(limit: int) -> PrimeTable:
    """Exact Eratosthenes sieve up to limit inclusive."""
    if limit < 2:
        raise DomainError(f"sieve_primes requires limit >= 2, got {limit}")
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return PrimeTable(limit, np.flatnonzero(flags).astype(np.int64))


@lru_cache(maxsize=8)
def _cached_primes(limit: int) -> PrimeTable:
    return sieve_primes(limit)


def primes_up_to(limit: int) -> np.ndarray:
    """Primes <= limit as an int64 array, cached at round sizes."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    size = 1 << max(11, (max(limit, 2) - 1).bit_length())
    table = _cached_primes(size)
    return table.primes[table.primes <= limit]


# ---------------------------------------------------------------------------
# continued fractions


def convergents(alpha: float | Fraction, s_max: int) -> list[tuple[int, int]]:
    """Continued-fraction convergents r/s of alpha with s <= s_max.

    Returned in lowest terms with nondecreasing s.  A float alpha is taken
    at its exact binary-rational value.
    """
    if s_max < 1:
        raise DomainError(f"convergents requires s_max >= 1, got {s_max}")
    frac = Fraction(alpha)
    num, den = frac.numerator, frac.denominator
    a0 = num // den
    rem = num - a0 * den
    p_prev, q_prev = 1, 0
    p, q = a0, 1
    out = [(p, q)]
    n, d = den, rem
    while d != 0:
        a = n // d
        n, d = d, n - a * d
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        if q > s_max:
            break
        out.append((p, q))
    return out


# ---------------------------------------------------------------------------
# unit group structure


@dataclass(frozen=True)
class UnitGroupStructure:
    """Generators and a dense discrete-log table for (Z/q)^*.

    ``dlog_table[n, i]`` is the exponent of generator i in n, or -1 when
    gcd(n, q) > 1.  ``exponent`` is lcm of the generator orders; angle
    numerators of character values live in Z/exponent.
    """

    modulus: int
    generators: tuple[tuple[int, int], ...]  # (residue, order) pairs
    orders: np.ndarray  # int64, one per generator
    dlog_table: np.ndarray  # int32, shape (q, k)
    unit_mask: np.ndarray  # bool, shape (q,)
    phi: int
    exponent: int

    def dlog(self, n: int) -> tuple[int, ...]:
        """Exponent vector of n, raising DomainError off the unit group."""
        n %= self.modulus
        if not self.unit_mask[n]:
            raise DomainError(f"{n} is not a unit mod {self.modulus}")
        return tuple(int(v) for v in self.dlog_table[n])


def _smallest_primitive_root(pe: int, p: int, e: int) -> int:
    """Smallest primitive root mod p^e (p odd), found by order tests."""
    phi = (p - 1) * p ** (e - 1)
    prime_divs = [pp for pp, _ in factorize(phi).factors]
    g = 2
    while True:
        if math.gcd(g, pe) == 1 and all(
            pow(g, phi // ell, pe) != 1 for ell in prime_divs
        ):
            return g
        g += 1


def _dlog_cyclic(pe: int, g: int, order: int) -> np.ndarray:
    """Dense dlog table for the cyclic group generated by g mod pe.

    Powers are filled in blocks so the serial multiply loop stays short.
    """
    dlog = np.full(pe, -1, dtype=np.int32)
    block = min(1024, order)
    base = np.empty(block, dtype=np.int64)
    cur = 1
    for j in range(block):
        base[j] = cur
        cur = cur * g % pe
    g_block = pow(g, block, pe)
    start = 1
    k0 = 0
    while k0 < order:
        cnt = min(block, order - k0)
        vals = (start * base[:cnt]) % pe
        dlog[vals] = np.arange(k0, k0 + cnt, dtype=np.int32)
        start = start * g_block % pe
        k0 += cnt
    return dlog


def _local_structure(p: int, e: int) -> tuple[list[tuple[int, int]], list[np.ndarray]]:
    """Generators and per-generator dlog columns for (Z/p^e)^*."""
    pe = p**e
    if p == 2:
        if e == 1:
            return [], []
        if e == 2:
            col = np.full(4, -1, dtype=np.int32)
            col[1] = 0
            col[3] = 1
            return [(3, 2)], [col]
        # e >= 3: units are (-1)^s * 5^k
        half_order = pe // 4
        dlog5 = _dlog_cyclic(pe, 5, half_order)
        odd = np.arange(1, pe, 2, dtype=np.int64)
        sign = (odd % 4 == 3).astype(np.int32)
        target = np.where(sign == 1, pe - odd, odd)
        col_s = np.full(pe, -1, dtype=np.int32)
        col_k = np.full(pe, -1, dtype=np.int32)
        col_s[odd] = sign
        col_k[odd] = dlog5[target]
        return [(pe - 1, 2), (5, half_order)], [col_s, col_k]
    phi = (p - 1) * p ** (e - 1)
    g = _smallest_primitive_root(pe, p, e)
    return [(g, phi)], [_dlog_cyclic(pe, g, phi)]


def _crt_lift(residue: int, pe: int, q: int) -> int:
    """x = residue mod pe, x = 1 mod q/pe."""
    other = q // pe
    if other == 1:
        return residue % q
    inv = pow(other, -1, pe)
    return (1 + other * ((residue - 1) * inv % pe)) % q


@lru_cache(maxsize=256)
def unit_group(q: int) -> UnitGroupStructure:
    """Structure of (Z/q)^*: CRT generators plus a complete dlog table.

    Odd prime powers get one generator (the smallest primitive root); 2^e
    with e >= 3 gets two (-1 and 5).  Construction refuses q > 10^7 so the
    dense table's memory stays bounded.
    """
    if q < 1:
        raise DomainError(f"unit_group requires q >= 1, got {q}")
    if q > MAX_MODULUS:
        raise DomainError(f"unit_group refuses q > {MAX_MODULUS} (dense dlog table)")
    if q == 1:
        return UnitGroupStructure(
            modulus=1,
            generators=(),
            orders=np.empty(0, dtype=np.int64),
            dlog_table=np.zeros((1, 0), dtype=np.int32),
            unit_mask=np.ones(1, dtype=bool),
            phi=1,
            exponent=1,
        )
    generators: list[tuple[int, int]] = []
    columns: list[np.ndarray] = []
    idx = np.arange(q, dtype=np.int64)
    for p, e in factorize(q).factors:
        pe = p**e
        local_gens, local_cols = _local_structure(p, e)
        local_idx = idx % pe
        for (g, order), col in zip(local_gens, local_cols):
            generators.append((_crt_lift(g, pe, q), order))
            columns.append(col[local_idx])
    unit_mask = np.gcd(idx, q) == 1
    if columns:
        dlog_table = np.stack(columns, axis=1).astype(np.int32)
    else:
        dlog_table = np.zeros((q, 0), dtype=np.int32)
    orders = np.array([o for _, o in generators], dtype=np.int64)
    phi = int(np.prod(orders)) if len(orders) else 1
    exponent = 1
    for o in orders:
        exponent = math.lcm(exponent, int(o))
    return UnitGroupStructure(
        modulus=q,
        generators=tuple(generators),
        orders=orders,
        dlog_table=dlog_table,
        unit_mask=unit_mask,
        phi=phi,
        exponent=exponent,
    )
