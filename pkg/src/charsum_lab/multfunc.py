"""Real multiplicative functions bounded by 1: mean values, the pretentious
distance functional behind Halasz-type mean-value bounds, mean-value
difference ratios, and the short-sum threshold scan.

The distance functional is

    S(x, T) = min_{|gamma| <= 2T} sum_{p <= x} (1 - Re(f(p) p^{-i gamma})) / p,

minimized by a coarse grid plus golden-section refinement; the associated
mean-value bound is (1 + S) e^{-S} + 1/sqrt(T).  For real f the gamma = 0
specialization of the summand is (1 - f(p))/p, which is also the second
branch of the capped distance min(log log x + K, sum (1 - f(p))/p).

Short-sum thresholds are computed with exact integer arithmetic: for a
real character the partial sums are integers, and |S(N)| <= (a/b) N is
decided by comparing b^2 S(N)^2 with a^2 N^2.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .arith import factorize, primes_up_to
from .characters import (
    DirichletCharacter,
    character_from_label,
    legendre_character,
    real_value_table,
)
from .errors import DomainError

DEFAULT_SIEVE_XMAX = 10**6
DEFAULT_PERIODIC_XMAX = 10**12


class MultiplicativeFunction:
    """A real multiplicative function with -1 <= f <= 1 on a bounded domain.

    Two backings: a periodic value row (character-backed instances, O(1)
    prefix sums anywhere below x_max) or a prime-power rule expanded by a
    smallest-prime-factor sieve up to x_max.
    """

    def __init__(self, name, x_max, prime_power_fn=None, periodic=None):
        if prime_power_fn is None and periodic is None:
            raise DomainError("need a prime-power rule or a periodic row")
        self.name = name
        self.x_max = x_max
        self._ppf = prime_power_fn
        self._dense = None
        self._period = 0
        if periodic is not None:
            q, row = periodic
            self._period = int(q)
            self._row = np.asarray(row, dtype=np.float64)
            self._row_prefix = np.concatenate(
                [[0.0], np.cumsum(np.concatenate([self._row[1:], self._row[:1]]))]
            )

    # -- construction --------------------------------------------------------

    @classmethod
    def ones(cls, x_max: int = DEFAULT_PERIODIC_XMAX) -> "MultiplicativeFunction":
        return cls("one", x_max, periodic=(1, np.array([1.0])))

    @classmethod
    def liouville(cls, x_max: int = DEFAULT_SIEVE_XMAX) -> "MultiplicativeFunction":
        return cls("liouville", x_max, prime_power_fn=lambda p, k: (-1.0) ** k)

    @classmethod
    def from_character(
        cls, chi: DirichletCharacter, x_max: int = DEFAULT_PERIODIC_XMAX
    ) -> "MultiplicativeFunction":
        if not chi.real:
            raise DomainError(f"{chi.label} is not real-valued")
        row = real_value_table(chi).astype(np.float64)
        return cls(f"char:{chi.label}", x_max, periodic=(chi.modulus, row))

    @classmethod
    def legendre(cls, p: int, x_max: int = DEFAULT_PERIODIC_XMAX):
        return cls.from_character(legendre_character(p), x_max)

    @classmethod
    def from_table(cls, path, x_max: int = DEFAULT_SIEVE_XMAX):
        """CSV rows "p,k,value"; a header line is allowed."""
        table: dict[tuple[int, int], float] = {}
        with open(path, newline="") as fh:
            for rec in csv.reader(fh):
                if not rec or rec[0].strip().lower() == "p":
                    continue
                p, k, v = int(rec[0]), int(rec[1]), float(rec[2])
                if not -1.0 <= v <= 1.0:
                    raise DomainError(f"table value {v} at ({p},{k}) outside [-1,1]")
                table[(p, k)] = v

        def ppf(p, k):
            try:
                return table[(p, k)]
            except KeyError:
                raise DomainError(f"table is missing f({p}^{k})") from None

        return cls(f"table:{path}", x_max, prime_power_fn=ppf)

    @classmethod
    def from_spec(cls, spec: str, x_max: int | None = None):
        """Parse "one" | "legendre:<p>" | "liouville" | "char:<label>" | "table:<path>"."""
        kind, _, arg = spec.partition(":")
        if kind == "one":
            return cls.ones(x_max or DEFAULT_PERIODIC_XMAX)
        if kind == "liouville":
            return cls.liouville(x_max or DEFAULT_SIEVE_XMAX)
        if kind == "legendre":
            return cls.legendre(int(arg), x_max or DEFAULT_PERIODIC_XMAX)
        if kind == "char":
            return cls.from_character(
                character_from_label(arg), x_max or DEFAULT_PERIODIC_XMAX
            )
        if kind == "table":
            return cls.from_table(arg, x_max or DEFAULT_SIEVE_XMAX)
        raise DomainError(f"unknown multiplicative-function spec {spec!r}")

    # -- evaluation -----------------------------------------------------------

    def prime_power_value(self, p: int, k: int) -> float:
        if self._period:
            return float(self._row[pow(p, k, self._period)])
        return float(self._ppf(p, k))

    def at(self, n: int) -> float:
        """f(n) through the prime-power factorization (f(1) = 1)."""
        if n < 1 or n > self.x_max:
            raise DomainError(f"n={n} outside the domain [1, {self.x_max}]")
        if n == 1:
            return 1.0
        if self._period:
            return float(self._row[n % self._period])
        out = 1.0
        for p, k in factorize(n):
            out *= self._ppf(p, k)
        return out

    def _dense_values(self, N: int) -> np.ndarray:
        """f(0..N) for sieve-backed functions (f(0) slot unused, set 0)."""
        if self._dense is not None and len(self._dense) > N:
            return self._dense
        size = N
        spf = _spf_sieve(size)
        f = np.zeros(size + 1, dtype=np.float64)
        f[1] = 1.0
        kexp = np.zeros(size + 1, dtype=np.int32)
        pk = np.ones(size + 1, dtype=np.int64)
        ppf_cache: dict[tuple[int, int], float] = {}
        ppf = self._ppf
        for n in range(2, size + 1):
            p = int(spf[n])
            m = n // p
            if m % p == 0:
                kexp[n] = kexp[m] + 1
                pk[n] = pk[m] * p
            else:
                kexp[n] = 1
                pk[n] = p
            key = (p, int(kexp[n]))
            v = ppf_cache.get(key)
            if v is None:
                v = float(ppf(p, key[1]))
                if not -1.0 <= v <= 1.0:
                    raise DomainError(f"f({p}^{key[1]}) = {v} outside [-1, 1]")
                ppf_cache[key] = v
            f[n] = v * f[n // pk[n]]
        self._dense = f
        return f

    def values_at(self, ns: np.ndarray) -> np.ndarray:
        """f at each n in ns (vectorized)."""
        ns = np.asarray(ns, dtype=np.int64)
        if ns.size and (ns.max() > self.x_max or ns.min() < 1):
            raise DomainError("values_at outside the domain")
        if self._period:
            return self._row[ns % self._period]
        dense = self._dense_values(int(ns.max()) if ns.size else 1)
        return dense[ns]

    def prefix_sum(self, N: int) -> float:
        """sum_{n<=N} f(n)."""
        if N < 0 or N > self.x_max:
            raise DomainError(f"N={N} outside the domain [0, {self.x_max}]")
        if N == 0:
            return 0.0
        if self._period:
            q = self._period
            full, rem = divmod(N, q)
            return float(full * self._row_prefix[q] + self._row_prefix[rem])
        dense = self._dense_values(N)
        return float(dense[1 : N + 1].sum())


@lru_cache(maxsize=4)
def _spf_sieve(N: int) -> np.ndarray:
    """Smallest prime factor for 2..N (index 0,1 unused)."""
    spf = np.zeros(N + 1, dtype=np.int64)
    for i in range(2, math.isqrt(N) + 1):
        if spf[i] == 0:
            sl = spf[i * i :: i]
            sl[sl == 0] = i
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    return spf


def mean_value(f: MultiplicativeFunction, x: float) -> float:
    """M(x, f) = (1/x) sum_{n<=x} f(n); always in [-1, 1]."""
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    if x > f.x_max:
        raise DomainError(f"x={x:g} beyond the domain limit {f.x_max:g}")
    return f.prefix_sum(int(math.floor(x))) / x


# ---------------------------------------------------------------------------
# the distance functional


@dataclass(frozen=True)
class HalaszEvaluation:
    x: float
    T: float
    gamma_star: float
    S_value: float
    S_prime_value: float
    rhs: float


def _golden_minimize(g, lo, hi, xtol=1e-8):
    """Golden-section minimum of a unimodal-enough scalar g on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = g(c), g(d)
    while b - a > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = g(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = g(d)
    xm = (a + b) / 2.0
    return xm, g(xm)


def halasz_distance(
    f: MultiplicativeFunction, x: float, T: float, grid_density: int = 64
) -> HalaszEvaluation:
    """Minimize sum_{p<=x} (1 - Re(f(p) p^{-i gamma}))/p over |gamma| <= 2T.

    Coarse grid (grid_density points per unit of gamma), then golden-section
    refinement around the best grid point to 1e-8; refinement never
    increases the value.
    """
    if x < 3:
        raise DomainError(f"x must be >= 3, got {x}")
    if T < 1:
        raise DomainError(f"T must be >= 1, got {T}")
    primes = primes_up_to(int(math.floor(x)))
    fp = f.values_at(primes)
    w = 1.0 / primes
    lp = np.log(primes.astype(np.float64))
    count = int(round(4 * T * grid_density)) + 1
    grid = np.linspace(-2.0 * T, 2.0 * T, count)
    # termwise (1 - f(p) cos(gamma log p))/p keeps every summand >= 0, so
    # the minimum cannot dip below 0 through cancellation
    vals = ((1.0 - np.cos(np.outer(grid, lp)) * fp) * w).sum(axis=1)
    i = int(np.argmin(vals))
    g_best, v_best = float(grid[i]), float(vals[i])

    def g(gamma: float) -> float:
        return float(((1.0 - np.cos(gamma * lp) * fp) * w).sum())

    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, count - 1)]
    g_ref, v_ref = _golden_minimize(g, float(lo), float(hi))
    if v_ref < v_best:
        g_best, v_best = g_ref, v_ref
    s_prime = capped_distance(f, x, 0.0)
    rhs = (1.0 + v_best) * math.exp(-v_best) + 1.0 / math.sqrt(T)
    return HalaszEvaluation(
        x=float(x),
        T=float(T),
        gamma_star=g_best,
        S_value=v_best,
        S_prime_value=s_prime,
        rhs=rhs,
    )


@dataclass(frozen=True)
class HalaszCheck:
    M_abs: float
    rhs: float
    ratio: float
    evaluation: HalaszEvaluation


def halasz_mean_bound_check(
    f: MultiplicativeFunction, x: float, T: float, grid_density: int = 64
) -> HalaszCheck:
    """Measured ratio |M(x,f)| / ((1 + S) e^{-S} + 1/sqrt(T))."""
    ev = halasz_distance(f, x, T, grid_density)
    m_abs = abs(mean_value(f, x))
    return HalaszCheck(M_abs=m_abs, rhs=ev.rhs, ratio=m_abs / ev.rhs, evaluation=ev)


def capped_distance(f: MultiplicativeFunction, x: float, K: float) -> float:
    """min(log log x + K, sum_{p<=x} (1 - f(p))/p); K is the tunable O(1)."""
    if x < 3:
        raise DomainError(f"x must be >= 3, got {x}")
    primes = primes_up_to(int(math.floor(x)))
    prime_sum = float(((1.0 - f.values_at(primes)) / primes).sum())
    return min(math.log(math.log(x)) + K, prime_sum)


# ---------------------------------------------------------------------------
# mean-value differences


@dataclass(frozen=True)
class MeanDifferenceCheck:
    diff: float
    rhs_shape: float
    ratio: float


def mean_difference_bound_check(
    f: MultiplicativeFunction, x: float, xp: float
) -> MeanDifferenceCheck:
    """|M(x') - M(x)| against (log(2x'/x)/log x') exp(sum_{p<=x'} (1-f(p))/p)."""
    if not 3 <= x <= xp:
        raise DomainError(f"need 3 <= x <= x', got x={x:g}, x'={xp:g}")
    if xp > f.x_max:
        raise DomainError(f"x'={xp:g} beyond the domain limit {f.x_max:g}")
    diff = abs(mean_value(f, xp) - mean_value(f, x))
    primes = primes_up_to(int(math.floor(xp)))
    prime_sum = float(((1.0 - f.values_at(primes)) / primes).sum())
    rhs = math.log(2.0 * xp / x) / math.log(xp) * math.exp(prime_sum)
    return MeanDifferenceCheck(diff=diff, rhs_shape=rhs, ratio=diff / rhs)


def mean_difference_ratio(
    f: MultiplicativeFunction,
    x: float,
    xp: float,
    eps1: float,
    b_regime: float = 4.0,
) -> float:
    """|M(x') - M(x)| / (log(2x'/x)/log x')^{1/2 - eps1}, for x' <= x^B."""
    if not 3 <= x <= xp:
        raise DomainError(f"need 3 <= x <= x', got x={x:g}, x'={xp:g}")
    if xp > x**b_regime:
        raise DomainError(
            f"x'={xp:g} exceeds x^B={x**b_regime:g}; outside the bounded-power regime"
        )
    diff = abs(mean_value(f, xp) - mean_value(f, x))
    denom = (math.log(2.0 * xp / x) / math.log(xp)) ** (0.5 - eps1)
    return diff / denom


@dataclass(frozen=True)
class DistanceThreshold:
    """Both readings of the threshold log(log x'/log(2x'/x))^{1/2+eps}.

    ``exponent_inside`` binds the power to the argument of the outer log,
    i.e. (1/2+eps) * log(ratio); ``exponent_outside`` raises the outer log,
    i.e. (log ratio)^{1/2+eps}.  ``value`` follows the inside reading.
    """

    value: float
    exponent_inside: float
    exponent_outside: float


def distance_threshold(x: float, xp: float, eps: float) -> DistanceThreshold:
    if not 3 <= x <= xp:
        raise DomainError(f"need 3 <= x <= x', got x={x:g}, x'={xp:g}")
    ratio = math.log(xp) / math.log(2.0 * xp / x)
    log_ratio = math.log(ratio)
    inside = (0.5 + eps) * log_ratio
    outside = log_ratio ** (0.5 + eps) if log_ratio >= 0 else float("nan")
    return DistanceThreshold(
        value=inside, exponent_inside=inside, exponent_outside=outside
    )


# ---------------------------------------------------------------------------
# short-sum thresholds


@dataclass(frozen=True)
class ShortSumResult:
    """Least N0 with |S(N)| <= eps*N for every N in [N0, horizon]."""

    p: int
    eps: Fraction
    N0: int
    delta_emp: float
    horizon: int


def _parse_eps(value) -> Fraction:
    eps = value if isinstance(value, Fraction) else Fraction(str(value))
    if not 0 < eps <= 1:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    if eps.denominator > 100:
        raise DomainError(
            f"eps denominator {eps.denominator} > 100; exact comparisons need small denominators"
        )
    return eps


def short_sum_thresholds(
    p: int, eps_list, horizon_exp: float = 0.5
) -> list[ShortSumResult]:
    """Exact-threshold scan for the quadratic character mod p."""
    chi = legendre_character(p)
    horizon = int(math.floor(p**horizon_exp))
    if horizon < 1:
        raise DomainError(f"horizon p^{horizon_exp} < 1 at p={p}")
    row = real_value_table(chi).astype(np.int64)
    n = np.arange(1, horizon + 1, dtype=np.int64)
    s = np.cumsum(row[n % p])
    out = []
    for eps_in in eps_list:
        eps = _parse_eps(eps_in)
        a, b = eps.numerator, eps.denominator
        viol = b * b * s * s > a * a * n * n
        idx = np.flatnonzero(viol)
        n0 = int(n[idx[-1]]) + 1 if idx.size else 1
        delta = 0.25 - math.log(n0) / math.log(p)
        out.append(
            ShortSumResult(p=p, eps=eps, N0=n0, delta_emp=delta, horizon=horizon)
        )
    return out


def _short_sum_worker(args) -> list[ShortSumResult]:
    p, eps_list, horizon_exp = args
    return short_sum_thresholds(p, eps_list, horizon_exp)


def short_sum_scan(
    p_list, eps_list, horizon_exp: float = 0.5, workers: int = 1
) -> list[ShortSumResult]:
    """Thresholds for every (p, eps); work units over p are independent."""
    eps_parsed = [_parse_eps(e) for e in eps_list]
    jobs = [(int(p), eps_parsed, horizon_exp) for p in sorted(p_list)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_short_sum_worker, jobs, chunksize=8))
    else:
        chunks = [_short_sum_worker(j) for j in jobs]
    return [r for chunk in chunks for r in chunk]
