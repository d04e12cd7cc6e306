"""Partial character sums, Gauss sums, twisted sums, and the exact
identities tying them together.

Notation used throughout (ASCII): S(N) = sum_{n=1}^N chi(n), e(t) =
exp(2*pi*i*t), and for primitive chi the finite Fourier expansion

    S(N) = (1/g(conj chi)) * sum_{0<|a|<q/2} conj(chi)(a)
           * (e(aN/q) - 1) / (1 - e(-a/q)),

where g(.) is the Gauss sum.  The "inner sum" refers to the weighted
variant with denominator a instead of 1 - e(-a/q); it splits into a head
(|a| <= cutoff) and a tail, and for even chi the head collapses to a sine
series.  All identity contracts here are exact up to float accumulation,
with tolerances scaling like sqrt(q) because the sums carry O(q) unit
terms.

Tables are built once per character and cached; queries are pure and
thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import euler_phi, unit_group
from .characters import (
    DirichletCharacter,
    enumerate_characters,
    value_table,
)
from .errors import DomainError


@dataclass(frozen=True)
class PrefixSumTable:
    """S(0), S(1), ..., S(q) for one character."""

    label: str
    modulus: int
    values: np.ndarray  # complex128, length q + 1
    principal: bool
    phi: int

    def at(self, N: int) -> complex:
        """S(N) for any N >= 0, via periodicity of the value sequence."""
        if N < 0:
            raise DomainError(f"partial sums start at N = 0, got {N}")
        q = self.modulus
        full, rem = divmod(N, q)
        wrap = full * self.phi if self.principal else 0
        return complex(self.values[rem]) + wrap

    @property
    def max_abs(self) -> float:
        return float(np.abs(self.values).max())


@lru_cache(maxsize=64)
def prefix_table(chi: DirichletCharacter) -> PrefixSumTable:
    """Build the cumulative-sum table for chi (O(q), then O(1) queries)."""
    q = chi.modulus
    vt = value_table(chi)
    seq = np.concatenate([vt[1:], vt[:1]])  # chi(1), ..., chi(q-1), chi(q)
    values = np.concatenate([[0j], np.cumsum(seq)])
    return PrefixSumTable(
        label=chi.label,
        modulus=q,
        values=values,
        principal=chi.principal,
        phi=chi.ctx.phi,
    )


def partial_sum(chi: DirichletCharacter, N: int) -> complex:
    """S(N) = sum_{n<=N} chi(n)."""
    return prefix_table(chi).at(N)


def max_partial_sum(chi: DirichletCharacter) -> tuple[int, float]:
    """(N*, |S(N*)|) maximizing |S(N)| over 1 <= N <= q, smallest N on ties."""
    if chi.principal:
        raise DomainError("max_partial_sum is unbounded for the principal character")
    table = prefix_table(chi)
    mags = np.abs(table.values[1:])
    n_star = int(np.argmax(mags)) + 1
    return n_star, float(mags[n_star - 1])


def gauss_sum(chi: DirichletCharacter) -> complex:
    """sum_{a=1}^{q} chi(a) e(a/q), by direct summation."""
    q = chi.modulus
    vt = value_table(chi)
    phases = np.exp(2j * np.pi * np.arange(q) / q)
    return complex(vt @ phases)


def _check_primitive(chi: DirichletCharacter) -> None:
    if chi.modulus < 3:
        raise DomainError("expansion needs q >= 3")
    if not chi.primitive:
        raise DomainError(f"{chi.label} is not primitive; expansion invalid")


def _symmetric_range(q: int) -> np.ndarray:
    """a = 1, ..., floor((q-1)/2); with -a these cover 0 < |a| < q/2."""
    return np.arange(1, (q - 1) // 2 + 1, dtype=np.int64)


def fourier_expansion_sum(chi: DirichletCharacter, N: int) -> complex:
    """S(N) recomputed through the Gauss-sum Fourier expansion (primitive chi)."""
    return complex(fourier_expansion_profile(chi)[N % chi.modulus])


@lru_cache(maxsize=16)
def fourier_expansion_profile(chi: DirichletCharacter) -> np.ndarray:
    """Expansion values for all N = 0..q-1 at once.

    Uses exact integer phases (a*N mod q) through a root-of-unity table, so
    the only float error is the O(q)-term accumulation of the final dot.
    """
    _check_primitive(chi)
    q = chi.modulus
    vt = value_table(chi)
    chibar = np.conj(vt)
    roots = np.exp(2j * np.pi * np.arange(q) / q)
    a = _symmetric_range(q)
    denom_pos = 1.0 - roots[(-a) % q]  # 1 - e(-a/q)
    denom_neg = 1.0 - roots[a % q]  # 1 - e(a/q)
    coef_pos = chibar[a % q] / denom_pos
    coef_neg = chibar[(-a) % q] / denom_neg
    N = np.arange(q, dtype=np.int64)
    phase = roots[(a[:, None] * N[None, :]) % q]  # e(aN/q)
    expansion = coef_pos @ (phase - 1.0) + coef_neg @ (np.conj(phase) - 1.0)
    gbar = gauss_sum(chi.conjugate())
    return expansion / gbar


def inner_weighted_sum(chi: DirichletCharacter, N: int) -> complex:
    """sum_{0<|a|<q/2} conj(chi)(a) (e(aN/q) - 1) / a."""
    _check_primitive(chi)
    head, tail = fourier_split(chi, N, (chi.modulus - 1) / 2)
    return head + tail


def fourier_split(
    chi: DirichletCharacter, N: int, cutoff: float
) -> tuple[complex, complex]:
    """Split the weighted inner sum at |a| <= cutoff.

    Returns (head, tail); head + tail equals the full weighted inner sum.
    Requires 1 <= cutoff < q/2.
    """
    _check_primitive(chi)
    q = chi.modulus
    if not 1 <= cutoff < q / 2:
        raise DomainError(f"cutoff must lie in [1, q/2), got {cutoff}")
    vt = value_table(chi)
    chibar = np.conj(vt)
    roots = np.exp(2j * np.pi * np.arange(q) / q)
    a = _symmetric_range(q)
    af = a.astype(np.float64)
    term_pos = chibar[a % q] * (roots[(a * N) % q] - 1.0) / af
    term_neg = chibar[(-a) % q] * (roots[(-a * N) % q] - 1.0) / (-af)
    head_mask = a <= cutoff
    head = complex(term_pos[head_mask].sum() + term_neg[head_mask].sum())
    tail = complex(term_pos[~head_mask].sum() + term_neg[~head_mask].sum())
    return head, tail


def head_sine_form(chi: DirichletCharacter, N: int, cutoff: float) -> complex:
    """2i sum_{1<=a<=cutoff} conj(chi)(a) sin(2 pi a N / q) / a.

    Equals the head of :func:`fourier_split` when chi is even (the a and -a
    terms pair up); odd chi is rejected.
    """
    if chi.parity != 1:
        raise DomainError("sine form requires an even character")
    q = chi.modulus
    vt = value_table(chi)
    a = np.arange(1, int(cutoff) + 1, dtype=np.int64)
    if a.size == 0:
        return 0j
    sines = np.sin(2.0 * np.pi * ((a * N) % q) / q)
    return complex(2j * np.sum(np.conj(vt[a % q]) * sines / a))


def sqrt_bound_residual(chi: DirichletCharacter, N: int) -> float:
    """K with |S(N)| = (sqrt(q)/2pi)|inner sum| + K*sqrt(q); a measurement."""
    q = chi.modulus
    s_abs = abs(partial_sum(chi, N))
    inner = abs(inner_weighted_sum(chi, N))
    return (s_abs - math.sqrt(q) / (2 * math.pi) * inner) / math.sqrt(q)


# ---------------------------------------------------------------------------
# twisted sums


def twisted_sum(chi: DirichletCharacter, alpha: float, x: float) -> complex:
    """sum_{n<=x} chi(n) e(alpha n), by direct O(x) summation."""
    N = int(math.floor(x))
    if N < 1:
        return 0j
    q = chi.modulus
    vt = value_table(chi)
    n = np.arange(1, N + 1, dtype=np.int64)
    phases = np.exp(2j * np.pi * alpha * n)
    return complex(vt[n % q] @ phases)


@dataclass(frozen=True)
class TwistDecomposition:
    """Divisor-pair regrouping of sum_{n<=u} chi(n) e(rn/s).

    For each d*t = s the coefficient attached to a character psi mod t is
    chi(d)/phi(t) * sum_{1<=a<=t} e(ra/t) conj(psi)(a); evaluation then sums
    coefficient * sum_{m<=u/d} chi(m) psi(m) over all pairs.
    """

    chi_label: str
    r: int
    s: int
    pairs: tuple[tuple[int, int], ...]
    # per pair: list of (psi, coefficient) with coefficient possibly 0
    coefficients: tuple[tuple[tuple[DirichletCharacter, complex], ...], ...]

    def evaluate(self, chi: DirichletCharacter, u: float) -> complex:
        total = 0j
        q = chi.modulus
        vt = value_table(chi)
        for (d, t), coefs in zip(self.pairs, self.coefficients):
            m_max = int(math.floor(u / d))
            if m_max < 1:
                continue
            m = np.arange(1, m_max + 1, dtype=np.int64)
            chi_m = vt[m % q]
            for psi, coef in coefs:
                if coef == 0:
                    continue
                psi_m = value_table(psi)[m % t]
                total += coef * complex(chi_m @ psi_m)
        return total


def build_twist_decomposition(
    chi: DirichletCharacter, r: int, s: int
) -> TwistDecomposition:
    if s < 1:
        raise DomainError(f"s must be positive, got {s}")
    if math.gcd(r, s) != 1:
        raise DomainError(f"r and s must be coprime, got ({r}, {s})")
    pairs = []
    coefficients = []
    for d in range(1, s + 1):
        if s % d:
            continue
        t = s // d
        chi_d = chi(d)
        psis = enumerate_characters(unit_group(t))
        phi_t = euler_phi(t)
        a = np.arange(1, t + 1, dtype=np.int64)
        phases = np.exp(2j * np.pi * r * a / t)
        coefs = []
        for psi in psis:
            if chi_d == 0:
                coefs.append((psi, 0j))
                continue
            psibar = np.conj(value_table(psi)[a % t])
            gauss_like = complex(phases @ psibar)
            coefs.append((psi, chi_d / phi_t * gauss_like))
        pairs.append((d, t))
        coefficients.append(tuple(coefs))
    return TwistDecomposition(
        chi_label=chi.label,
        r=r,
        s=s,
        pairs=tuple(pairs),
        coefficients=tuple(coefficients),
    )


def twisted_decompose(chi: DirichletCharacter, r: int, s: int, u: float) -> complex:
    """Evaluate the twisted sum through the divisor-pair decomposition.

    Contract: agrees with twisted_sum(chi, r/s, u) within 1e-8*(1+sqrt(u)).
    """
    deco = build_twist_decomposition(chi, r, s)
    return deco.evaluate(chi, u)
