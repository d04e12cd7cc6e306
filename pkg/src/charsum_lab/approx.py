"""Dirichlet rational approximation and the range gates built on it.

Given a real alpha, a size M and a quality parameter R with 2 <= R <= M,
Dirichlet's theorem guarantees a reduced fraction r/s with 1 <= s <= M/R
and |alpha - r/s| <= R/(sM).  We realize the guarantee constructively by
taking the continued-fraction convergent with the largest denominator
s <= M/R: the next convergent's denominator exceeds M/R, so best-
approximation theory gives |alpha - r/s| < 1/(s * M/R).

The window gate checks qR/a < N < (q/R)(1 - R/a), the admissible range in
which the small-denominator case of the approximation can be ruled out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import convergents
from .errors import DomainError


@dataclass(frozen=True)
class RationalApproximation:
    """A certified Dirichlet approximant r/s to alpha at scale (M, R)."""

    alpha: float
    M: int
    R: float
    r: int
    s: int
    error: float

    def certificate_holds(self) -> bool:
        """Exact check of all three invariants (gcd, range, error bound)."""
        if math.gcd(self.r, self.s) != 1 or not 1 <= self.s <= self.M / self.R:
            return False
        err = abs(Fraction(self.alpha) - Fraction(self.r, self.s))
        return err <= Fraction(self.R) / (self.s * self.M)


def dirichlet_approx(alpha: float, M: int, R: float) -> RationalApproximation:
    """Largest-denominator convergent of alpha with s <= M/R.

    Requires 2 <= R <= M; the denominator range is empty otherwise.
    """
    if R < 2:
        raise DomainError(f"R must be >= 2, got {R}")
    if R > M:
        raise DomainError(f"R must not exceed M (got R={R}, M={M})")
    s_max = int(math.floor(M / R))
    r, s = convergents(alpha, s_max)[-1]
    err = abs(Fraction(alpha) - Fraction(r, s))
    return RationalApproximation(
        alpha=float(alpha), M=M, R=float(R), r=r, s=s, error=float(err)
    )


@dataclass(frozen=True)
class GateRecord:
    """Result of the admissible-window check for one (q, N) instance."""

    q: int
    N: float
    a_q: float
    R_q: float
    lower: float
    upper: float
    passes: bool


def pv_window_gate(q: int, N: float, a_q: float, R_q: float) -> GateRecord:
    """Does N lie strictly inside (qR/a, (q/R)(1 - R/a))?

    Requires 2 <= R_q < a_q <= q.
    """
    if not (2 <= R_q < a_q <= q):
        raise DomainError(
            f"need 2 <= R_q < a_q <= q, got R_q={R_q}, a_q={a_q}, q={q}"
        )
    lower = q * R_q / a_q
    upper = (q / R_q) * (1.0 - R_q / a_q)
    return GateRecord(
        q=q,
        N=N,
        a_q=a_q,
        R_q=R_q,
        lower=lower,
        upper=upper,
        passes=lower < N < upper,
    )


@dataclass(frozen=True)
class LogPowerWindow:
    """The log-power window, stated two ways.

    ``simplified`` is the literature form (q/(log q)^(c+2), q/(2 (log q)^2)).
    ``gate`` instantiates the admissible window with R = 2 (log q)^2 and
    a = min(2 (log q)^(c+4), q): then qR/a reproduces the simplified lower
    endpoint exactly whenever the cap a <= q does not bind, and the upper
    endpoints differ only by the dropped factor (1 - R/a).  Both gaps have
    the closed forms below ("the simplification gap"); with the unscaled
    R = (log q)^(2+eps) of the derivation the simplified upper endpoint
    would instead overshoot by (log q)^eps / 2, reported as
    ``eps_variant_upper_gap``.
    """

    q: int
    c: float
    eps: float
    simplified_lower: float
    simplified_upper: float
    gate_lower: float
    gate_upper: float
    a_gate: float
    R_gate: float
    a_capped: bool

    @property
    def lower_gap_ratio(self) -> float:
        return self.simplified_lower / self.gate_lower

    @property
    def upper_gap_ratio(self) -> float:
        return self.simplified_upper / self.gate_upper

    @property
    def documented_lower_gap(self) -> float:
        lg = math.log(self.q)
        return min(1.0, self.q / (2.0 * lg ** (self.c + 4)))

    @property
    def documented_upper_gap(self) -> float:
        return 1.0 / (1.0 - self.R_gate / self.a_gate)

    @property
    def eps_variant_upper_gap(self) -> float:
        return math.log(self.q) ** self.eps / 2.0


def log_power_window(q: int, c: float, eps: float) -> LogPowerWindow:
    """Simplified window (q/(log q)^(c+2), q/(2 (log q)^2)) plus the exact gate."""
    if q < 3 or c <= 0 or eps <= 0:
        raise DomainError("need q >= 3, c > 0, eps > 0")
    lg = math.log(q)
    R_q = 2.0 * lg**2
    a_uncapped = 2.0 * lg ** (c + 4)
    a_q = min(a_uncapped, float(q))
    if not 2 <= R_q < a_q:
        raise DomainError(f"window instantiation needs 2 <= R < a; q={q} too small")
    gate = pv_window_gate(q, float("nan"), a_q, R_q)
    return LogPowerWindow(
        q=q,
        c=c,
        eps=eps,
        simplified_lower=q / lg ** (c + 2),
        simplified_upper=q / (2.0 * lg**2),
        gate_lower=gate.lower,
        gate_upper=gate.upper,
        a_gate=a_q,
        R_gate=R_q,
        a_capped=a_uncapped > q,
    )


@dataclass(frozen=True)
class DenominatorBoundRecord:
    """Checks on the denominator of a Dirichlet approximant to N/q.

    With r = 0 the approximation quality forces N <= qR/(sM), which the
    window's left inequality forbids, so ``contradiction`` is set whenever
    the instance actually sits above qR/a.  With r != 0 the chain

        s >= (q/N)(r - R/M) >= (q/N)(1 - R/a) > 0

    is verified numerically (the middle step needs M >= a and r >= 1).
    """

    r_zero: bool
    contradiction: bool
    s_lb_from_r: float
    s_lb_from_gate: float
    chain_holds: bool
    s_over_R: float


def denominator_lower_bound_check(
    q: int,
    N: float,
    M: int,
    R: float,
    a_q: float,
    approx: RationalApproximation,
) -> DenominatorBoundRecord:
    s_lb_gate = (q / N) * (1.0 - R / a_q)
    if approx.r == 0:
        return DenominatorBoundRecord(
            r_zero=True,
            contradiction=N > q * R / a_q,
            s_lb_from_r=0.0,
            s_lb_from_gate=s_lb_gate,
            chain_holds=False,
            s_over_R=approx.s / R,
        )
    s_lb_r = (q / N) * (abs(approx.r) - R / M)
    tol = 1e-9 * max(1.0, abs(s_lb_r))
    chain = (
        approx.s + tol >= s_lb_r
        and (s_lb_r + tol >= s_lb_gate or M < a_q)
        and s_lb_gate > 0
    )
    return DenominatorBoundRecord(
        r_zero=False,
        contradiction=False,
        s_lb_from_r=s_lb_r,
        s_lb_from_gate=s_lb_gate,
        chain_holds=chain,
        s_over_R=approx.s / R,
    )
