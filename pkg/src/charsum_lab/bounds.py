"""Explicit bound expressions and the empirical ratio scans against them.

Functional forms for the profile parameters a(q), R(q), c(x), l(q) come
from a small grammar:

    const:k      ->  k
    logpow:e     ->  (log q)^e
    powlog:a,e   ->  q^a * (log q)^e

Implied constants in asymptotic inequalities are never assumed: scans
report measured ratios and their maxima.  Only fully explicit expressions
(the trigonometric-sum bound, the main term of the windowed inequality)
are treated as hard pass/fail bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import charsums
from .arith import unit_group
from .characters import DirichletCharacter, enumerate_characters, value_matrix
from .errors import DomainError

EULER_MASCHERONI = 0.5772156649


@dataclass(frozen=True)
class FunctionalForm:
    """One parsed grammar form, callable on q >= 3."""

    spec: str
    fn: Callable[[float], float] = field(compare=False, repr=False)

    def __call__(self, q: float) -> float:
        return self.fn(q)


def parse_form(spec: str) -> FunctionalForm:
    kind, _, args = spec.partition(":")
    try:
        if kind == "const":
            k = float(args)
            return FunctionalForm(spec, lambda q, k=k: k)
        if kind == "logpow":
            e = float(args)
            return FunctionalForm(spec, lambda q, e=e: math.log(q) ** e)
        if kind == "powlog":
            a_str, e_str = args.split(",")
            a, e = float(a_str), float(e_str)
            return FunctionalForm(spec, lambda q, a=a, e=e: q**a * math.log(q) ** e)
    except ValueError as exc:
        raise DomainError(f"bad functional form {spec!r}") from exc
    raise DomainError(f"unknown functional form kind {kind!r}")


def custom_form(fn: Callable[[float], float], label: str) -> FunctionalForm:
    """Programmatic escape hatch for forms outside the wire grammar."""
    return FunctionalForm(f"custom:{label}", fn)


@dataclass(frozen=True)
class BoundProfile:
    """The tunable parameters appearing in the explicit bounds."""

    a_of_q: FunctionalForm
    R_of_q: FunctionalForm
    c_of_x: FunctionalForm
    l_of_q: FunctionalForm
    C_pom: float = EULER_MASCHERONI
    eps: float = 0.5
    eps1: float = 0.05
    c_exp: float = 1.0

    def to_string(self) -> str:
        parts = [
            f"a={self.a_of_q.spec}",
            f"R={self.R_of_q.spec}",
            f"c={self.c_of_x.spec}",
            f"l={self.l_of_q.spec}",
            f"C={self.C_pom:g}",
            f"eps={self.eps:g}",
            f"eps1={self.eps1:g}",
            f"cexp={self.c_exp:g}",
        ]
        return ",".join(parts)


def default_profile() -> BoundProfile:
    return BoundProfile(
        a_of_q=parse_form("logpow:4"),
        R_of_q=parse_form("logpow:2.5"),
        c_of_x=parse_form("logpow:3"),
        l_of_q=parse_form("const:1"),
    )


def parse_profile(spec: str) -> BoundProfile:
    """Parse "a=logpow:4,R=logpow:2.5,c=logpow:3,l=const:1[,C=..,eps=..,...]"."""
    profile = default_profile()
    if not spec:
        return profile
    # powlog forms carry a comma; glue separator-split pieces lacking "="
    items: list[str] = []
    for piece in spec.split(","):
        if "=" in piece or not items:
            items.append(piece)
        else:
            items[-1] += "," + piece
    for item in items:
        key, _, value = item.partition("=")
        key = key.strip()
        if not value:
            raise DomainError(f"bad profile item {item!r}")
        if key == "a":
            profile = replace(profile, a_of_q=parse_form(value))
        elif key == "R":
            profile = replace(profile, R_of_q=parse_form(value))
        elif key == "c":
            profile = replace(profile, c_of_x=parse_form(value))
        elif key == "l":
            profile = replace(profile, l_of_q=parse_form(value))
        elif key == "C":
            profile = replace(profile, C_pom=float(value))
        elif key == "eps":
            profile = replace(profile, eps=float(value))
        elif key == "eps1":
            profile = replace(profile, eps1=float(value))
        elif key == "cexp":
            profile = replace(profile, c_exp=float(value))
        else:
            raise DomainError(f"unknown profile key {key!r}")
    return profile


# ---------------------------------------------------------------------------
# explicit bound evaluators


def pomerance_trig_sum(alpha: float, x: float) -> float:
    """sum_{n<=x} |sin(alpha n)| / n, exact direct sum."""
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    return float(pomerance_trig_sums_at(alpha, [x])[0])


def pomerance_trig_sums_at(alpha: float, xs) -> np.ndarray:
    """The trigonometric sum at several cut points in one O(max x) pass."""
    cuts = np.asarray([int(math.floor(x)) for x in xs], dtype=np.int64)
    if (cuts < 1).any():
        raise DomainError("all cut points must be >= 1")
    n = np.arange(1, int(cuts.max()) + 1, dtype=np.float64)
    terms = np.abs(np.sin(alpha * n)) / n
    csum = np.cumsum(terms)
    return csum[cuts - 1]


def pomerance_bound(x: float, C: float) -> float:
    """(2/pi) log x + (2/pi)(C + log 2 + 3/x)."""
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    return (2.0 / math.pi) * (math.log(x) + C + math.log(2.0) + 3.0 / x)


def montgomery_vaughan_bound(N: float, R: float) -> float:
    """N/log N + N (log R)^{3/2} / sqrt(R), with implied constant 1."""
    return N / math.log(N) + N * math.log(R) ** 1.5 / math.sqrt(R)


@dataclass(frozen=True)
class WindowedPvRhs:
    """Main term and constant-free big-O shape of the windowed inequality."""

    main_term: float
    big_o_shape: float


def pv_improved_rhs(q: int, profile: BoundProfile) -> WindowedPvRhs:
    """Explicit right-hand side sqrt(q) * 2 * ((2/pi) log a + (2/pi)(C + log 2 + 3/a))
    plus the shape sqrt(q) * max(log(log q / log a), (log R)^{3/2}/sqrt(R) * log(q/a)).
    """
    a_q = profile.a_of_q(q)
    R_q = profile.R_of_q(q)
    if not (2 <= R_q < a_q <= q):
        raise DomainError(
            f"profile ordering 2 <= R < a <= q violated at q={q} "
            f"(R={R_q:g}, a={a_q:g})"
        )
    rt = math.sqrt(q)
    main = rt * 2.0 * (2.0 / math.pi) * (
        math.log(a_q) + profile.C_pom + math.log(2.0) + 3.0 / a_q
    )
    shape = rt * max(
        math.log(math.log(q) / math.log(a_q)),
        math.log(R_q) ** 1.5 / math.sqrt(R_q) * math.log(q / a_q),
    )
    return WindowedPvRhs(main_term=main, big_o_shape=shape)


# ---------------------------------------------------------------------------
# ratio scans


def _even_nonprincipal(ctx) -> list[DirichletCharacter]:
    return [
        c for c in enumerate_characters(ctx) if not c.principal and c.parity == 1
    ]


def pv_ratio_scan(q_list, profile: BoundProfile) -> tuple[list[dict], dict]:
    """|S(N)| against sqrt(q) log log q over the log-power window.

    Emits one row per (q, even non-principal chi, integer N in the window);
    windowless or characterless moduli produce skip rows.  Returns (rows,
    summary).
    """
    rows: list[dict] = []
    max_ratio = 0.0
    c = profile.c_exp
    for q in sorted(q_list):
        lg = math.log(q)
        lower = q / lg ** (c + 2)
        upper = q / (2.0 * lg**2)
        n_lo = int(math.floor(lower)) + 1
        n_hi = int(math.ceil(upper)) - 1
        ns = [n for n in range(max(n_lo, 1), n_hi + 1) if lower < n < upper]
        if not ns:
            rows.append({"q": q, "skip": "empty window"})
            continue
        ctx = unit_group(q)
        chis = _even_nonprincipal(ctx)
        if not chis:
            rows.append({"q": q, "skip": "no even non-principal character"})
            continue
        bound = math.sqrt(q) * math.log(lg)
        vm = value_matrix(ctx, chis, n_max=max(ns))
        prefix = np.cumsum(vm[:, 1:], axis=1)
        for chi, pref in zip(chis, prefix):
            for n in ns:
                s_abs = float(abs(pref[n - 1]))
                ratio = s_abs / bound
                rows.append(
                    {
                        "q": q,
                        "character": chi.label,
                        "N": n,
                        "abs_sum": s_abs,
                        "bound": bound,
                        "ratio": ratio,
                    }
                )
                max_ratio = max(max_ratio, ratio)
    rows.sort(key=lambda r: (r["q"], r.get("character", ""), r.get("N", -1)))
    scanned = sum(1 for r in rows if "skip" not in r)
    skipped = sum(1 for r in rows if "skip" in r)
    return rows, {"max_ratio": max_ratio, "rows": scanned, "skipped": skipped}


def fourier_tail_ratio_scan(
    q_list,
    profile: BoundProfile,
    char_samples: int = 8,
    seed: int = 1,
) -> tuple[list[dict], dict]:
    """|tail| of the split inner sum against its constant-free bound shape.

    Scans even primitive characters (a deterministic seeded sample per
    modulus) at the midpoint N of the simplified log-power window; the
    admissible exact-gate window is empty until q is astronomically large,
    so the simplified window is the honest desk-scale choice.
    """
    rng = np.random.default_rng(seed)
    rows: list[dict] = []
    max_ratio = 0.0
    zero_rows = 0
    c = profile.c_exp
    for q in sorted(q_list):
        a_q = profile.a_of_q(q)
        R_q = profile.R_of_q(q)
        if not (2 <= R_q < a_q <= q):
            rows.append({"q": q, "skip": "profile ordering violated"})
            continue
        lg = math.log(q)
        lower = q / lg ** (c + 2)
        upper = q / (2.0 * lg**2)
        N = int((lower + upper) / 2)
        if not (lower < N < upper and 1 <= N <= q):
            rows.append({"q": q, "skip": "empty window"})
            continue
        ctx = unit_group(q)
        chis = [c for c in _even_nonprincipal(ctx) if c.primitive]
        if not chis:
            rows.append({"q": q, "skip": "no even primitive character"})
            continue
        if len(chis) > char_samples:
            idx = rng.choice(len(chis), size=char_samples, replace=False)
            chis = [chis[i] for i in sorted(idx)]
        shape = max(
            math.log(math.log(q) / math.log(a_q)),
            math.log(R_q) ** 1.5 / math.sqrt(R_q) * math.log(q / a_q),
        )
        for chi in chis:
            if a_q >= q / 2 - 1:
                tail_abs = 0.0
                zero_rows += 1
            else:
                _, tail = charsums.fourier_split(chi, N, a_q)
                tail_abs = abs(tail)
            ratio = tail_abs / shape if shape > 0 else 0.0
            rows.append(
                {
                    "q": q,
                    "character": chi.label,
                    "N": N,
                    "a_q": a_q,
                    "R_q": R_q,
                    "abs_tail": tail_abs,
                    "bound_shape": shape,
                    "ratio": ratio,
                }
            )
            max_ratio = max(max_ratio, ratio)
    rows.sort(key=lambda r: (r["q"], r.get("character", ""), r.get("N", -1)))
    return rows, {
        "max_ratio": max_ratio,
        "rows": sum(1 for r in rows if "skip" not in r),
        "zero_tail_rows": zero_rows,
    }


def burgess_profile_ratio(
    chi: DirichletCharacter, x: float, profile: BoundProfile
) -> float:
    """|sum_{n<=x} chi(n)| * c(x) / x, gated on x >= max(l(q), 3)."""
    if chi.principal:
        raise DomainError("ratio requires a non-principal character")
    gate = max(profile.l_of_q(chi.modulus), 3.0)
    if x < gate:
        raise DomainError(f"x={x:g} below the scan gate max(l(q), 3)={gate:g}")
    s_abs = abs(charsums.partial_sum(chi, int(math.floor(x))))
    return s_abs * profile.c_of_x(x) / x


# ---------------------------------------------------------------------------
# the general integral bound


def _adaptive_simpson(f, a, b, rel_tol, max_depth=48):
    """Adaptive Simpson with absolute budget rel_tol * |first estimate|."""
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    budget = rel_tol * max(abs(whole), 1e-300)

    def recurse(a, b, fa, fm, fb, whole, budget, depth):
        m = (a + b) / 2
        lm, rm = (a + m) / 2, (m + b) / 2
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        if depth >= max_depth or abs(left + right - whole) <= 15.0 * budget:
            return left + right + (left + right - whole) / 15.0
        return recurse(a, m, fa, flm, fm, left, budget / 2, depth + 1) + recurse(
            m, b, fm, frm, fb, right, budget / 2, depth + 1
        )

    return recurse(a, b, fa, fm, fb, whole, budget, 0)


@dataclass(frozen=True)
class GeneralPvBound:
    log_a_term: float
    integral_term: float

    @property
    def total(self) -> float:
        return self.log_a_term + self.integral_term


def pv_general_integral(
    q: int, profile: BoundProfile, rel_tol: float = 1e-6
) -> GeneralPvBound:
    """log a(q) + integral_{a(q)}^{q} max(x)/x dx with

        max(x) = max(1/log x, (log R(x))^{3/2}/sqrt(R(x)), R(x)/c(x)).

    Computed by adaptive Simpson after the substitution u = log x (the
    integrand is smooth and slowly varying there).  The profile must keep
    2 <= R(x) <= a(q) and l(q) <= a(q) across the whole range; the first
    violation point is named in the error.
    """
    a_q = profile.a_of_q(q)
    if not 1 < a_q <= q:
        raise DomainError(f"need 1 < a(q) <= q, got a(q)={a_q:g} at q={q}")
    if profile.l_of_q(q) > a_q:
        raise DomainError(
            f"l(q)={profile.l_of_q(q):g} exceeds a(q)={a_q:g} at q={q}"
        )
    for x in np.geomspace(float(a_q), float(q), 1000):
        R_x = profile.R_of_q(x)
        if not 2 <= R_x <= a_q:
            raise DomainError(
                f"R(x)={R_x:g} outside [2, a(q)={a_q:g}] at x={x:.6g}"
            )

    def integrand(u: float) -> float:
        x = math.exp(u)
        R_x = profile.R_of_q(x)
        return max(
            1.0 / math.log(x),
            math.log(R_x) ** 1.5 / math.sqrt(R_x),
            R_x / profile.c_of_x(x),
        )

    lo, hi = math.log(a_q), math.log(q)
    integral = _adaptive_simpson(integrand, lo, hi, rel_tol) if hi > lo else 0.0
    return GeneralPvBound(log_a_term=math.log(a_q), integral_term=integral)
