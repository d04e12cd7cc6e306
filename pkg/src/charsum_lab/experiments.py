"""Experiment orchestration: named, reproducible scan suites over the
library operations, emitting schema-versioned reports.

Every experiment is a flat parameter grid; configuration is a flat
key=value mapping (file plus command-line overrides).  Random grids use a
named 64-bit seed recorded in the report, rows are sorted by the declared
key order, and reruns with identical parameters are byte-identical.
"""

from __future__ import annotations

import dataclasses
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import __version__
from . import bounds as bounds_mod
from . import charsums, multfunc
from .arith import primes_up_to, unit_group
from .bounds import BoundProfile, parse_profile
from .characters import enumerate_characters, legendre_character
from .errors import UsageError
from .report import ScanReport

EXPERIMENTS = (
    "verify-identities",
    "pv-scan",
    "sigma2-scan",
    "burgess-scan",
    "integral-bound",
    "halasz-scan",
    "diff-scan",
    "delta-scan",
)


@dataclass
class ExperimentConfig:
    q_max: int = 100
    p_min: int = 1000
    p_max: int = 2000
    eps: str = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9"
    profile: str = "a=logpow:4,R=logpow:2.5,c=logpow:3,l=const:1"
    seed: int = 20260809
    workers: int = 1
    T: float = 10.0
    x_mult: float = 1.0
    horizon_exp: float = 0.5
    grid_density: int = 64
    char_samples: int = 8
    b_regime: float = 4.0
    k_const: float = 0.0
    x_exponents: str = "0.5"
    u_list: str = "10,50,100"
    sample_target: int = 200
    function: str = "legendre"
    sine_checks: int = 20
    q_grid: str = "10000,100000,1000000,10000000"

    def set(self, key: str, raw: str) -> None:
        fields = {f.name: f.type for f in dataclasses.fields(self)}
        if key not in fields:
            raise UsageError(f"unknown configuration key {key!r}")
        current = getattr(self, key)
        try:
            if isinstance(current, bool):
                value = raw.lower() in ("1", "true", "yes", "on")
            elif isinstance(current, int):
                value = int(raw)
            elif isinstance(current, float):
                value = float(raw)
            else:
                value = raw
        except ValueError as exc:
            raise UsageError(f"bad value {raw!r} for key {key!r}") from exc
        setattr(self, key, value)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        cfg = cls()
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                key, sep, value = line.partition("=")
                if not sep:
                    raise UsageError(f"{path}:{lineno}: expected key=value")
                cfg.set(key.strip(), value.strip())
        return cfg

    def eps_fractions(self) -> list[Fraction]:
        return [Fraction(item.strip()) for item in self.eps.split(",") if item.strip()]

    def float_list(self, key: str) -> list[float]:
        return [float(v) for v in getattr(self, key).split(",") if v.strip()]

    def int_list(self, key: str) -> list[int]:
        return [int(v) for v in getattr(self, key).split(",") if v.strip()]

    def parsed_profile(self) -> BoundProfile:
        return parse_profile(self.profile)


def _base_params(cfg: ExperimentConfig, used: list[str]) -> dict:
    params = {"version": __version__, "seed": cfg.seed, "profile": cfg.profile}
    for key in used:
        params[key] = getattr(cfg, key)
    return params


# ---------------------------------------------------------------------------
# verify-identities


def _suite_row(suite: str, cases: int, max_dev: float, tol: float) -> dict:
    return {
        "suite": suite,
        "cases": cases,
        "max_deviation": max_dev,
        "tolerance": tol,
        "passed": bool(max_dev <= tol),
    }


def _run_verify(cfg: ExperimentConfig) -> ScanReport:
    q_max = cfg.q_max
    rng = np.random.default_rng(cfg.seed)
    rows = []

    # full-period orthogonality, deviation scaled by sqrt(q)
    dev, cases = 0.0, 0
    for q in range(3, q_max + 1):
        ctx = unit_group(q)
        chis = [c for c in enumerate_characters(ctx) if not c.principal]
        for chi in chis:
            cases += 1
            dev = max(dev, abs(charsums.partial_sum(chi, q)) / math.sqrt(q))
    rows.append(_suite_row("orthogonality", cases, dev, 1e-10))

    # Gauss-sum modulus |g(chi)| = sqrt(q) for primitive chi
    dev, cases = 0.0, 0
    for q in range(3, q_max + 1):
        for chi in enumerate_characters(unit_group(q)):
            if not chi.primitive:
                continue
            cases += 1
            dev = max(dev, abs(abs(charsums.gauss_sum(chi)) - math.sqrt(q)))
    rows.append(_suite_row("gauss-modulus", cases, dev, 1e-8))

    # Fourier expansion vs direct partial sums, all N, odd q
    dev, cases = 0.0, 0
    for q in range(3, q_max + 1, 2):
        for chi in enumerate_characters(unit_group(q)):
            if not chi.primitive:
                continue
            profile_vals = charsums.fourier_expansion_profile(chi)
            expansion = np.concatenate([profile_vals[1:], profile_vals[:1]])
            direct = charsums.prefix_table(chi).values[1:]
            cases += q
            dev = max(dev, float(np.abs(expansion - direct).max()) / math.sqrt(q))
    rows.append(_suite_row("fourier-expansion", cases, dev, 1e-8))

    # sine form of the split head, even primitive chi, random (N, cutoff)
    dev, cases = 0.0, 0
    for q in range(5, q_max + 1, 2):
        for chi in enumerate_characters(unit_group(q)):
            if not (chi.primitive and chi.parity == 1):
                continue
            for _ in range(cfg.sine_checks):
                N = int(rng.integers(1, q + 1))
                cutoff = float(rng.uniform(1.0, q / 2 - 1e-9))
                head, _ = charsums.fourier_split(chi, N, cutoff)
                sine = charsums.head_sine_form(chi, N, cutoff)
                cases += 1
                dev = max(dev, abs(head - sine))
    rows.append(_suite_row("head-sine-form", cases, dev, 1e-10))

    # twisted-sum decomposition over divisor pairs
    dev, cases = 0.0, 0
    u_values = cfg.float_list("u_list")
    for q in [p for p in primes_up_to(min(q_max, 50)) if p >= 3]:
        for chi in enumerate_characters(unit_group(int(q))):
            if chi.principal:
                continue
            for s in range(1, 13):
                r_values = [0] if s == 1 else [
                    r for r in range(1, s) if math.gcd(r, s) == 1
                ]
                for r in r_values:
                    deco = charsums.build_twist_decomposition(chi, r, s)
                    for u in u_values:
                        direct = charsums.twisted_sum(chi, r / s, u)
                        rebuilt = deco.evaluate(chi, u)
                        cases += 1
                        dev = max(
                            dev, abs(direct - rebuilt) / (1.0 + math.sqrt(u))
                        )
    rows.append(_suite_row("twisted-decomposition", cases, dev, 1e-8))

    # measured residual K in |S(N)| <= (sqrt(q)/2pi)|inner| + K sqrt(q)
    k_max, cases = -math.inf, 0
    for q in range(5, q_max + 1, 2):
        for chi in enumerate_characters(unit_group(q)):
            if not chi.primitive:
                continue
            for _ in range(4):
                N = int(rng.integers(1, q + 1))
                k_max = max(k_max, charsums.sqrt_bound_residual(chi, N))
                cases += 1

    violations = sum(1 for r in rows if not r["passed"])
    summary = {
        "violations": violations,
        "sqrt_bound_K_max": k_max if cases else None,
        "sqrt_bound_K_cases": cases,
    }
    params = _base_params(cfg, ["q_max", "sine_checks", "u_list"])
    return ScanReport("verify-identities", params, rows, summary)


# ---------------------------------------------------------------------------
# scans delegating to the bounds module


def _run_pv_scan(cfg: ExperimentConfig) -> ScanReport:
    profile = cfg.parsed_profile()
    q_list = [int(q) for q in primes_up_to(cfg.q_max) if q >= 3]
    rows, summary = bounds_mod.pv_ratio_scan(q_list, profile)
    params = _base_params(cfg, ["q_max"])
    return ScanReport("pv-scan", params, rows, summary)


def _run_sigma2_scan(cfg: ExperimentConfig) -> ScanReport:
    profile = cfg.parsed_profile()
    q_list = [int(q) for q in primes_up_to(cfg.q_max) if q >= 3]
    rows, summary = bounds_mod.fourier_tail_ratio_scan(
        q_list, profile, char_samples=cfg.char_samples, seed=cfg.seed
    )
    params = _base_params(cfg, ["q_max", "char_samples"])
    return ScanReport("sigma2-scan", params, rows, summary)


def _run_burgess_scan(cfg: ExperimentConfig) -> ScanReport:
    profile = cfg.parsed_profile()
    exponents = cfg.float_list("x_exponents")
    rows = []
    max_ratio = 0.0
    for p in primes_up_to(cfg.p_max):
        if p < 11:
            continue
        chi = legendre_character(int(p))
        for e in exponents:
            x = float(p) ** e
            if x < max(profile.l_of_q(int(p)), 3.0):
                continue
            ratio = bounds_mod.burgess_profile_ratio(chi, x, profile)
            s_abs = abs(charsums.partial_sum(chi, int(math.floor(x))))
            rows.append(
                {
                    "p": int(p),
                    "character": chi.label,
                    "x": x,
                    "abs_sum": s_abs,
                    "c_of_x": profile.c_of_x(x),
                    "ratio": ratio,
                }
            )
            max_ratio = max(max_ratio, ratio)
    rows.sort(key=lambda r: (r["p"], r["x"]))
    params = _base_params(cfg, ["p_max", "x_exponents"])
    return ScanReport(
        "burgess-scan", params, rows, {"max_ratio": max_ratio, "rows": len(rows)}
    )


def _run_integral_bound(cfg: ExperimentConfig) -> ScanReport:
    profile = cfg.parsed_profile()
    rows = []
    totals = []
    for q in cfg.int_list("q_grid"):
        value = bounds_mod.pv_general_integral(q, profile)
        rows.append(
            {
                "q": q,
                "log_a_term": value.log_a_term,
                "integral_term": value.integral_term,
                "total": value.total,
            }
        )
        totals.append(value.total)
    rows.sort(key=lambda r: r["q"])
    monotone = all(b >= a - 1e-12 for a, b in zip(totals, totals[1:]))
    params = _base_params(cfg, ["q_grid"])
    return ScanReport(
        "integral-bound",
        params,
        rows,
        {"monotone_nondecreasing": monotone, "rows": len(rows)},
    )


def _run_halasz_scan(cfg: ExperimentConfig) -> ScanReport:
    rows = []
    max_ratio = 0.0
    for p in primes_up_to(cfg.p_max):
        if p < 3:
            continue
        x = float(p) * cfg.x_mult
        if x < 3:
            continue
        f = multfunc.MultiplicativeFunction.legendre(int(p))
        check = multfunc.halasz_mean_bound_check(
            f, x, cfg.T, grid_density=cfg.grid_density
        )
        ev = check.evaluation
        rows.append(
            {
                "p": int(p),
                "x": x,
                "T": cfg.T,
                "gamma_star": ev.gamma_star,
                "S_value": ev.S_value,
                "S_prime_value": ev.S_prime_value,
                "rhs": ev.rhs,
                "M_abs": check.M_abs,
                "ratio": check.ratio,
            }
        )
        max_ratio = max(max_ratio, check.ratio)
    rows.sort(key=lambda r: (r["p"], r["x"]))
    params = _base_params(cfg, ["p_max", "T", "x_mult", "grid_density"])
    return ScanReport(
        "halasz-scan", params, rows, {"max_ratio": max_ratio, "rows": len(rows)}
    )


def _diff_pairs(p: int) -> list[tuple[float, float]]:
    xs = np.geomspace(10.0, max(p / 2.0, 20.0), 4)
    factors = (2.0, 10.0, 50.0)
    return [(float(x), float(x) * f) for x in xs for f in factors]


def _run_diff_scan(cfg: ExperimentConfig) -> ScanReport:
    profile = cfg.parsed_profile()
    rows = []
    max_gs = 0.0
    max_power = 0.0
    if cfg.function == "legendre":
        primes = [int(p) for p in primes_up_to(cfg.p_max) if p >= 11]
        stride = max(1, len(primes) // 40)
        targets = [(multfunc.MultiplicativeFunction.legendre(p), _diff_pairs(p))
                   for p in primes[::stride]]
    else:
        f = multfunc.MultiplicativeFunction.from_spec(cfg.function)
        hi = min(float(f.x_max), 1e5)
        xs = np.geomspace(10.0, hi / 64.0, 5)
        targets = [(f, [(float(x), float(x) * c) for x in xs for c in (2.0, 8.0, 32.0)])]
    for f, pairs in targets:
        for x, xp in pairs:
            if xp > f.x_max or xp > x**cfg.b_regime or x < 3:
                continue
            check = multfunc.mean_difference_bound_check(f, x, xp)
            denom = (math.log(2 * xp / x) / math.log(xp)) ** (0.5 - profile.eps1)
            power_ratio = multfunc.mean_difference_ratio(
                f, x, xp, profile.eps1, b_regime=cfg.b_regime
            )
            rows.append(
                {
                    "function": f.name,
                    "x": x,
                    "x_prime": xp,
                    "diff": check.diff,
                    "gs_rhs_shape": check.rhs_shape,
                    "gs_ratio": check.ratio,
                    "power_denominator": denom,
                    "power_ratio": power_ratio,
                }
            )
            max_gs = max(max_gs, check.ratio)
            max_power = max(max_power, power_ratio)
    rows.sort(key=lambda r: (r["function"], r["x"], r["x_prime"]))
    params = _base_params(cfg, ["p_max", "function", "b_regime"])
    return ScanReport(
        "diff-scan",
        params,
        rows,
        {"max_gs_ratio": max_gs, "max_power_ratio": max_power, "rows": len(rows)},
    )


def _run_delta_scan(cfg: ExperimentConfig) -> ScanReport:
    primes = [int(p) for p in primes_up_to(cfg.p_max) if p >= max(cfg.p_min, 3)]
    if len(primes) > cfg.sample_target:
        stride = max(1, len(primes) // cfg.sample_target)
        primes = primes[::stride]
    eps_list = cfg.eps_fractions()
    results = multfunc.short_sum_scan(
        primes, eps_list, horizon_exp=cfg.horizon_exp, workers=cfg.workers
    )
    rows = [
        {
            "p": r.p,
            "eps": f"{r.eps.numerator}/{r.eps.denominator}",
            "N0": r.N0,
            "delta_emp": r.delta_emp,
            "horizon": r.horizon,
        }
        for r in results
    ]
    rows.sort(key=lambda r: (r["p"], Fraction(r["eps"])))
    eps_sq = np.array([float(Fraction(r["eps"])) ** 2 for r in rows])
    deltas = np.array([r["delta_emp"] for r in rows])
    if len(rows) >= 2 and np.ptp(eps_sq) > 0:
        slope, intercept = (float(v) for v in np.polyfit(eps_sq, deltas, 1))
    else:
        slope, intercept = None, None  # fit needs at least two distinct eps
    # N0 must be nonincreasing in eps for each p
    violations = 0
    by_p: dict[int, list[tuple[Fraction, int]]] = {}
    for r in results:
        by_p.setdefault(r.p, []).append((r.eps, r.N0))
    for p, pairs in by_p.items():
        pairs.sort()
        violations += sum(1 for a, b in zip(pairs, pairs[1:]) if b[1] > a[1])
    summary = {
        "fit_slope": slope,
        "fit_intercept": intercept,
        "monotonicity_violations": violations,
        "primes": len(by_p),
        "rows": len(rows),
    }
    params = _base_params(
        cfg, ["p_min", "p_max", "eps", "horizon_exp", "sample_target", "workers"]
    )
    return ScanReport("delta-scan", params, rows, summary)


_RUNNERS = {
    "verify-identities": _run_verify,
    "pv-scan": _run_pv_scan,
    "sigma2-scan": _run_sigma2_scan,
    "burgess-scan": _run_burgess_scan,
    "integral-bound": _run_integral_bound,
    "halasz-scan": _run_halasz_scan,
    "diff-scan": _run_diff_scan,
    "delta-scan": _run_delta_scan,
}


def run_experiment(name: str, config: ExperimentConfig) -> ScanReport:
    """Dispatch one named experiment and stamp its wall-clock timing."""
    try:
        runner = _RUNNERS[name]
    except KeyError:
        raise UsageError(
            f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}"
        ) from None
    start = time.perf_counter()
    report = runner(config)
    report.timing = time.perf_counter() - start
    return report
