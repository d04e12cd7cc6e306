"""Figure rendering for scan reports.

Each emitted report can be accompanied by one or more matplotlib figures
written next to the delimited output ("<out stem>.<name>.png").  Figures
are a reading aid; the report files remain the canonical record.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def _data_rows(report) -> list[dict]:
    return [r for r in report.rows if "skip" not in r]


def _scatter_ratio(report, x_key: str, out: Path) -> list[Path]:
    rows = _data_rows(report)
    if not rows:
        return []
    xs = [r[x_key] for r in rows]
    ys = [r["ratio"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.scatter(xs, ys, s=8, alpha=0.6, edgecolors="none")
    ax.set_xscale("log")
    ax.set_xlabel(x_key)
    ax.set_ylabel("measured ratio")
    ax.set_title(f"{report.experiment}: ratio vs {x_key} (max {max(ys):.4g})")
    ax.grid(True, alpha=0.3)
    path = out.with_suffix(f".{report.experiment}.png")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def _plot_verify(report, out: Path) -> list[Path]:
    rows = report.rows
    if not rows:
        return []
    names = [r["suite"] for r in rows]
    devs = [max(r["max_deviation"], 1e-18) for r in rows]
    tols = [r["tolerance"] for r in rows]
    fig, ax = plt.subplots(figsize=(8, 4.5))
    pos = range(len(names))
    ax.bar(pos, devs, color="steelblue", label="max deviation")
    ax.scatter(pos, tols, color="crimson", marker="_", s=400, label="tolerance")
    ax.set_yscale("log")
    ax.set_xticks(list(pos))
    ax.set_xticklabels(names, rotation=20, ha="right")
    ax.set_ylabel("absolute deviation")
    ax.set_title("identity suites: deviation vs tolerance")
    ax.legend()
    path = out.with_suffix(".verify-identities.png")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def _plot_delta(report, out: Path) -> list[Path]:
    rows = _data_rows(report)
    if not rows:
        return []
    eps_sq = [float(Fraction(r["eps"])) ** 2 for r in rows]
    deltas = [r["delta_emp"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.scatter(eps_sq, deltas, s=8, alpha=0.5, edgecolors="none")
    slope = report.summary.get("fit_slope")
    intercept = report.summary.get("fit_intercept")
    if slope is not None and slope == slope:
        grid = [min(eps_sq), max(eps_sq)]
        ax.plot(
            grid,
            [slope * g + intercept for g in grid],
            color="crimson",
            label=f"fit: slope {slope:.3g}",
        )
        ax.legend()
    ax.set_xlabel("eps^2")
    ax.set_ylabel("empirical delta")
    ax.set_title("short-sum thresholds: delta vs eps^2")
    ax.grid(True, alpha=0.3)
    path = out.with_suffix(".delta-scan.png")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def _plot_integral(report, out: Path) -> list[Path]:
    rows = _data_rows(report)
    if not rows:
        return []
    qs = [r["q"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(qs, [r["total"] for r in rows], "o-", label="total")
    ax.plot(qs, [r["log_a_term"] for r in rows], "s--", label="log a(q)")
    ax.plot(qs, [r["integral_term"] for r in rows], "d--", label="integral")
    ax.set_xscale("log")
    ax.set_xlabel("q")
    ax.set_ylabel("bound value")
    ax.set_title("general integral bound")
    ax.legend()
    ax.grid(True, alpha=0.3)
    path = out.with_suffix(".integral-bound.png")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def _plot_diff(report, out: Path) -> list[Path]:
    rows = _data_rows(report)
    if not rows:
        return []
    xs = [r["x_prime"] / r["x"] for r in rows]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.scatter(xs, [r["gs_ratio"] for r in rows], s=8, alpha=0.6, label="exp-weighted")
    ax.scatter(
        xs, [r["power_ratio"] for r in rows], s=8, alpha=0.6, label="power-weighted"
    )
    ax.set_xscale("log")
    ax.set_xlabel("x'/x")
    ax.set_ylabel("measured ratio")
    ax.set_title("mean-value difference ratios")
    ax.legend()
    ax.grid(True, alpha=0.3)
    path = out.with_suffix(".diff-scan.png")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]


def render_figures(report, out_path) -> list[Path]:
    """Render the figures for one report next to its output path."""
    out = Path(out_path)
    if report.experiment == "verify-identities":
        return _plot_verify(report, out)
    if report.experiment == "delta-scan":
        return _plot_delta(report, out)
    if report.experiment == "integral-bound":
        return _plot_integral(report, out)
    if report.experiment == "diff-scan":
        return _plot_diff(report, out)
    if report.experiment in ("pv-scan", "sigma2-scan"):
        return _scatter_ratio(report, "q", out)
    if report.experiment in ("burgess-scan", "halasz-scan"):
        return _scatter_ratio(report, "p", out)
    return []
