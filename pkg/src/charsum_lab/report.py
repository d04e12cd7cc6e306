"""Schema-versioned scan reports with reproducible serialization.

A report's canonical bytes are a function of (experiment, parameters,
rows, summary) only: floats are normalized to 12 significant digits, keys
are sorted, and wall-clock timing is deliberately left out of the
serialized form so identical runs emit identical bytes.  Timing lives on
the in-memory object and is printed by the CLI.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

SCHEMA_VERSION = "1"

# Declared CSV column order per experiment (also the row sort keys).
EXPERIMENT_COLUMNS: dict[str, list[str]] = {
    "verify-identities": ["suite", "cases", "max_deviation", "tolerance", "passed"],
    "pv-scan": ["q", "character", "N", "abs_sum", "bound", "ratio", "skip"],
    "sigma2-scan": [
        "q",
        "character",
        "N",
        "a_q",
        "R_q",
        "abs_tail",
        "bound_shape",
        "ratio",
        "skip",
    ],
    "burgess-scan": ["p", "character", "x", "abs_sum", "c_of_x", "ratio"],
    "integral-bound": ["q", "log_a_term", "integral_term", "total"],
    "halasz-scan": [
        "p",
        "x",
        "T",
        "gamma_star",
        "S_value",
        "S_prime_value",
        "rhs",
        "M_abs",
        "ratio",
    ],
    "diff-scan": [
        "function",
        "x",
        "x_prime",
        "diff",
        "gs_rhs_shape",
        "gs_ratio",
        "power_denominator",
        "power_ratio",
    ],
    "delta-scan": ["p", "eps", "N0", "delta_emp", "horizon"],
}


@dataclass
class ScanReport:
    experiment: str
    parameters: dict
    rows: list[dict]
    summary: dict
    timing: float | None = None
    schema_version: str = SCHEMA_VERSION

    def to_canonical_dict(self) -> dict:
        return _normalize(
            {
                "schema_version": self.schema_version,
                "experiment": self.experiment,
                "parameters": self.parameters,
                "rows": self.rows,
                "summary": self.summary,
            }
        )


def _round12(x: float) -> float:
    return float(f"{x:.12g}")


def _normalize(obj):
    """Round floats to 12 significant digits, recursively."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return _round12(obj)
    if isinstance(obj, dict):
        return {str(k): _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    # numpy scalars and Fractions land here
    if hasattr(obj, "item"):
        return _normalize(obj.item())
    if hasattr(obj, "numerator") and hasattr(obj, "denominator"):
        return f"{obj.numerator}/{obj.denominator}"
    return str(obj)


def to_json_bytes(report: ScanReport) -> bytes:
    text = json.dumps(
        report.to_canonical_dict(),
        indent=2,
        sort_keys=True,
        ensure_ascii=True,
        allow_nan=False,
    )
    return (text + "\n").encode("ascii")


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def to_csv_bytes(report: ScanReport) -> bytes:
    columns = EXPERIMENT_COLUMNS.get(report.experiment)
    if columns is None:
        columns = sorted({k for row in report.rows for k in row})
    normalized = _normalize(report.rows)
    lines = [",".join(columns)]
    for row in normalized:
        lines.append(",".join(_format_cell(row.get(c)) for c in columns))
    return ("\n".join(lines) + "\n").encode("ascii")


def emit(report: ScanReport, format: str, path) -> None:
    """Write the report; same report and format always give identical bytes."""
    if format == "json":
        payload = to_json_bytes(report)
    elif format == "csv":
        payload = to_csv_bytes(report)
    else:
        raise ValueError(f"unknown format {format!r}")
    path = Path(path)
    try:
        path.write_bytes(payload)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc


def read_report(path) -> ScanReport:
    """Parse a JSON report back (timing is not serialized, so it comes back None)."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise OSError(f"cannot read report from {path}: {exc}") from exc
    return ScanReport(
        experiment=data["experiment"],
        parameters=data["parameters"],
        rows=data["rows"],
        summary=data["summary"],
        schema_version=data.get("schema_version", SCHEMA_VERSION),
    )
