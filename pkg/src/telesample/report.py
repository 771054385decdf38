"""RunReport documents and the per-figure curve files derived from them.

A run report is JSON with sorted keys and every float cut to 9 significant
digits, so identical runs give byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Optional

from .metrics import ErrorReport
from .optimization import RateReport, battery_life

__all__ = [
    "CURVE_COLUMNS",
    "FIGURE_FILES",
    "fmt",
    "build_run_report",
    "dumps",
    "write_figures",
    "summary_text",
]

CURVE_COLUMNS = (
    "factor",
    "interval_s",
    "rate_hz",
    "l2_uncompensated",
    "l2_compensated",
    "mean_uncompensated",
    "mean_compensated",
    "aliasing_uncompensated",
    "aliasing_compensated",
)

# file name -> curve columns written after (factor, interval_s, rate_hz)
FIGURE_FILES = {
    "l2_uncompensated.csv": ("l2_uncompensated",),
    "l2_compensated.csv": ("l2_compensated",),
    "mean_uncompensated.csv": ("mean_uncompensated",),
    "mean_compensated.csv": ("mean_compensated",),
    "aliasing.csv": ("aliasing_uncompensated", "aliasing_compensated"),
}


def fmt(x):
    """Round to 9 significant digits; non-finite and missing values become None."""
    if x is None:
        return None
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    x = float(x)
    if not math.isfinite(x):
        return None
    return float(f"{x:.9g}")


def _errors(e: ErrorReport) -> dict:
    return {
        "l2_relative": fmt(e.l2_relative),
        "mean_relative": fmt(e.mean_relative),
        "aliasing": fmt(e.aliasing),
        "aliasing_raw": fmt(e.aliasing_raw),
    }


def _rate_row(r: RateReport) -> dict:
    return {
        "factor": r.factor,
        "interval_s": fmt(r.interval),
        "rate_hz": fmt(r.rate),
        "compensated": _errors(r.compensated),
        "uncompensated": _errors(r.uncompensated),
        "transmissions_per_hour": fmt(r.transmissions_per_hour),
        "energy_per_hour": fmt(r.energy_per_hour),
        "cost": fmt(r.cost),
        "feasible": r.feasible,
    }


def _curve_row(r: RateReport) -> dict:
    return {
        "factor": r.factor,
        "interval_s": fmt(r.interval),
        "rate_hz": fmt(r.rate),
        "l2_uncompensated": fmt(r.uncompensated.l2_relative),
        "l2_compensated": fmt(r.compensated.l2_relative),
        "mean_uncompensated": fmt(r.uncompensated.mean_relative),
        "mean_compensated": fmt(r.compensated.mean_relative),
        "aliasing_uncompensated": fmt(r.uncompensated.aliasing),
        "aliasing_compensated": fmt(r.compensated.aliasing),
    }


def build_run_report(input_descriptor: dict, config: dict, table, best: Optional[RateReport],
                     model, life_ref: float, reference_interval: float,
                     mode: str = "optimize") -> dict:
    return {
        "mode": mode,
        "input": input_descriptor,
        "config": config,
        "table": [_rate_row(r) for r in table],
        "best": _rate_row(best) if best is not None else None,
        "curves": [_curve_row(r) for r in table],
        "battery": {
            "reference_interval_s": fmt(reference_interval),
            "reference_life_hours": fmt(life_ref),
            "projected": [
                {
                    "factor": r.factor,
                    "interval_s": fmt(r.interval),
                    "life_hours": fmt(battery_life(r.interval, reference_interval, life_ref, model)),
                }
                for r in table
            ],
        },
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int) and not isinstance(v, bool):
        return str(v)
    return format(v, ".9g")


def write_figures(report: dict, out_dir) -> list:
    """Write one CSV per figure plus ``summary.txt``; returns the paths written."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    curves = report["curves"]
    written = []
    for name, columns in FIGURE_FILES.items():
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ("factor", "interval_s", "rate_hz") + columns
        w.writerow(header)
        for row in curves:
            w.writerow([_cell(row[c]) for c in header])
        path = out_dir / name
        path.write_text(buf.getvalue(), encoding="utf-8")
        written.append(path)
    path = out_dir / "summary.txt"
    path.write_text(summary_text(report), encoding="utf-8")
    written.append(path)
    return written


def summary_text(report: dict) -> str:
    e_target = report["config"]["cost_model"]["E_target"]
    lines = [f"input: {json.dumps(report['input'], sort_keys=True)}",
             f"E_target: {_cell(e_target)}",
             "",
             f"{'factor':>6} {'interval_s':>10} {'l2_uncomp':>12} {'l2_comp':>12} {'feasible':>8}"]
    for row in report["table"]:
        lines.append(
            f"{row['factor']:>6} {_cell(row['interval_s']):>10} "
            f"{_cell(row['uncompensated']['l2_relative']) or '-':>12} "
            f"{_cell(row['compensated']['l2_relative']) or '-':>12} "
            f"{'yes' if row['feasible'] else 'no':>8}"
        )
    lines.append("")
    best = report.get("best")
    if report.get("mode") == "analyze":
        lines.append("analysis only; no rate selected")
    elif best is None:
        lines.append("no feasible rate")
    else:
        reduction = 100.0 * (1.0 - 1.0 / best["factor"])
        lines.append(
            f"best: factor {best['factor']}, interval {_cell(best['interval_s'])} s, "
            f"l2 {_cell(best['compensated']['l2_relative'])}, "
            f"{reduction:.0f}% fewer samples"
        )
    return "\n".join(lines) + "\n"
