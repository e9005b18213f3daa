"""Fit-table layout, CSV/JSON/text emission and run manifests.

Table ids follow the A1..A22 layout: one law per table, one row per
instrument, columns E, dE, C, dC, adjusted R^2 and the quadratic-linear R^2
difference, with a final average row carrying sample standard deviations in
parentheses.
"""

from __future__ import annotations

import csv
import hashlib
import json
import statistics
from pathlib import Path

import numpy as np

from .laws import COST_LAW_FIT_FROM_PCT, LawId

# table id -> (law, fit-from in the law's abscissa units)
TABLE_LAWS = {
    "A1": (LawId.DC_COUNT, None),
    "A2": (LawId.TICK_COUNT, None),
    "A3": (LawId.MOVE_COUNT, None),
    "A4": (LawId.MEAN_RETURN_P1, None),
    "A5": (LawId.MEAN_RETURN_P2, None),
    "A6": (LawId.MAX_RANGE_P1, None),
    "A7": (LawId.MAX_RANGE_P2, None),
    "A8": (LawId.TIME_OF_MOVE, None),
    "A9": (LawId.TIME_OF_DC, None),
    "A10": (LawId.AVG_MOVE_TM, None),
    "A11": (LawId.AVG_MOVE_DC, None),
    "A12": (LawId.AVG_MOVE_OS, None),
    "A13": (LawId.AVG_TIME_TM, None),
    "A14": (LawId.AVG_TIME_DC, None),
    "A15": (LawId.AVG_TIME_OS, None),
    "A16": (LawId.AVG_TICKS_TM, None),
    "A17": (LawId.AVG_TICKS_DC, None),
    "A18": (LawId.AVG_TICKS_OS, None),
    "A19": (LawId.CUM_TM, None),
    "A20": (LawId.CUM_TM_COST, COST_LAW_FIT_FROM_PCT),
    "A21": (LawId.CUM_DC, None),
    "A22": (LawId.CUM_OS, None),
}

LAW_TABLE = {law.value: table for table, (law, _) in TABLE_LAWS.items()}

FIT_COLUMNS = ["instrument", "law", "E", "dE", "C", "dC",
               "r2_adj", "r2_curvature", "n_points"]


def write_samples_csv(path, samples_by_law):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["law", "abscissa", "value", "count"])
        for law, samples in samples_by_law.items():
            for s in samples:
                w.writerow([law.value, repr(float(s.abscissa)),
                            repr(float(s.value)), int(s.count)])


def read_samples_csv(path):
    out = {}
    from .laws import LawSample
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            law = LawId(row["law"])
            out.setdefault(law, []).append(
                LawSample(float(row["abscissa"]), float(row["value"]), int(row["count"])))
    return out


def write_fit_rows_csv(path, rows):
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=FIT_COLUMNS)
        w.writeheader()
        for row in rows:
            w.writerow({k: row[k] for k in FIT_COLUMNS})


def read_fit_rows_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for row in rows:
        for k in ("E", "dE", "C", "dC", "r2_adj", "r2_curvature"):
            row[k] = float(row[k])
        row["n_points"] = int(row["n_points"])
    return rows


def write_crosscheck_csv(path, checks):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["check", "lhs", "rhs", "rel_error", "tolerance", "pass"])
        for c in checks:
            w.writerow([c.name, repr(c.lhs), repr(c.rhs),
                        repr(c.rel_error), repr(c.tolerance), c.passed])


def write_coastline_csv(path, rows):
    cols = ["threshold_pct", "annual_pct", "daily_pct", "measured_annual_pct",
            "cost_annual_pct", "cost_daily_pct", "n_segments",
            "extrapolated", "below_granularity"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for r in rows:
            w.writerow([getattr(r, c) for c in cols])


def write_event_dump_csv(path, dissection):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["threshold", "direction", "tm_move", "dc_move", "os_move",
                    "tm_time", "dc_time", "os_time", "tm_ticks", "dc_ticks", "os_ticks"])
        d = dissection
        for i in range(d.n_records):
            w.writerow([repr(d.threshold), "up" if d.direction[i] > 0 else "down",
                        repr(float(d.tm_move[i])), repr(float(d.dc_move[i])),
                        repr(float(d.os_move[i])), repr(float(d.tm_time[i])),
                        repr(float(d.dc_time[i])), repr(float(d.os_time[i])),
                        int(d.tm_ticks[i]), int(d.dc_ticks[i]), int(d.os_ticks[i])])


def grid_hash(grid) -> str:
    return hashlib.sha256(np.ascontiguousarray(grid, dtype=np.float64).tobytes()).hexdigest()


def write_manifest(path, config: dict, partial: bool = False):
    """Versions, seeds and grid hashes for a run; no wall-clock fields, so a
    repeated run with the same inputs is byte-identical."""
    import numba

    from . import __version__
    payload = {
        "ticklaws_version": __version__,
        "numpy_version": np.__version__,
        "numba_version": numba.__version__,
        "partial": partial,
        "config": config,
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _fmt(value, digits=3):
    if value != value:  # NaN
        return "nan"
    return f"{value:.{digits}f}"


def format_table(table_id: str, rows, fmt: str = "text") -> str:
    """A1..A22-layout table for one law across instruments.

    The final row holds the arithmetic mean over instruments with sample
    standard deviations in parentheses (only when there are at least two
    instrument rows).
    """
    header = ["Currency", "E", "dE", "C", "dC", "AdjR2", "R2quad-R2lin"]
    body = []
    for row in rows:
        body.append([row["instrument"], _fmt(row["E"]), f"{row['dE']:.1e}",
                     f"{row['C']:.3e}", f"{row['dC']:.1e}",
                     _fmt(row["r2_adj"], 5), f"{row['r2_curvature']:.3e}"])
    if len(rows) >= 2:
        avg = [statistics.mean(r[k] for r in rows) for k in ("E", "C")]
        std = [statistics.stdev(r[k] for r in rows) for k in ("E", "C")]
        body.append(["Average", _fmt(avg[0]), f"({std[0]:.1e})",
                     f"{avg[1]:.3e}", f"({std[1]:.1e})", "", ""])
    if fmt == "csv":
        lines = [",".join(header)] + [",".join(r) for r in body]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps({"table": table_id, "rows": rows}, indent=2, sort_keys=True) + "\n"
    widths = [max(len(header[i]), *(len(r[i]) for r in body)) if body else len(header[i])
              for i in range(len(header))]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(header))]
    lines.append("  ".join("-" * w for w in widths))
    for r in body:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(r)))
    return f"Table {table_id}\n" + "\n".join(lines) + "\n"
