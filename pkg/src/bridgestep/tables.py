"""Tabular result files.

results.csv    span_m, axle_distance_m, speed_kmh, dt_s, d_dyn_m, d_st_m, impact_factor
selection.csv  span_m, axle_distance_m, speed_kmh, chosen_dt_s, converged, k, status
summary.json   per-bridge k statistics and the global minimum
manifest.json  run metadata

Deflections are written with 6 significant digits, impact factors with
5 decimals. Readers look columns up by name, so extra columns are ignored.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from collections import defaultdict
from pathlib import Path

from .calibration import TimeStepSelection, aggregate_k, select_proper_dt
from .exceptions import BridgeStepError, EmptyStudyError

RESULT_COLUMNS = ("span_m", "axle_distance_m", "speed_kmh", "dt_s", "d_dyn_m", "d_st_m", "impact_factor")
SELECTION_COLUMNS = ("span_m", "axle_distance_m", "speed_kmh", "chosen_dt_s", "converged", "k", "status")


def fmt(x: float) -> str:
    return f"{x:.6g}"


def atomic_write_text(path, text: str) -> None:
    """Write via a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def results_rows(records):
    for r in sorted(records, key=lambda r: r.key):
        yield (fmt(r.span_m), fmt(r.axle_distance_m), fmt(r.speed_m_s * 3.6), fmt(r.dt_s),
               fmt(r.d_dyn_m), fmt(r.d_st_m), f"{r.impact_factor:.5f}")


def write_results(path, records) -> None:
    atomic_write_text(path, csv_text(RESULT_COLUMNS, results_rows(records)))


def _read_rows(path, required):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in required if c not in (reader.fieldnames or [])]
        if missing:
            raise BridgeStepError(f"{path}: missing column(s) {', '.join(missing)}")
        return list(reader)


def read_results(path) -> list[dict]:
    """Rows of results.csv as dicts of floats (declared columns only)."""
    return [{c: float(row[c]) for c in RESULT_COLUMNS} for row in _read_rows(path, RESULT_COLUMNS)]


def select_from_rows(rows, tolerance: float):
    """Selection per (span, distance, speed) from results rows.

    Conditions missing any step present elsewhere in the file are
    returned with status ``incomplete_dt_grid`` and no selection.
    """
    grouped = defaultdict(dict)
    for row in rows:
        cond = (row["span_m"], row["axle_distance_m"], row["speed_kmh"])
        grouped[cond][row["dt_s"]] = row["impact_factor"]
    full = {dt for ifs in grouped.values() for dt in ifs}
    out = []
    for cond in sorted(grouped):
        span, d, kmh = cond
        ifs = grouped[cond]
        if set(ifs) != full or len(ifs) < 2:
            out.append((cond, None))
            continue
        chosen, converged = select_proper_dt(ifs, tolerance)
        out.append((cond, TimeStepSelection(span, d, kmh / 3.6, dict(sorted(ifs.items(), reverse=True)),
                                            chosen, converged)))
    return out


def write_selection(path, selected) -> None:
    rows = []
    for (span, d, kmh), sel in selected:
        if sel is None:
            rows.append((fmt(span), fmt(d), fmt(kmh), "", "", "", "incomplete_dt_grid"))
        else:
            rows.append((fmt(span), fmt(d), fmt(kmh), fmt(sel.chosen_dt_s),
                         "true" if sel.converged else "false", fmt(sel.k_value), "ok"))
    atomic_write_text(path, csv_text(SELECTION_COLUMNS, rows))


def read_selection(path) -> list[TimeStepSelection]:
    """Selections with status ``ok``; k is recomputed from its definition."""
    out = []
    for row in _read_rows(path, SELECTION_COLUMNS):
        if row["status"] != "ok":
            continue
        kmh = float(row["speed_kmh"])
        out.append(TimeStepSelection(float(row["span_m"]), float(row["axle_distance_m"]), kmh / 3.6,
                                     {}, float(row["chosen_dt_s"]), row["converged"] == "true"))
    return out


def summary_dict(report) -> dict:
    return {
        "global_k_min": report.global_k_min,
        "bridges": [
            {"span_m": span, "k_min": st.k_min, "k_mean": st.k_mean, "k_std": st.k_std, "count": st.count}
            for span, st in report.per_bridge.items()
        ],
        "selection_count": len(report.selections),
    }


def calibrate_file(path) -> dict:
    selections = read_selection(path)
    if not selections:
        raise EmptyStudyError(f"{path}: no usable selection rows")
    return summary_dict(aggregate_k(selections))


def write_json(path, obj) -> None:
    atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_history(path, history) -> None:
    header = ["time_s", "midpoint_deflection_m"]
    q = history.modal_coordinates
    if q is not None:
        header += [f"q_{n}" for n in range(1, q.shape[0] + 1)]
    rows = []
    for i, t in enumerate(history.times_s):
        row = [repr(float(t)), repr(float(history.midpoint_deflection_m[i]))]
        if q is not None:
            row += [repr(float(x)) for x in q[:, i]]
        rows.append(row)
    atomic_write_text(path, csv_text(header, rows))
