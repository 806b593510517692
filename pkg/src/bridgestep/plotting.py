"""Dependency-free SVG line charts of impact factor against speed."""

from __future__ import annotations

import logging
import math
from collections import defaultdict
from pathlib import Path
from xml.sax.saxutils import escape

from .tables import csv_text, atomic_write_text, fmt

logger = logging.getLogger(__name__)

WIDTH, HEIGHT = 720, 440
MARGIN = dict(left=70, right=150, top=40, bottom=55)
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    start = math.floor(lo / step) * step
    ticks = []
    x = start
    while x <= hi + 1e-9 * step:
        ticks.append(round(x, 10))
        x += step
    if ticks[-1] < hi:
        ticks.append(round(x, 10))
    return ticks


def line_chart_svg(x, series: dict, title: str, xlabel: str, ylabel: str) -> str:
    """``series`` maps a legend label to y values aligned with ``x``."""
    xt = nice_ticks(min(x), max(x))
    ys = [y for values in series.values() for y in values if math.isfinite(y)]
    yt = nice_ticks(min(ys), max(ys))
    x0, x1, y0, y1 = xt[0], xt[-1], yt[0], yt[-1]
    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(v):
        return MARGIN["left"] + (v - x0) / (x1 - x0) * pw

    def py(v):
        return MARGIN["top"] + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
    ]
    for v in xt:
        out.append(f'<line x1="{px(v):.2f}" y1="{MARGIN["top"]}" x2="{px(v):.2f}" '
                   f'y2="{MARGIN["top"] + ph}" stroke="#e0e0e0"/>')
        out.append(f'<text x="{px(v):.2f}" y="{MARGIN["top"] + ph + 18}" text-anchor="middle">{fmt(v)}</text>')
    for v in yt:
        out.append(f'<line x1="{MARGIN["left"]}" y1="{py(v):.2f}" x2="{MARGIN["left"] + pw}" '
                   f'y2="{py(v):.2f}" stroke="#e0e0e0"/>')
        out.append(f'<text x="{MARGIN["left"] - 8}" y="{py(v) + 4:.2f}" text-anchor="end">{fmt(v)}</text>')
    out.append(f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{pw}" height="{ph}" '
               f'fill="none" stroke="black"/>')
    out.append(f'<text x="{MARGIN["left"] + pw / 2:.1f}" y="{HEIGHT - 12}" '
               f'text-anchor="middle">{escape(xlabel)}</text>')
    out.append(f'<text x="18" y="{MARGIN["top"] + ph / 2:.1f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {MARGIN["top"] + ph / 2:.1f})">{escape(ylabel)}</text>')
    for i, (label, values) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, values) if math.isfinite(b))
        out.append(f'<polyline class="series" fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = MARGIN["top"] + 10 + 18 * i
        lx = MARGIN["left"] + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_impact_charts(rows, out_dir) -> list[Path]:
    """One SVG and one CSV per (span, distance) from results rows.
    Returns the written paths."""
    out_dir = Path(out_dir)
    groups = defaultdict(lambda: defaultdict(dict))
    for r in rows:
        groups[(r["span_m"], r["axle_distance_m"])][r["dt_s"]][r["speed_kmh"]] = r["impact_factor"]
    if not groups:
        logger.warning("no results to plot")
        return []
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for (span, d), by_dt in sorted(groups.items()):
        dts = sorted(by_dt, reverse=True)
        speeds = sorted({s for series in by_dt.values() for s in series})
        table = {f"dt={fmt(dt)} s": [by_dt[dt].get(s, math.nan) for s in speeds] for dt in dts}
        stem = f"if_L{fmt(span)}_d{fmt(d)}"
        svg = line_chart_svg(speeds, table, f"Impact factor, L = {fmt(span)} m, d = {fmt(d)} m",
                             "Speed (km/h)", "Impact factor")
        header = ["speed_kmh"] + [f"if_dt_{fmt(dt)}" for dt in dts]
        rows_out = [[fmt(s)] + ["" if math.isnan(v) else f"{v:.5f}" for v in (table[k][i] for k in table)]
                    for i, s in enumerate(speeds)]
        atomic_write_text(out_dir / f"{stem}.svg", svg)
        atomic_write_text(out_dir / f"{stem}.csv", csv_text(header, rows_out))
        written += [out_dir / f"{stem}.svg", out_dir / f"{stem}.csv"]
    return written
