"""Proper time-step selection, k-coefficient statistics and the full
parameter sweep.

The proper time step of a (span, axle distance, speed) condition is the
largest grid step whose impact factor lies within ``tolerance`` of the
impact factor at the finest grid step. The coefficient ``k = dt V / L``
is then collected over all conditions; its minimum gives the
conservative rule ``dt = k L / V``.
"""

from __future__ import annotations

import logging
import math
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import spearmanr

from ._validation import check_count, check_positive
from .exceptions import BridgeStepError, EmptyStudyError, InsufficientGridError
from .metrics import ImpactRecord, impact_factor
from .solver import solve_case
from .static import max_static_sweep
from .structural import GRAVITY, AnalysisCase, BridgeSpec, TrainSpec

logger = logging.getLogger(__name__)

DEFAULT_DT_GRID = (0.05, 0.025, 0.015, 0.01, 0.005, 0.0025)
DEFAULT_K = 0.0195
DEFAULT_TOLERANCE = 0.01


def default_speeds_m_s(start_kmh: float = 109.0, step_m_s: float = 2.5, count: int = 34) -> list[float]:
    """Default speed grid: 109 km/h upward in 2.5 m/s increments."""
    return [start_kmh / 3.6 + i * step_m_s for i in range(count)]


def default_bridges(**kwargs) -> list[BridgeSpec]:
    return [BridgeSpec(L, f, **kwargs) for L, f in ((10, 12.0), (15, 8.0), (20, 6.0), (25, 4.8))]


DEFAULT_AXLE_DISTANCES = tuple(float(d) for d in range(13, 25))


@dataclass(frozen=True)
class TimeStepSelection:
    span_m: float
    axle_distance_m: float
    speed_m_s: float
    if_by_dt: dict
    chosen_dt_s: float
    converged: bool

    @property
    def k_value(self) -> float:
        return self.chosen_dt_s * self.speed_m_s / self.span_m

    @property
    def condition(self) -> tuple[float, float, float]:
        return (self.span_m, self.axle_distance_m, self.speed_m_s)


@dataclass(frozen=True)
class KStats:
    k_min: float
    k_mean: float
    k_std: float
    count: int


@dataclass
class CalibrationReport:
    selections: list
    per_bridge: dict
    global_k_min: float
    failures: list = field(default_factory=list)
    flagged_conditions: list = field(default_factory=list)

    def recommended_dt(self, span_m: float, speed_m_s: float) -> float:
        return recommended_dt(span_m, speed_m_s, self.global_k_min)


@dataclass(frozen=True)
class StudyGrid:
    bridges: tuple
    axle_distances_m: tuple
    speeds_m_s: tuple
    dt_grid_s: tuple = DEFAULT_DT_GRID
    if_tolerance: float = DEFAULT_TOLERANCE
    axle_load_newton: float = 20 * 1000.0 * GRAVITY
    axle_count: int = 10

    def __post_init__(self):
        for name in ("bridges", "axle_distances_m", "speeds_m_s", "dt_grid_s"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
            if not getattr(self, name):
                raise BridgeStepError(f"{name} must not be empty")
        if len(self.dt_grid_s) < 2:
            raise InsufficientGridError("dt_grid_s needs at least two entries")
        if any(b >= a for a, b in zip(self.dt_grid_s, self.dt_grid_s[1:])):
            raise BridgeStepError("dt_grid_s must be strictly decreasing")
        check_positive(self.if_tolerance, "if_tolerance")
        check_positive(self.axle_load_newton, "axle_load_newton")
        check_count(self.axle_count, "axle_count")

    @classmethod
    def default(cls, **overrides) -> "StudyGrid":
        """The full default grid: 4 bridges x 12 distances x 34 speeds x 6 steps."""
        kwargs = dict(
            bridges=default_bridges(),
            axle_distances_m=DEFAULT_AXLE_DISTANCES,
            speeds_m_s=default_speeds_m_s(),
        )
        kwargs.update(overrides)
        return cls(**kwargs)

    def conditions(self):
        for bridge in self.bridges:
            for d in self.axle_distances_m:
                for v in self.speeds_m_s:
                    yield bridge, d, v


@dataclass
class StudyResult:
    records: list
    report: CalibrationReport
    failures: list


def select_proper_dt(if_by_dt, tolerance: float = DEFAULT_TOLERANCE) -> tuple[float, bool]:
    """Largest step whose impact factor is within ``tolerance`` of the
    finest-step value.

    ``if_by_dt`` is a mapping or a sequence of (dt, IF) pairs. Returns
    ``(chosen_dt, converged)``; ``converged`` is False when only the
    finest step qualifies.
    """
    items = list(if_by_dt.items()) if hasattr(if_by_dt, "items") else [tuple(p) for p in if_by_dt]
    if len(items) < 2:
        raise InsufficientGridError("at least two time steps are required")
    steps = [float(dt) for dt, _ in items]
    if len(set(steps)) != len(steps):
        raise BridgeStepError("duplicate time steps")
    check_positive(tolerance, "tolerance")
    ordered = sorted(((float(dt), float(v)) for dt, v in items), reverse=True)
    reference = ordered[-1][1]
    for dt, value in ordered[:-1]:
        if abs(value - reference) <= tolerance:
            return dt, True
    return ordered[-1][0], False


def k_from_selection(selection: TimeStepSelection) -> float:
    return selection.chosen_dt_s * selection.speed_m_s / selection.span_m


def _stats(values) -> KStats:
    a = np.asarray(values, dtype=float)
    return KStats(float(a.min()), float(a.mean()), float(a.std(ddof=0)), int(a.size))


def aggregate_k(selections) -> CalibrationReport:
    """Per-bridge min/mean/population std of k and the global minimum."""
    selections = sorted(selections, key=lambda s: s.condition)
    if not selections:
        raise EmptyStudyError("no time-step selections to aggregate")
    by_span = defaultdict(list)
    for s in selections:
        by_span[s.span_m].append(k_from_selection(s))
    per_bridge = {span: _stats(ks) for span, ks in sorted(by_span.items())}
    global_k_min = min(st.k_min for st in per_bridge.values())
    return CalibrationReport(selections, per_bridge, global_k_min)


def k_statistics(values) -> KStats:
    """Min/mean/population std of a plain list of k values."""
    if len(values) == 0:
        raise EmptyStudyError("no k values")
    return _stats(values)


def recommended_dt(span_m: float, speed_m_s: float, k: float = DEFAULT_K) -> float:
    """Proper time step ``k L / V`` in seconds."""
    return k * check_positive(span_m, "span_m") / check_positive(speed_m_s, "speed_m_s")


def _run_condition(args):
    bridge, train, speed, dt_grid, d_st = args
    records, failures = [], []
    for dt in dt_grid:
        case = AnalysisCase(bridge, train, speed, dt)
        try:
            hist = solve_case(case, keep_modes=False)
            d_dyn = hist.max_abs_deflection_m
            records.append(ImpactRecord(bridge.span_m, train.axle_spacing_m, speed, dt,
                                        d_dyn, d_st, impact_factor(d_dyn, d_st)))
        except BridgeStepError as exc:
            failures.append((case.key, f"{type(exc).__name__}: {exc}"))
    return records, failures


def resolve_workers(workers=None) -> int:
    if workers is None:
        env = os.environ.get("BRIDGESTEP_WORKERS")
        workers = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(workers))


def compute_impact_records(grid: StudyGrid, workers=None):
    """Solve every (bridge, distance, speed, dt) case. Returns records and
    failures, both sorted by case key."""
    tasks = []
    statics = {}
    for bridge, d, v in grid.conditions():
        train = TrainSpec(grid.axle_load_newton, grid.axle_count, d)
        skey = (bridge, d)
        if skey not in statics:
            statics[skey] = max_static_sweep(bridge, train).max_midpoint_deflection_m
        tasks.append((bridge, train, v, grid.dt_grid_s, statics[skey]))

    workers = resolve_workers(workers)
    if workers == 1:
        outputs = list(map(_run_condition, tasks))
    else:
        chunk = max(1, len(tasks) // (workers * 8))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_condition, tasks, chunksize=chunk))

    records = sorted((r for recs, _ in outputs for r in recs), key=lambda r: r.key)
    failures = sorted((f for _, fails in outputs for f in fails), key=lambda f: f[0])
    return records, failures


def selections_from_records(records, dt_grid, tolerance: float = DEFAULT_TOLERANCE):
    """Group records by condition and select a step for each condition
    that has the complete ``dt_grid``. Returns (selections, flagged)."""
    grouped = defaultdict(dict)
    for r in records:
        grouped[r.condition][r.dt_s] = r.impact_factor
    wanted = set(float(dt) for dt in dt_grid)
    selections, flagged = [], []
    for cond in sorted(grouped):
        ifs = grouped[cond]
        if set(ifs) != wanted:
            flagged.append(cond)
            continue
        chosen, converged = select_proper_dt(ifs, tolerance)
        selections.append(TimeStepSelection(*cond, dict(sorted(ifs.items(), reverse=True)),
                                            chosen, converged))
    return selections, flagged


def run_study(grid: StudyGrid, workers=None) -> StudyResult:
    """Full sweep: impact factors, per-condition step selection, k statistics."""
    records, failures = compute_impact_records(grid, workers)
    if failures:
        logger.warning("%d case(s) failed", len(failures))
    expected = {(b.span_m, d, v) for b, d, v in grid.conditions()}
    selections, flagged = selections_from_records(records, grid.dt_grid_s, grid.if_tolerance)
    flagged = sorted(set(flagged) | (expected - {s.condition for s in selections}))
    if selections:
        report = aggregate_k(selections)
    else:
        report = CalibrationReport([], {}, math.nan)
    report.failures = failures
    report.flagged_conditions = flagged
    return StudyResult(records, report, failures)


def _grouped_spearman(rows, group_key, x_key):
    coefs = []
    groups = defaultdict(list)
    for row in rows:
        groups[group_key(row)].append((x_key(row), row.chosen_dt_s))
    for pairs in groups.values():
        if len(pairs) < 3:
            continue
        x, y = np.array(pairs).T
        if np.ptp(x) == 0 or np.ptp(y) == 0:
            continue
        coefs.append(spearmanr(x, y).statistic)
    return float(np.mean(coefs)) if coefs else math.nan


def trend_correlations(selections) -> dict:
    """Mean within-group Spearman correlation of chosen step with speed
    (grouped by span and distance) and with span (grouped by distance and
    speed). Groups where either variable is constant are skipped."""
    return {
        "speed": _grouped_spearman(selections, lambda s: (s.span_m, s.axle_distance_m), lambda s: s.speed_m_s),
        "span": _grouped_spearman(selections, lambda s: (s.axle_distance_m, s.speed_m_s), lambda s: s.span_m),
    }
