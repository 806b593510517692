"""Axle timing and the generalized (modal) force of a moving load train.

Time origin is the instant the first axle enters the span. A load
contributes from its arrival time inclusive (Heaviside step with
``H(0) = 1``); after it leaves, the exit term cancels the entry term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_positive
from .exceptions import InvalidCaseError, InvalidModeError
from .structural import BridgeSpec, TrainSpec


@dataclass(frozen=True)
class LoadTimeline:
    arrival_times_s: tuple[float, ...]
    exit_times_s: tuple[float, ...]
    passage_end_s: float
    speed_m_s: float
    span_m: float

    @property
    def crossing_time_s(self) -> float:
        return self.span_m / self.speed_m_s


def arrival_times(train: TrainSpec, speed: float, span_m: float) -> LoadTimeline:
    """Arrival ``t_j = (j - 1) d / v`` and exit ``t_j + L / v`` of every axle."""
    v = check_positive(speed, "speed", InvalidCaseError)
    span = check_positive(span_m, "span_m", InvalidCaseError)
    j = np.arange(train.axle_count, dtype=float)
    arrivals = j * train.axle_spacing_m / v
    exits = arrivals + span / v
    return LoadTimeline(
        arrival_times_s=tuple(arrivals.tolist()),
        exit_times_s=tuple(exits.tolist()),
        passage_end_s=float(exits[-1]),
        speed_m_s=v,
        span_m=span,
    )


def timeline_for(bridge: BridgeSpec, train: TrainSpec, speed: float) -> LoadTimeline:
    return arrival_times(train, speed, bridge.span_m)


def _axle_terms(bridge, timeline, n, t):
    """Per-axle entry and exit contributions, shape (N, len(t)), without
    the 2P/(mL) factor."""
    v = timeline.speed_m_s
    L = bridge.span_m
    arr = np.asarray(timeline.arrival_times_s)[:, None]
    ext = np.asarray(timeline.exit_times_s)[:, None]
    t = np.atleast_1d(np.asarray(t, dtype=float))[None, :]
    wave = n * math.pi * v / L
    entry = np.where(t >= arr, np.sin(wave * (t - arr)), 0.0)
    sign = 1.0 if n % 2 == 1 else -1.0  # (-1)**(n+1)
    leave = np.where(t >= ext, sign * np.sin(wave * (t - arr - L / v)), 0.0)
    return entry, leave


def modal_force(bridge: BridgeSpec, train: TrainSpec, timeline: LoadTimeline, n: int, t):
    """Generalized force of mode ``n`` per unit modal mass at time(s) ``t``.

    Returns a float for scalar ``t`` and an array otherwise.
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not 1 <= n <= bridge.mode_count:
        raise InvalidModeError(f"mode index {n!r} outside 1..{bridge.mode_count}")
    scalar = np.ndim(t) == 0
    entry, leave = _axle_terms(bridge, timeline, int(n), t)
    amp = 2.0 * train.axle_load_newton / (bridge.mass_per_length_kg_m * bridge.span_m)
    out = amp * (entry + leave).sum(axis=0)
    return float(out[0]) if scalar else out


def modal_forces(bridge: BridgeSpec, train: TrainSpec, timeline: LoadTimeline, times) -> np.ndarray:
    """All retained modes on a time grid, shape (mode_count, len(times))."""
    times = np.asarray(times, dtype=float)
    return np.vstack([
        modal_force(bridge, train, timeline, n, times)
        for n in range(1, bridge.mode_count + 1)
    ])


def axles_on_bridge(timeline: LoadTimeline, t: float) -> int:
    """Number of axles with ``t_j <= t < t_j + L/v``."""
    arr = np.asarray(timeline.arrival_times_s)
    ext = np.asarray(timeline.exit_times_s)
    return int(np.count_nonzero((arr <= t) & (t < ext)))
