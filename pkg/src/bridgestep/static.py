"""Static midspan deflection of a simply supported beam under point
loads, and its maximum over a quasi-static crossing of the train."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import OutOfDomainError
from .structural import BridgeSpec, TrainSpec

SWEEP_DIVISIONS = 1000


@dataclass(frozen=True)
class StaticResult:
    max_midpoint_deflection_m: float
    critical_front_position_m: float


def _influence(L: float, EI: float, a: np.ndarray) -> np.ndarray:
    """Midspan deflection per unit load at position ``a`` (symmetric)."""
    a = np.where(a > L / 2.0, L - a, a)
    return a * (3.0 * L * L - 4.0 * a * a) / (48.0 * EI)


def static_midpoint_deflection(bridge: BridgeSpec, loads) -> float:
    """Superposed midspan deflection for ``loads`` given as (P, a) pairs."""
    loads = list(loads)
    if not loads:
        return 0.0
    P, a = np.asarray(loads, dtype=float).reshape(-1, 2).T
    if np.any(a < 0.0) or np.any(a > bridge.span_m):
        raise OutOfDomainError(f"load position outside [0, {bridge.span_m}]")
    return float(np.sum(P * _influence(bridge.span_m, bridge.flexural_rigidity, a)))


def max_static_sweep(bridge: BridgeSpec, train: TrainSpec,
                     divisions: int = SWEEP_DIVISIONS) -> StaticResult:
    """Largest midspan deflection as the train front moves from the left
    support until the last axle leaves, sampled every ``min(d, L) / divisions``."""
    L = bridge.span_m
    d = train.axle_spacing_m
    step = (min(d, L) if train.axle_count > 1 else L) / divisions
    end = train.length_m + L
    front = np.arange(0, int(np.ceil(end / step - 1e-9)) + 1) * step
    front[-1] = min(front[-1], end)
    offsets = np.arange(train.axle_count) * d
    pos = front[:, None] - offsets[None, :]
    on_span = (pos >= 0.0) & (pos <= L)
    unit = _influence(L, bridge.flexural_rigidity, np.clip(pos, 0.0, L))
    total = train.axle_load_newton * np.where(on_span, unit, 0.0).sum(axis=1)
    i = int(np.argmax(total))
    return StaticResult(float(total[i]), float(front[i]))
