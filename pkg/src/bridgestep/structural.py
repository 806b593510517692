"""Bridge and train descriptions plus the modal properties of a simply
supported Euler-Bernoulli beam.

Bridges are described by their first flexural frequency rather than by
E, I and m separately. The bending stiffness per unit mass is recovered
from ``omega_1 = pi**2 * sqrt(EI / (m L**4))``; the mass per unit length
only scales absolute deflections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_count, check_non_negative, check_positive
from .exceptions import (
    BridgeStepError,
    InvalidCaseError,
    InvalidModeError,
    OutOfDomainError,
)

GRAVITY = 9.81  # m/s^2, used for ton -> N conversion only
DEFAULT_MASS_PER_LENGTH = 1000.0  # kg/m
DEFAULT_MODE_COUNT = 5
MAX_MODE_COUNT = 64


@dataclass(frozen=True)
class BridgeSpec:
    """Simply supported single-span bridge.

    Attributes:
        span_m: span length L.
        f1_hz: first flexural natural frequency.
        damping_ratio: modal damping ratio applied to every retained mode.
        mode_count: number of retained modes.
        mass_per_length_kg_m: mass per unit length (amplitude scale only).
    """

    span_m: float
    f1_hz: float
    damping_ratio: float = 0.0
    mode_count: int = DEFAULT_MODE_COUNT
    mass_per_length_kg_m: float = DEFAULT_MASS_PER_LENGTH

    def __post_init__(self):
        check_positive(self.span_m, "span_m")
        check_positive(self.f1_hz, "f1_hz")
        xi = check_non_negative(self.damping_ratio, "damping_ratio")
        if xi >= 1.0:
            raise BridgeStepError(f"damping_ratio must be < 1, got {xi}")
        check_count(self.mode_count, "mode_count")
        check_positive(self.mass_per_length_kg_m, "mass_per_length_kg_m")

    @property
    def period_s(self) -> float:
        return 1.0 / self.f1_hz

    @property
    def flexural_rigidity(self) -> float:
        """EI in N m^2."""
        return flexural_rigidity_ratio(self) * self.mass_per_length_kg_m


@dataclass(frozen=True)
class TrainSpec:
    """Train of identical, equally spaced concentrated axle loads."""

    axle_load_newton: float
    axle_count: int = 1
    axle_spacing_m: float = 0.0

    def __post_init__(self):
        check_positive(self.axle_load_newton, "axle_load_newton")
        check_count(self.axle_count, "axle_count")
        if self.axle_count > 1:
            check_positive(self.axle_spacing_m, "axle_spacing_m")
        else:
            check_non_negative(self.axle_spacing_m, "axle_spacing_m")

    @classmethod
    def from_tons(cls, axle_load_ton: float, axle_count: int = 1, axle_spacing_m: float = 0.0):
        return cls(axle_load_ton * 1000.0 * GRAVITY, axle_count, axle_spacing_m)

    @property
    def length_m(self) -> float:
        """Distance from first to last axle."""
        return (self.axle_count - 1) * self.axle_spacing_m


@dataclass(frozen=True)
class AnalysisCase:
    """One dynamic run: a train crossing a bridge at constant speed,
    integrated with a fixed time step."""

    bridge: BridgeSpec
    train: TrainSpec
    speed_m_s: float
    dt_s: float

    def __post_init__(self):
        check_positive(self.speed_m_s, "speed_m_s", InvalidCaseError)
        check_positive(self.dt_s, "dt_s", InvalidCaseError)

    @property
    def passage_time_s(self) -> float:
        return (self.train.length_m + self.bridge.span_m) / self.speed_m_s

    @property
    def key(self) -> tuple[float, float, float, float]:
        return (self.bridge.span_m, self.train.axle_spacing_m, self.speed_m_s, self.dt_s)


def _check_mode(bridge: BridgeSpec, n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise InvalidModeError(f"mode index must be an integer, got {n!r}")
    if not 1 <= n <= bridge.mode_count:
        raise InvalidModeError(f"mode index {n} outside 1..{bridge.mode_count}")
    return int(n)


def natural_frequency(bridge: BridgeSpec, n: int) -> float:
    """Angular frequency of mode ``n`` in rad/s (``n**2`` times the first)."""
    n = _check_mode(bridge, n)
    return n * n * (2.0 * math.pi * bridge.f1_hz)


def natural_frequencies(bridge: BridgeSpec) -> np.ndarray:
    n = np.arange(1, bridge.mode_count + 1, dtype=float)
    return n * n * (2.0 * math.pi * bridge.f1_hz)


def mode_shape(bridge: BridgeSpec, n: int, x):
    """``sin(n pi x / L)``; ``x`` may be a scalar or an array in [0, L]."""
    n = _check_mode(bridge, n)
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0) or np.any(xa > bridge.span_m):
        raise OutOfDomainError(f"position outside [0, {bridge.span_m}]")
    out = np.sin(n * math.pi * xa / bridge.span_m)
    return float(out) if out.ndim == 0 else out


def midspan_mode_values(mode_count: int) -> np.ndarray:
    """Exact ``sin(n pi / 2)`` for n = 1..mode_count: 1, 0, -1, 0, ..."""
    n = np.arange(1, mode_count + 1)
    return np.array([0.0, 1.0, 0.0, -1.0])[n % 4]


def flexural_rigidity_ratio(bridge: BridgeSpec) -> float:
    """EI/m in m^4/s^2 implied by the first natural frequency."""
    omega1 = 2.0 * math.pi * bridge.f1_hz
    return omega1 ** 2 * bridge.span_m ** 4 / math.pi ** 4
