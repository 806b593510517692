"""Impact factor and train/bridge resonance relations."""

from __future__ import annotations

from dataclasses import dataclass

from ._validation import check_non_negative, check_positive
from .exceptions import InvalidStaticError


@dataclass(frozen=True)
class ImpactRecord:
    span_m: float
    axle_distance_m: float
    speed_m_s: float
    dt_s: float
    d_dyn_m: float
    d_st_m: float
    impact_factor: float

    @property
    def key(self) -> tuple[float, float, float, float]:
        return (self.span_m, self.axle_distance_m, self.speed_m_s, self.dt_s)

    @property
    def condition(self) -> tuple[float, float, float]:
        return (self.span_m, self.axle_distance_m, self.speed_m_s)


def impact_factor(d_dyn: float, d_st: float) -> float:
    """``(D_dyn - D_st) / D_st``. Negative values are returned as is."""
    d_st = check_positive(d_st, "d_st", InvalidStaticError)
    d_dyn = check_non_negative(d_dyn, "d_dyn")
    return (d_dyn - d_st) / d_st


def resonance_speed(f1_hz: float, axle_spacing_m: float) -> float:
    """Speed (m/s) at which axles pass at the bridge frequency."""
    return check_positive(f1_hz, "f1_hz") * check_positive(axle_spacing_m, "axle_spacing_m")


def loading_frequency(speed_m_s: float, axle_spacing_m: float) -> float:
    """Axle passage frequency ``V / d`` in Hz."""
    return check_positive(speed_m_s, "speed_m_s") / check_positive(axle_spacing_m, "axle_spacing_m")
