"""Small argument checkers shared by the public API."""

from __future__ import annotations

import math
from numbers import Integral, Real

from .exceptions import BridgeStepError


def check_positive(value, name: str, error=BridgeStepError) -> float:
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
        raise error(f"{name} must be a finite number, got {value!r}")
    if value <= 0:
        raise error(f"{name} must be > 0, got {value!r}")
    return float(value)


def check_non_negative(value, name: str, error=BridgeStepError) -> float:
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
        raise error(f"{name} must be a finite number, got {value!r}")
    if value < 0:
        raise error(f"{name} must be >= 0, got {value!r}")
    return float(value)


def check_count(value, name: str, minimum: int = 1, error=BridgeStepError) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise error(f"{name} must be an integer, got {value!r}")
    if value < minimum:
        raise error(f"{name} must be >= {minimum}, got {value!r}")
    return int(value)
