"""Modal time integration of the moving-load problem.

Every modal equation ``q'' + 2 xi w q' + w**2 q = F(t)`` is advanced with
the exact Duhamel solution for forcing that varies linearly across the
step. The forcing is sampled at grid nodes only, so a coarse grid both
undersamples the load history and misses peaks between nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_non_negative, check_positive
from .exceptions import (
    BridgeStepError,
    ConfigurationError,
    DegenerateGridError,
    OracleSingularityError,
    OutOfDomainError,
    UnsupportedDampingError,
)
from .forcing import modal_forces, timeline_for
from .structural import (
    MAX_MODE_COUNT,
    AnalysisCase,
    BridgeSpec,
    TrainSpec,
    midspan_mode_values,
    natural_frequencies,
)

REFERENCE_DT = 1e-4  # fine grid for oracle runs, never used for calibration
TAIL_PERIODS = 2.0


@dataclass(frozen=True)
class ResponseHistory:
    key: tuple
    dt_s: float
    times_s: np.ndarray
    midpoint_deflection_m: np.ndarray
    modal_coordinates: np.ndarray | None
    max_abs_deflection_m: float
    max_time_s: float


def free_vibration_matrix(omega: float, xi: float, dt: float) -> np.ndarray:
    """State transition of the unforced damped oscillator over ``dt``."""
    wd = omega * math.sqrt(1.0 - xi * xi)
    decay = math.exp(-xi * omega * dt)
    c = math.cos(wd * dt)
    s = math.sin(wd * dt)
    return decay * np.array([
        [c + xi * omega / wd * s, s / wd],
        [-omega * omega / wd * s, c - xi * omega / wd * s],
    ])


def _check_oscillator(omega, xi, dt):
    check_positive(omega, "omega")
    check_non_negative(xi, "xi")
    if xi >= 1.0:
        raise UnsupportedDampingError(f"only underdamped modes are supported, got xi={xi}")
    check_positive(dt, "dt")


def step_sdof(omega: float, xi: float, state, f_start: float, f_end: float, dt: float):
    """Advance ``(q, q')`` by one step of length ``dt``.

    Exact when the force varies linearly from ``f_start`` to ``f_end``.
    The response is split into the linear particular solution and a free
    vibration about it, which keeps round-off proportional to the static
    response rather than amplified by ``1 / (omega dt)``.
    """
    _check_oscillator(omega, xi, dt)
    (p11, p12), (p21, p22) = free_vibration_matrix(omega, xi, dt)
    q, v = state
    slope = (f_end - f_start) / dt
    beta = slope / omega ** 2
    alpha = (f_start - 2.0 * xi * omega * beta) / omega ** 2
    h, g = q - alpha, v - beta
    return (p11 * h + p12 * g + alpha + beta * dt, p21 * h + p22 * g + beta)


def integrate_sdof(omega: float, xi: float, force, dt: float, state=(0.0, 0.0)):
    """Compose :func:`step_sdof` over a nodal force history.

    Returns displacement and velocity arrays aligned with ``force``.
    """
    _check_oscillator(omega, xi, dt)
    force = np.asarray(force, dtype=float)
    (p11, p12), (p21, p22) = free_vibration_matrix(omega, xi, dt)
    w2 = omega * omega
    beta = np.diff(force) / dt / w2
    alpha = (force[:-1] - 2.0 * xi * omega * beta) / w2
    q, v = float(state[0]), float(state[1])
    qs = [q]
    vs = [v]
    for a, b in zip(alpha.tolist(), beta.tolist()):
        h = q - a
        g = v - b
        q = p11 * h + p12 * g + a + b * dt
        v = p21 * h + p22 * g + b
        qs.append(q)
        vs.append(v)
    return np.array(qs), np.array(vs)


def time_grid(case: AnalysisCase) -> np.ndarray:
    """Uniform grid from 0 covering passage plus a free-vibration tail,
    extended to the next whole step."""
    passage = case.passage_time_s
    if case.dt_s >= passage:
        raise DegenerateGridError(
            f"dt={case.dt_s} s is not shorter than the passage time {passage:.6g} s"
        )
    t_end = passage + TAIL_PERIODS / case.bridge.f1_hz
    n_steps = math.ceil(t_end / case.dt_s - 1e-9)
    return np.arange(n_steps + 1) * case.dt_s


def solve_case(case: AnalysisCase, keep_modes: bool = True,
               max_modes: int = MAX_MODE_COUNT) -> ResponseHistory:
    """Dynamic midspan deflection history from rest."""
    bridge = case.bridge
    if bridge.mode_count > max_modes:
        raise ConfigurationError(f"mode_count {bridge.mode_count} exceeds the cap of {max_modes}")
    times = time_grid(case)
    timeline = timeline_for(bridge, case.train, case.speed_m_s)
    forces = modal_forces(bridge, case.train, timeline, times)
    omegas = natural_frequencies(bridge)

    q = np.empty_like(forces)
    for i, omega in enumerate(omegas):
        q[i], _ = integrate_sdof(float(omega), bridge.damping_ratio, forces[i], case.dt_s)

    weights = midspan_mode_values(bridge.mode_count)
    u = weights @ q
    imax = int(np.argmax(np.abs(u)))
    return ResponseHistory(
        key=case.key,
        dt_s=case.dt_s,
        times_s=times,
        midpoint_deflection_m=u,
        modal_coordinates=q if keep_modes else None,
        max_abs_deflection_m=float(abs(u[imax])),
        max_time_s=float(times[imax]),
    )


def analytic_single_load_modal(bridge: BridgeSpec, load_newton: float, speed: float, n: int, t):
    """Closed-form undamped modal coordinate of mode ``n`` under one
    constant force crossing the span, valid while the force is on it."""
    if bridge.damping_ratio != 0.0:
        raise BridgeStepError("the closed-form oracle assumes zero damping")
    v = check_positive(speed, "speed")
    L = bridge.span_m
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(v * t > L * (1.0 + 1e-12)):
        raise OutOfDomainError("oracle valid only while the load is on the span")
    omega = n * n * 2.0 * math.pi * bridge.f1_hz
    forcing = n * math.pi * v / L
    if math.isclose(forcing, omega, rel_tol=1e-9):
        raise OracleSingularityError(f"mode {n} is resonant at speed {v} m/s")
    amp = 2.0 * load_newton / (bridge.mass_per_length_kg_m * L)
    return amp * (np.sin(forcing * t) - forcing / omega * np.sin(omega * t)) / (omega ** 2 - forcing ** 2)


def analytic_single_load_midpoint(bridge: BridgeSpec, load_newton: float, speed: float, t):
    """Midspan deflection of the closed-form solution summed over the
    bridge's retained modes."""
    weights = midspan_mode_values(bridge.mode_count)
    total = 0.0
    for n, w in enumerate(weights, start=1):
        if w != 0.0:
            total = total + w * analytic_single_load_modal(bridge, load_newton, speed, n, t)
    if np.ndim(t) == 0:
        return float(total)
    return np.broadcast_to(total, np.shape(t)).astype(float)


def single_load_case(bridge: BridgeSpec, load_newton: float, speed: float,
                     dt: float = REFERENCE_DT) -> AnalysisCase:
    return AnalysisCase(bridge, TrainSpec(load_newton, 1), speed, dt)
