import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from bridgestep.exceptions import (
    ConfigurationError,
    DegenerateGridError,
    OracleSingularityError,
    OutOfDomainError,
    UnsupportedDampingError,
)
from bridgestep.metrics import impact_factor
from bridgestep.solver import (
    analytic_single_load_midpoint,
    analytic_single_load_modal,
    integrate_sdof,
    single_load_case,
    solve_case,
    step_sdof,
)
from bridgestep.static import max_static_sweep
from bridgestep.structural import AnalysisCase, BridgeSpec, TrainSpec, natural_frequency

P = 196200.0


def rel_err(a, b):
    return np.max(np.abs(np.asarray(a) - np.asarray(b))) / np.max(np.abs(b))


class TestStepSdof:
    def test_zero_input(self):
        assert step_sdof(3.0, 0.05, (0.0, 0.0), 0.0, 0.0, 0.01) == (0.0, 0.0)

    def test_step_response_undamped(self):
        dt, n = 1e-3, 10_000
        t = np.arange(n + 1) * dt
        q, _ = integrate_sdof(2.0, 0.0, np.full(n + 1, 4.0), dt)
        assert rel_err(q, 1 - np.cos(2 * t)) < 1e-12

    def test_ramp_response_undamped(self):
        dt, n, alpha, w = 1e-3, 10_000, 3.0, 2.0
        t = np.arange(n + 1) * dt
        q, v = integrate_sdof(w, 0.0, alpha * t, dt)
        assert rel_err(q, alpha / w**2 * (t - np.sin(w * t) / w)) < 1e-12
        assert rel_err(v, alpha / w**2 * (1 - np.cos(w * t))) < 1e-12

    def test_step_response_damped(self):
        w, xi, F, dt = 5.0, 0.1, 2.0, 0.02
        t = np.arange(2001) * dt
        wd = w * math.sqrt(1 - xi**2)
        exact = F / w**2 * (1 - np.exp(-xi * w * t) * (np.cos(wd * t) + xi * w / wd * np.sin(wd * t)))
        q, _ = integrate_sdof(w, xi, np.full(t.size, F), dt)
        assert rel_err(q, exact) < 1e-12

    def test_piecewise_linear_any_dt(self):
        # exact for the linear interpolant regardless of step size
        w, xi = 7.0, 0.03
        force = np.array([0.0, 5.0, -2.0, 1.0, 1.0, 0.0])
        dt = 0.37
        q, v = integrate_sdof(w, xi, force, dt)

        def rhs(t, y):
            f = np.interp(t, np.arange(force.size) * dt, force)
            return [y[1], f - 2 * xi * w * y[1] - w * w * y[0]]

        sol = solve_ivp(rhs, (0, dt * (force.size - 1)), [0, 0], t_eval=np.arange(force.size) * dt,
                        rtol=1e-12, atol=1e-14, max_step=dt / 50)
        np.testing.assert_allclose(q, sol.y[0], atol=1e-10 * np.max(np.abs(sol.y[0])))

    def test_scalar_matches_composed(self):
        force = np.sin(np.linspace(0, 3, 40))
        q, v = integrate_sdof(4.0, 0.02, force, 0.05)
        state = (0.0, 0.0)
        for a, b in zip(force[:-1], force[1:]):
            state = step_sdof(4.0, 0.02, state, a, b, 0.05)
        assert state == pytest.approx((q[-1], v[-1]), rel=1e-13)

    def test_overdamped_rejected(self):
        with pytest.raises(UnsupportedDampingError):
            step_sdof(1.0, 1.0, (0, 0), 0, 0, 0.1)


class TestAnalyticOracle:
    def test_oracle_against_fine_explicit_integration(self):
        b = BridgeSpec(15, 8)
        v = 104.17
        t_end = 15 / v
        for n in (1, 3, 5):
            w = natural_frequency(b, n)
            Omega = n * math.pi * v / 15
            amp = 2 * P / (b.mass_per_length_kg_m * 15)
            sol = solve_ivp(lambda t, y: [y[1], amp * math.sin(Omega * t) - w * w * y[0]],
                            (0, t_end), [0, 0], method="DOP853", rtol=1e-12, atol=1e-16,
                            t_eval=np.linspace(0, t_end, 200))
            assert rel_err(analytic_single_load_modal(b, P, v, n, sol.t), sol.y[0]) < 1e-8

    def test_zero_at_start(self):
        assert analytic_single_load_midpoint(BridgeSpec(15, 8), P, 104.17, 0.0) == 0.0

    def test_even_modes_do_not_contribute(self):
        b5 = BridgeSpec(15, 8, mode_count=5)
        t = np.linspace(0, 0.14, 50)
        odd = sum(s * analytic_single_load_modal(b5, P, 104.17, n, t) for n, s in ((1, 1), (3, -1), (5, 1)))
        np.testing.assert_array_equal(analytic_single_load_midpoint(b5, P, 104.17, t), odd)

    def test_resonance_singularity(self):
        b = BridgeSpec(10, 12)
        v_res = 2 * 12 * 10  # n=1: pi v / L = 2 pi f1
        with pytest.raises(OracleSingularityError):
            analytic_single_load_midpoint(b, P, v_res, 0.01)

    def test_domain(self):
        with pytest.raises(OutOfDomainError):
            analytic_single_load_midpoint(BridgeSpec(10, 12), P, 50.0, 0.5)


class TestSolveCase:
    def test_grid(self):
        case = AnalysisCase(BridgeSpec(10, 12), TrainSpec(P, 10, 13.0), 50.0, 0.007)
        h = solve_case(case)
        assert h.times_s[0] == 0.0
        np.testing.assert_allclose(np.diff(h.times_s), 0.007, rtol=1e-9)
        t_end = case.passage_time_s + 2 / 12
        assert t_end <= h.times_s[-1] < t_end + 0.007
        assert h.max_abs_deflection_m == np.max(np.abs(h.midpoint_deflection_m))
        assert h.midpoint_deflection_m[np.argmax(np.abs(h.midpoint_deflection_m))] != 0
        assert h.max_time_s == h.times_s[np.argmax(np.abs(h.midpoint_deflection_m))]
        assert h.key == (10, 13.0, 50.0, 0.007)

    def test_midpoint_reconstruction(self):
        h = solve_case(AnalysisCase(BridgeSpec(20, 6), TrainSpec(P, 3, 13.0), 70.0, 0.002))
        s = np.sin(np.arange(1, 6) * np.pi / 2)
        full = s @ h.modal_coordinates
        odd = s[::2] @ h.modal_coordinates[::2]
        scale = np.max(np.abs(full))
        assert np.max(np.abs(full - h.midpoint_deflection_m)) < 1e-12 * scale
        assert np.max(np.abs(full - odd)) < 1e-12 * scale

    def test_modal_coordinates_match_oracle(self):
        b = BridgeSpec(15, 8)
        v = 104.17
        h = solve_case(single_load_case(b, P, v, 1e-4))
        on = h.times_s * v <= 15.0
        for n in range(1, 6):
            exact = analytic_single_load_modal(b, P, v, n, h.times_s[on])
            assert rel_err(h.modal_coordinates[n - 1][on], exact) < 1e-3

    def test_cross_check_at_mid_passage(self):
        b = BridgeSpec(15, 8)
        v = 104.17
        dt = 1e-4
        h = solve_case(single_load_case(b, P, v, dt))
        t = 15 / (2 * v)
        i = int(round(t / dt))
        exact = analytic_single_load_midpoint(b, P, v, h.times_s[i])
        assert h.midpoint_deflection_m[i] == pytest.approx(exact, rel=1e-3)

    def test_linear_in_load(self, bridge15):
        # stands in for the P = 0 case, which TrainSpec rejects
        a = solve_case(AnalysisCase(bridge15, TrainSpec(1.0, 4, 13.0), 80.0, 0.005))
        b = solve_case(AnalysisCase(bridge15, TrainSpec(1e-300, 4, 13.0), 80.0, 0.005))
        assert np.max(np.abs(b.midpoint_deflection_m)) < 1e-290
        c = solve_case(AnalysisCase(bridge15, TrainSpec(3.0, 4, 13.0), 80.0, 0.005))
        np.testing.assert_allclose(c.midpoint_deflection_m, 3 * a.midpoint_deflection_m, rtol=1e-12,
                                   atol=1e-12 * np.max(np.abs(c.midpoint_deflection_m)))

    def test_self_convergence(self, bridge15, train10):
        st = max_static_sweep(bridge15, train10).max_midpoint_deflection_m
        ifs = [impact_factor(solve_case(AnalysisCase(bridge15, train10, 90.0, 0.01 / 2**k),
                                        keep_modes=False).max_abs_deflection_m, st) for k in range(6)]
        diffs = np.abs(np.diff(ifs))
        assert diffs[-1] < 1e-3
        assert diffs[-1] < diffs[0]
        assert diffs[-1] < diffs[-2]

    def test_energy_conserved_after_passage(self):
        b = BridgeSpec(10, 12, damping_ratio=0.0)
        case = AnalysisCase(b, TrainSpec(P, 3, 13.0), 60.0, 0.001)
        h = solve_case(case)
        after = np.nonzero(h.times_s > case.passage_time_s + 1e-12)[0]
        for n in range(1, 6):
            w = natural_frequency(b, n)
            q = h.modal_coordinates[n - 1][after]
            q0 = q[0]
            # initial velocity from two consecutive free-vibration states
            c, s = math.cos(w * 0.001), math.sin(w * 0.001)
            v0 = (q[1] - c * q0) * w / s
            state = (q0, v0)
            e0 = 0.5 * v0**2 + 0.5 * w**2 * q0**2
            for _ in range(100):
                state = step_sdof(w, 0.0, state, 0.0, 0.0, 0.001)
            e1 = 0.5 * state[1] ** 2 + 0.5 * w**2 * state[0] ** 2
            assert abs(e1 - e0) <= 1e-10 * e0
            assert state[0] == pytest.approx(q[100], rel=1e-9, abs=1e-12 * abs(q).max())

    def test_damped_decay_after_passage(self):
        b = BridgeSpec(15, 8, damping_ratio=0.03)
        case = AnalysisCase(b, TrainSpec(P, 4, 13.0), 70.0, 0.0005)
        h = solve_case(case)
        after = h.times_s > case.passage_time_s
        u = np.abs(h.midpoint_deflection_m[after])
        per = int(round(1 / 8 / 0.0005))
        peaks = [u[i:i + per].max() for i in range(0, u.size - per + 1, per)]
        assert len(peaks) >= 2
        assert all(b2 < b1 for b1, b2 in zip(peaks, peaks[1:]))

    def test_degenerate_grid(self, bridge15, train10):
        with pytest.raises(DegenerateGridError):
            solve_case(AnalysisCase(bridge15, train10, 104.17, 5.0))

    def test_mode_cap(self):
        b = BridgeSpec(15, 8, mode_count=65)
        with pytest.raises(ConfigurationError):
            solve_case(AnalysisCase(b, TrainSpec(P), 50.0, 0.01))
        with pytest.raises(ConfigurationError):
            solve_case(AnalysisCase(BridgeSpec(15, 8, mode_count=9), TrainSpec(P), 50.0, 0.01), max_modes=8)

    def test_deterministic(self, bridge15, train10):
        case = AnalysisCase(bridge15, train10, 100.0, 0.0025)
        a, b = solve_case(case), solve_case(case)
        np.testing.assert_array_equal(a.midpoint_deflection_m, b.midpoint_deflection_m)
