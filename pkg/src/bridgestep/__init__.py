"""Moving-load dynamics of simply supported bridges and calibration of
the integration time step ``dt = k L / V``."""

__version__ = "0.1.0"

from .calibration import (
    CalibrationReport,
    StudyGrid,
    StudyResult,
    TimeStepSelection,
    aggregate_k,
    k_from_selection,
    recommended_dt,
    run_study,
    select_proper_dt,
)
from .estimator import ProperTimeStepRegressor
from .forcing import LoadTimeline, arrival_times, axles_on_bridge, modal_force
from .metrics import ImpactRecord, impact_factor, loading_frequency, resonance_speed
from .solver import ResponseHistory, analytic_single_load_midpoint, solve_case, step_sdof
from .static import StaticResult, max_static_sweep, static_midpoint_deflection
from .structural import (
    AnalysisCase,
    BridgeSpec,
    TrainSpec,
    flexural_rigidity_ratio,
    mode_shape,
    natural_frequency,
)

__all__ = [
    "AnalysisCase", "BridgeSpec", "CalibrationReport", "ImpactRecord", "LoadTimeline",
    "ProperTimeStepRegressor", "ResponseHistory", "StaticResult", "StudyGrid", "StudyResult",
    "TimeStepSelection", "TrainSpec", "aggregate_k", "analytic_single_load_midpoint",
    "arrival_times", "axles_on_bridge", "flexural_rigidity_ratio", "impact_factor",
    "k_from_selection", "loading_frequency", "max_static_sweep", "modal_force", "mode_shape",
    "natural_frequency", "recommended_dt", "resonance_speed", "run_study", "select_proper_dt",
    "solve_case", "static_midpoint_deflection", "step_sdof",
]
