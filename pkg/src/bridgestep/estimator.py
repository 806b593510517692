"""scikit-learn compatible wrapper around the ``dt = k L / V`` rule."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

_STATISTICS = {"min": np.min, "mean": np.mean, "median": np.median}


class ProperTimeStepRegressor(RegressorMixin, BaseEstimator):
    """Learn the coefficient k of ``dt = k * span / speed``.

    ``X`` has two columns, span (m) and speed (m/s); ``y`` is the proper
    time step chosen for each condition. ``statistic='min'`` gives the
    conservative coefficient.

    Parameters
    ----------
    statistic : {'min', 'mean', 'median'}
        How per-condition k values are reduced to one coefficient.
    """

    def __init__(self, statistic: str = "min"):
        self.statistic = statistic

    def fit(self, X, y):
        if self.statistic not in _STATISTICS:
            raise ValueError(f"statistic must be one of {sorted(_STATISTICS)}, got {self.statistic!r}")
        X, y = check_X_y(X, y, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"X must have 2 columns (span, speed), got {X.shape[1]}")
        if np.any(X <= 0) or np.any(y <= 0):
            raise ValueError("spans, speeds and time steps must be positive")
        k = y * X[:, 1] / X[:, 0]
        self.k_values_ = k
        self.k_ = float(_STATISTICS[self.statistic](k))
        self.k_std_ = float(np.std(k))
        self.n_features_in_ = 2
        return self

    def predict(self, X):
        check_is_fitted(self, "k_")
        X = check_array(X, dtype=float)
        if X.shape[1] != 2:
            raise ValueError(f"X must have 2 columns (span, speed), got {X.shape[1]}")
        return self.k_ * X[:, 0] / X[:, 1]

    @classmethod
    def from_selections(cls, selections, statistic: str = "min"):
        X = np.array([[s.span_m, s.speed_m_s] for s in selections])
        y = np.array([s.chosen_dt_s for s in selections])
        return cls(statistic=statistic).fit(X, y)
