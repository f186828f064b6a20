"""scikit-learn wrapper that maps scenario tables to optimal designs.

Each row of ``X`` is one channel realization with the columns listed in
:data:`FEATURE_NAMES` (linear scale). The transformer is stateless, so
``fit`` only validates the input shape; it exists so the design step can
sit inside a :class:`~sklearn.pipeline.Pipeline` or a
:class:`~sklearn.compose.ColumnTransformer`.
"""

from __future__ import annotations

from typing import Iterable, List

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted, validate_data

from .model import ScenarioInstance
from .solver import solve_igs, solve_pgs

__all__ = ["FEATURE_NAMES", "OUTPUT_NAMES", "SignalDesigner", "scenarios_to_array", "array_to_scenarios"]

FEATURE_NAMES = (
    "p1", "p2", "r0_1", "r0_2",
    "gamma_p1", "gamma_p2", "gamma_s",
    "i_s1", "i_s2", "i_p1", "i_p2",
    "upsilon_p1", "upsilon_p2", "ps_max",
)
OUTPUT_NAMES = ("ps", "cx", "rs")

_SOLVERS = {"igs": solve_igs, "pgs": solve_pgs}


def scenarios_to_array(scenarios: Iterable[ScenarioInstance]) -> np.ndarray:
    rows = [
        (*s.p, *s.r0, *s.gamma_p, s.gamma_s, *s.i_s, *s.i_p, *s.upsilon_p, s.ps_max)
        for s in scenarios
    ]
    return np.asarray(rows, dtype=float).reshape(-1, len(FEATURE_NAMES))


def array_to_scenarios(X: np.ndarray) -> List[ScenarioInstance]:
    out = []
    for row in np.asarray(X, dtype=float):
        out.append(ScenarioInstance(
            p=row[0:2], r0=row[2:4], gamma_p=row[4:6], gamma_s=row[6],
            i_s=row[7:9], i_p=row[9:11], upsilon_p=row[11:13], ps_max=row[13],
        ))
    return out


class SignalDesigner(TransformerMixin, BaseEstimator):
    """Solve the secondary design problem for every row of a scenario table.

    Parameters
    ----------
    scheme : {"igs", "pgs"}, default="igs"
        Improper (joint power and circularity) or proper (power only)
        signaling.

    Examples
    --------
    >>> from igs_underlay.config import canonical_scenario
    >>> X = scenarios_to_array([canonical_scenario()])
    >>> SignalDesigner().fit_transform(X).round(4)
    array([[1.    , 0.9822, 1.4399]])
    """

    def __init__(self, scheme: str = "igs"):
        self.scheme = scheme

    def fit(self, X, y=None):
        if self.scheme not in _SOLVERS:
            raise ValueError(f"scheme must be one of {sorted(_SOLVERS)}, got {self.scheme!r}")
        X = validate_data(self, X, dtype=np.float64, ensure_all_finite=True)
        if X.shape[1] != len(FEATURE_NAMES):
            raise ValueError(f"expected {len(FEATURE_NAMES)} columns {FEATURE_NAMES}, got {X.shape[1]}")
        return self

    def transform(self, X):
        """Return an ``(n, 3)`` array of ``ps``, ``cx`` and the secondary rate."""
        check_is_fitted(self, "n_features_in_")
        X = validate_data(self, X, dtype=np.float64, ensure_all_finite=True, reset=False)
        solve = _SOLVERS[self.scheme]
        out = np.empty((X.shape[0], len(OUTPUT_NAMES)))
        for k, scenario in enumerate(array_to_scenarios(X)):
            sol = solve(scenario)
            out[k] = (sol.design.ps, sol.design.cx, sol.rates.r_s)
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "n_features_in_")
        return np.asarray(OUTPUT_NAMES, dtype=object)

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = True
        return tags
