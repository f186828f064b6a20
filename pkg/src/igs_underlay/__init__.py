"""Secondary signal design for underlay spectrum sharing with a full-duplex
primary pair, under proper and improper Gaussian signaling."""

from .model import (
    IDLE,
    DegenerateTargetError,
    RateReport,
    ScenarioInstance,
    ScenarioStatistics,
    SignalDesign,
    db_to_linear,
    evaluate,
    pu_rate,
    su_rate,
)
from .solver import Solution, breakpoints, solve_igs, solve_pgs

__version__ = "0.1.0"

__all__ = [
    "IDLE",
    "DegenerateTargetError",
    "RateReport",
    "ScenarioInstance",
    "ScenarioStatistics",
    "SignalDesign",
    "Solution",
    "breakpoints",
    "db_to_linear",
    "evaluate",
    "pu_rate",
    "solve_igs",
    "solve_pgs",
    "su_rate",
]
