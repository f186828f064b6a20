"""Monte Carlo sweeps over Rayleigh-fading realizations.

Every CNR is the mean value times ``|u|^2`` with ``u`` a unit-variance
circular complex Gaussian, so it is exponentially distributed. The two
primary direct links are correlated through
``u_21 = rho u_12 + sqrt(1 - rho^2) w``.

Sweeps use common random numbers: the unit gains are drawn once from the
seed and reused, rescaled by the mean values, at every (family, axis)
point and for both signaling schemes. All draws happen before any solving,
so the worker count never changes the numbers.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, TextIO, Tuple

import numpy as np

from .model import ScenarioInstance, ScenarioStatistics
from .solver import solve_igs, solve_pgs

__all__ = [
    "GAIN_COLUMNS",
    "SWEEP_PARAMETERS",
    "SweepSpec",
    "SweepRow",
    "SweepResult",
    "complex_gains",
    "unit_gains",
    "mean_cnrs",
    "scenario_from_gains",
    "sample_scenario",
    "solve_cell",
    "run_sweep",
    "example_spec",
]

log = logging.getLogger(__name__)

GAIN_COLUMNS = (
    "gamma_p1", "gamma_p2", "gamma_s",
    "i_s1", "i_s2", "i_p1", "i_p2",
    "upsilon_p1", "upsilon_p2",
)
SWEEP_PARAMETERS = ("gamma_s_db", "gamma_p_db", "i_s_db", "i_p_db", "upsilon_p_db", "r0", "ps_max", "p")
CSV_FIELDS = ("family_value", "axis_value", "mean_rs_pgs", "mean_rs_igs", "mean_cx", "idle_frac", "trials", "seed")

DOMINANCE_TOL = 1e-9


def complex_gains(n: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """``(n, 9)`` unit-variance circular complex Gaussian gains, columns as
    in :data:`GAIN_COLUMNS`, with the two primary direct links correlated."""
    z = (rng.standard_normal((n, len(GAIN_COLUMNS))) + 1j * rng.standard_normal((n, len(GAIN_COLUMNS)))) / math.sqrt(2.0)
    z[:, 1] = rho * z[:, 0] + math.sqrt(1.0 - rho * rho) * z[:, 1]
    return z


def unit_gains(n: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Unit-mean exponential CNR multipliers."""
    return np.abs(complex_gains(n, rho, rng)) ** 2


def mean_cnrs(stats: ScenarioStatistics) -> np.ndarray:
    """Linear mean CNRs in :data:`GAIN_COLUMNS` order."""
    db = np.array([
        *stats.gamma_p_db, stats.gamma_s_db, *stats.i_s_db, *stats.i_p_db, *stats.upsilon_p_db,
    ])
    return 10.0 ** (db / 10.0)


def scenario_from_gains(stats: ScenarioStatistics, cnr: Sequence[float]) -> ScenarioInstance:
    """Instance from one row of linear CNRs in :data:`GAIN_COLUMNS` order."""
    return ScenarioInstance(
        p=stats.p,
        r0=stats.r0,
        gamma_p=(cnr[0], cnr[1]),
        gamma_s=cnr[2],
        i_s=(cnr[3], cnr[4]),
        i_p=(cnr[5], cnr[6]),
        upsilon_p=(cnr[7], cnr[8]),
        ps_max=stats.ps_max,
    )


def sample_scenario(stats: ScenarioStatistics, rng: np.random.Generator) -> ScenarioInstance:
    """Draw one fading realization."""
    g = unit_gains(1, stats.pu_direct_correlation, rng)[0]
    return scenario_from_gains(stats, (g * mean_cnrs(stats)).tolist())


def _with_parameter(stats: ScenarioStatistics, name: str, value: float) -> ScenarioStatistics:
    if name not in SWEEP_PARAMETERS:
        raise ValueError(f"cannot sweep {name!r}; choose from {SWEEP_PARAMETERS}")
    return stats.replace(**{name: value})


@dataclass(frozen=True)
class SweepSpec:
    """A family of curves: ``axis`` varies along each curve, ``family`` across them.

    Parameter names are fields of :class:`ScenarioStatistics`; pair-valued
    ones are set to the same value at both nodes.
    """

    base: ScenarioStatistics
    axis: str
    axis_values: Tuple[float, ...]
    family: str
    family_values: Tuple[float, ...]
    trials: int = 10_000
    seed: int = 1

    def __post_init__(self):
        for name in (self.axis, self.family):
            if name not in SWEEP_PARAMETERS:
                raise ValueError(f"cannot sweep {name!r}; choose from {SWEEP_PARAMETERS}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.axis_values or not self.family_values:
            raise ValueError("axis and family need at least one value each")
        if not all(math.isfinite(v) for v in self.axis_values):
            raise ValueError("axis values must be finite")
        if list(self.axis_values) != sorted(self.axis_values):
            raise ValueError("axis values must be sorted")

    def point(self, family_value: float, axis_value: float) -> ScenarioStatistics:
        stats = _with_parameter(self.base, self.family, family_value)
        return _with_parameter(stats, self.axis, axis_value)


@dataclass(frozen=True)
class SweepRow:
    family_value: float
    axis_value: float
    mean_rs_pgs: float
    mean_rs_igs: float
    mean_cx: float
    idle_frac: float
    trials: int
    seed: int


@dataclass(frozen=True)
class SweepResult:
    rows: Tuple[SweepRow, ...]
    axis: str = ""
    family: str = ""
    metadata: Dict[str, float] = field(default_factory=dict, compare=False)

    def curve(self, family_value: float) -> List[SweepRow]:
        return [r for r in self.rows if r.family_value == family_value]

    def row(self, family_value: float, axis_value: float) -> SweepRow:
        for r in self.rows:
            if r.family_value == family_value and r.axis_value == axis_value:
                return r
        raise KeyError((family_value, axis_value))

    def to_csv(self, stream: TextIO) -> None:
        """Write rows with full float precision (``repr``), one header line."""
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for r in self.rows:
            writer.writerow([repr(getattr(r, f)) if isinstance(getattr(r, f), float) else getattr(r, f) for f in CSV_FIELDS])

    @classmethod
    def from_csv(cls, stream: TextIO, axis: str = "", family: str = "") -> "SweepResult":
        reader = csv.DictReader(stream)
        if tuple(reader.fieldnames or ()) != CSV_FIELDS:
            raise ValueError(f"unexpected columns {reader.fieldnames}")
        rows = []
        for rec in reader:
            rows.append(SweepRow(
                *(float(rec[f]) for f in CSV_FIELDS[:6]),
                trials=int(rec["trials"]),
                seed=int(rec["seed"]),
            ))
        return cls(tuple(rows), axis, family)


def solve_cell(stats: ScenarioStatistics, gains: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Solve every realization of one sweep point.

    Returns per-trial arrays ``(rs_pgs, rs_igs, cx_igs, idle)``.
    """
    cnr = (gains * mean_cnrs(stats)).tolist()
    n = len(cnr)
    rs_pgs = np.empty(n)
    rs_igs = np.empty(n)
    cx = np.empty(n)
    idle = np.zeros(n, dtype=bool)
    for t, row in enumerate(cnr):
        scenario = scenario_from_gains(stats, row)
        igs = solve_igs(scenario)
        if igs.idle:
            rs_pgs[t] = rs_igs[t] = cx[t] = 0.0
            idle[t] = True
            continue
        rs_pgs[t] = solve_pgs(scenario).rates.r_s
        rs_igs[t] = igs.rates.r_s
        cx[t] = igs.design.cx
    return rs_pgs, rs_igs, cx, idle


def _summarize(spec: SweepSpec, fv: float, av: float, gains: np.ndarray) -> SweepRow:
    rs_pgs, rs_igs, cx, idle = solve_cell(spec.point(fv, av), gains)
    worst = float(np.min(rs_igs - rs_pgs))
    if worst < -DOMINANCE_TOL:
        raise RuntimeError(
            f"improper design below proper design by {-worst:.3g} at {spec.family}={fv}, {spec.axis}={av}"
        )
    return SweepRow(
        family_value=float(fv),
        axis_value=float(av),
        mean_rs_pgs=float(np.mean(rs_pgs)),
        mean_rs_igs=float(np.mean(rs_igs)),
        mean_cx=float(np.mean(cx)),
        idle_frac=float(np.mean(idle)),
        trials=spec.trials,
        seed=spec.seed,
    )


def run_sweep(spec: SweepSpec, n_jobs: Optional[int] = 1) -> SweepResult:
    """Average both schemes over ``spec.trials`` realizations at every point.

    ``n_jobs`` is forwarded to :class:`joblib.Parallel`; the result does
    not depend on it.
    """
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))
    z = complex_gains(spec.trials, spec.base.pu_direct_correlation, rng)
    gains = np.abs(z) ** 2
    envelope_corr = float(np.corrcoef(gains[:, 0], gains[:, 1])[0, 1]) if spec.trials > 1 else float("nan")

    points = [(fv, av) for fv in spec.family_values for av in spec.axis_values]
    log.info("sweep %s x %s: %d points, %d trials", spec.family, spec.axis, len(points), spec.trials)
    if n_jobs in (None, 1):
        rows = [_summarize(spec, fv, av, gains) for fv, av in points]
    else:
        from joblib import Parallel, delayed

        rows = Parallel(n_jobs=n_jobs)(delayed(_summarize)(spec, fv, av, gains) for fv, av in points)
    meta = {"seed": spec.seed, "trials": spec.trials, "envelope_correlation": envelope_corr}
    return SweepResult(tuple(rows), spec.axis, spec.family, meta)


def _grid(start: float, stop: float, step: float) -> Tuple[float, ...]:
    return tuple(float(v) for v in np.arange(start, stop + step / 2, step))


def example_spec(number: int, base: ScenarioStatistics, trials: int = 10_000, seed: int = 1) -> SweepSpec:
    """Built-in sweeps.

    1. secondary direct mean CNR 0..30 dB, curves for primary direct mean
       CNR 10, 15, 20 dB;
    2. secondary interference mean CNR -10..30 dB (both nodes), curves for
       primary target rates 0.5, 1, 2 bits/s/Hz;
    3. RSI mean CNR 0..40 dB (both nodes), curves for budgets 1, 5, 10 W.
    """
    if number == 1:
        return SweepSpec(base, "gamma_s_db", _grid(0, 30, 5), "gamma_p_db", (10.0, 15.0, 20.0), trials, seed)
    if number == 2:
        return SweepSpec(base, "i_s_db", _grid(-10, 30, 5), "r0", (0.5, 1.0, 2.0), trials, seed)
    if number == 3:
        return SweepSpec(base, "upsilon_p_db", _grid(0, 40, 5), "ps_max", (1.0, 5.0, 10.0), trials, seed)
    raise ValueError(f"unknown example {number}; choose 1, 2 or 3")
