"""Brute-force verification of the closed-form designs.

The oracle evaluates the secondary rate on a uniform grid over
``[0, ps_max] x [0, 1]``, keeps the grid points satisfying both primary
rate constraints and returns the best one. It shares only the rate
expressions with the solver, none of its bounds or breakpoints.

Grid tolerance
--------------
A grid point can be at most half a cell diagonal away from the continuous
optimum, so the grid optimum trails it by at most ``L * diag`` where ``L``
bounds the rate gradient. With coordinates normalized to the unit square,
``diag = hypot(1 / (n_p - 1), 1 / (n_c - 1))`` and ``L`` is taken as
``REFERENCE_LIPSCHITZ = 2 sqrt(2)`` bits/s/Hz per unit length, giving
0.02 bits/s/Hz at 201 x 201. The check is one-sided: the solver fails only
when the grid beats it by more than this.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .model import BOUND_TOL, IDLE, ScenarioInstance, ScenarioStatistics, SignalDesign, pu_rate, su_rate
from .solver import Solution, solve_igs

__all__ = [
    "GridSpec",
    "GridResult",
    "ComparisonReport",
    "REPORT_FIELDS",
    "feasible",
    "grid_search",
    "grid_tolerance",
    "compare",
    "write_reports",
    "random_scenarios",
]

REFERENCE_LIPSCHITZ = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid with ``n_p`` powers and ``n_c`` circularity values.

    ``n_c == 1`` restricts the search to proper signaling (``cx = 0``).
    """

    n_p: int = 201
    n_c: int = 201

    def __post_init__(self):
        if self.n_p < 2 or self.n_c < 1:
            raise ValueError("grid needs n_p >= 2 and n_c >= 1")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """Parse ``"201x201"`` style dimensions."""
        try:
            n_p, n_c = (int(v) for v in text.lower().split("x"))
        except ValueError:
            raise ValueError(f"grid must look like NPxNC, got {text!r}") from None
        return cls(n_p, n_c)

    def axes(self, ps_max: float):
        ps = np.linspace(0.0, ps_max, self.n_p)
        cx = np.linspace(0.0, 1.0, self.n_c) if self.n_c > 1 else np.zeros(1)
        return ps, cx


@dataclass(frozen=True)
class GridResult:
    design: SignalDesign
    rate: float
    n_feasible: int


@dataclass(frozen=True)
class ComparisonReport:
    scenario_id: str
    alg_ps: float
    alg_cx: float
    alg_rs: float
    grid_ps: float
    grid_cx: float
    grid_rs: float
    gap: float
    alg_feasible: bool
    grid_feasible_points: int
    tolerance: float
    passed: bool


REPORT_FIELDS = tuple(ComparisonReport.__dataclass_fields__)


def feasible(design: SignalDesign, scenario: ScenarioInstance, tol: float = BOUND_TOL) -> bool:
    """Whether ``design`` is an admissible transmitting design.

    The idle design is not feasible here since the optimization requires
    a strictly positive power; callers treat idling separately.
    """
    ps, cx = design.ps, design.cx
    if not (0.0 < ps <= scenario.ps_max + 1e-12 and 0.0 <= cx <= 1.0):
        return False
    return all(pu_rate(scenario, i, ps, cx) >= scenario.r0[i - 1] - tol for i in (1, 2))


def grid_search(scenario: ScenarioInstance, grid: GridSpec = GridSpec()) -> GridResult:
    """Best feasible grid point; ties go to smaller ``cx`` then smaller ``ps``."""
    ps_axis, cx_axis = grid.axes(scenario.ps_max)
    # rows index cx, columns index ps, so C-order argmax realizes the tie rule
    cx, ps = np.meshgrid(cx_axis, ps_axis, indexing="ij")
    with np.errstate(divide="ignore", invalid="ignore"):
        ok = ps > 0.0
        for i in (1, 2):
            ok &= pu_rate(scenario, i, ps, cx) >= scenario.r0[i - 1] - BOUND_TOL
        rates = np.where(ok, su_rate(scenario, ps, cx), -np.inf)
    n_ok = int(ok.sum())
    if n_ok == 0:
        return GridResult(IDLE, 0.0, 0)
    flat = int(np.argmax(rates))
    r, c = np.unravel_index(flat, rates.shape)
    return GridResult(SignalDesign(float(ps[r, c]), float(cx[r, c])), float(rates[r, c]), n_ok)


def grid_tolerance(grid: GridSpec) -> float:
    """Allowed shortfall of the grid optimum; 0.02 bits/s/Hz at 201 x 201."""
    h_c = 1.0 / (grid.n_c - 1) if grid.n_c > 1 else 0.0
    return REFERENCE_LIPSCHITZ * math.hypot(1.0 / (grid.n_p - 1), h_c)


def compare(
    scenario: ScenarioInstance,
    grid: GridSpec = GridSpec(),
    *,
    scenario_id: str = "0",
    tolerance: Optional[float] = None,
    solver: Callable[[ScenarioInstance], Solution] = solve_igs,
) -> ComparisonReport:
    """Run ``solver`` and the grid oracle on one scenario and compare rates."""
    tol = grid_tolerance(grid) if tolerance is None else tolerance
    sol = solver(scenario)
    found = grid_search(scenario, grid)
    alg = sol.design
    alg_rs = float(su_rate(scenario, alg.ps, alg.cx))
    alg_ok = alg.idle or feasible(alg, scenario)
    gap = alg_rs - found.rate
    return ComparisonReport(
        scenario_id=scenario_id,
        alg_ps=alg.ps,
        alg_cx=alg.cx,
        alg_rs=alg_rs,
        grid_ps=found.design.ps,
        grid_cx=found.design.cx,
        grid_rs=found.rate,
        gap=gap,
        alg_feasible=alg_ok,
        grid_feasible_points=found.n_feasible,
        tolerance=tol,
        passed=bool(alg_ok and gap >= -tol),
    )


def write_reports(reports, stream) -> None:
    writer = csv.DictWriter(stream, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in asdict(rep).items()})


def random_scenarios(
    n: int,
    seed: int,
    mean_range_db=(-10.0, 25.0),
    rates=(0.5, 1.0, 2.0),
    rho: float = 0.95,
):
    """Yield ``n`` test instances.

    Each one draws every mean CNR uniformly (in dB) from ``mean_range_db``
    and a common target rate from ``rates``, then one fading realization
    around those means. Powers and budget stay at 1 W.
    """
    from .montecarlo import sample_scenario

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    lo, hi = mean_range_db
    for _ in range(n):
        m = rng.uniform(lo, hi, size=9)
        r0 = float(rng.choice(rates))
        stats = ScenarioStatistics(
            p=1.0,
            r0=r0,
            gamma_p_db=(m[0], m[1]),
            gamma_s_db=m[2],
            i_s_db=(m[3], m[4]),
            i_p_db=(m[5], m[6]),
            upsilon_p_db=(m[7], m[8]),
            ps_max=1.0,
            pu_direct_correlation=rho,
        )
        yield sample_scenario(stats, rng)
