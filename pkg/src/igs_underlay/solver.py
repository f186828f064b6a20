"""Optimal secondary signal design under primary rate constraints.

Two schemes are provided:

* proper signaling (``solve_pgs``): only the power is adjusted and the
  optimum is the smallest of the two per-stream power bounds and the budget;
* improper signaling (``solve_igs``): power and circularity coefficient are
  designed jointly. The feasible power is the pointwise minimum of three
  curves over ``cx`` (the budget and one increasing bound per primary
  stream). The curves cross at most three times, which splits ``[0, 1]``
  into at most four intervals; on each interval the secondary rate is
  monotone along the active curve, so the optimum sits on an interval end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .model import (
    IDLE,
    RateReport,
    ScenarioInstance,
    SignalDesign,
    beta,
    delta,
    evaluate,
    i_max,
    psi_margin,
    receiver_of,
    su_rate,
)

__all__ = [
    "BUDGET",
    "CROSS",
    "BreakpointSet",
    "SubproblemCandidate",
    "Solution",
    "working_condition",
    "pgs_bound",
    "igs_power_bound",
    "budget_intersection",
    "cross_intersection",
    "breakpoints",
    "monotonicity_condition",
    "solve_subproblem",
    "solve_pgs",
    "solve_igs",
]

# cx closer than this to 1 is treated as the maximally improper limit
CX_EPS = 1e-9
MERGE_TOL = 1e-9
IDENTICAL_TOL = 1e-9

BUDGET = "budget"
CROSS = "cross"
REGIMES = ("budget", "constraint-1", "constraint-2")


@dataclass(frozen=True)
class BreakpointSet:
    """Ordered distinct curve intersections inside ``(0, 1)``.

    ``sources`` tags each point with where it came from: ``"budget-1"`` or
    ``"budget-2"`` for a stream bound meeting the budget, ``"cross"`` for
    the two stream bounds meeting each other.
    """

    points: Tuple[float, ...] = ()
    sources: Tuple[str, ...] = ()

    @property
    def k(self) -> int:
        return len(self.points)

    def edges(self) -> Tuple[float, ...]:
        return (0.0, *self.points, 1.0)

    def intervals(self) -> List[Tuple[float, float]]:
        e = self.edges()
        return list(zip(e[:-1], e[1:]))


@dataclass(frozen=True)
class SubproblemCandidate:
    z: int
    ps: float
    cx: float
    rs: float
    regime: str


@dataclass(frozen=True)
class Solution:
    design: SignalDesign
    rates: RateReport
    scheme: str
    candidates: Tuple[SubproblemCandidate, ...] = ()
    breakpoints: BreakpointSet = field(default_factory=BreakpointSet)
    notes: Tuple[str, ...] = ()

    @property
    def idle(self) -> bool:
        return self.design.idle


def _idle(scenario: ScenarioInstance, notes=()) -> Solution:
    return Solution(IDLE, evaluate(IDLE, scenario), "idle", notes=tuple(notes))


def working_condition(scenario: ScenarioInstance, i: int) -> bool:
    """True when stream i tolerates more interference than its own RSI adds."""
    j = receiver_of(i)
    return i_max(scenario, i) > scenario.p[j - 1] * scenario.upsilon_p[j - 1]


def pgs_bound(scenario: ScenarioInstance, i: int) -> float:
    """Largest proper-signaling power keeping stream i at its target rate.

    Returns ``inf`` when the secondary does not reach the receiver of i.
    """
    j = receiver_of(i)
    gain = scenario.i_s[j - 1]
    if gain == 0.0:
        return math.inf
    return max(beta(scenario, j) * psi_margin(scenario, i, 1, 1) / gain, 0.0)


def _curve(scenario: ScenarioInstance, i: int):
    """Parameters ``(beta_j, I_s_j, Psi(1,2), Psi(2,2))`` of the bound for stream i."""
    j = receiver_of(i)
    return (
        beta(scenario, j),
        scenario.i_s[j - 1],
        psi_margin(scenario, i, 1, 2),
        psi_margin(scenario, i, 2, 2),
    )


def igs_power_bound(scenario: ScenarioInstance, i: int, cx: float) -> float:
    """Largest power with circularity ``cx`` keeping stream i at its target.

    This is the positive root of the quadratic constraint in ``ps``. Near
    ``cx = 1`` the quadratic degenerates to a linear inequality: the bound
    is unbounded (``inf``) when the first-order margin is non-negative and
    finite otherwise.
    """
    b, gain, m12, m22 = _curve(scenario, i)
    if gain == 0.0:
        return math.inf
    if cx >= 1.0 - CX_EPS:
        if m12 >= 0.0:
            return math.inf
        return max(-b * m22 / (2.0 * gain * m12), 0.0)
    u = (1.0 - cx) * (1.0 + cx)
    rad = m12 * m12 + u * m22
    if rad < 0.0:
        return 0.0
    root = math.sqrt(rad)
    if m12 >= 0.0:
        value = b * (root + m12) / (gain * u)
    else:
        # rationalized form; no cancellation when m12 < 0
        value = b * m22 / (gain * (root - m12))
    return max(value, 0.0)


def budget_intersection(scenario: ScenarioInstance, i: int) -> Optional[float]:
    """Circularity at which the bound of stream i reaches the power budget."""
    cap = scenario.ps_max
    if not (igs_power_bound(scenario, i, 0.0) < cap < igs_power_bound(scenario, i, 1.0)):
        return None
    b, gain, m12, m22 = _curve(scenario, i)
    rad = 1.0 - (b * b * m22 + 2.0 * cap * b * gain * m12) / (cap * gain) ** 2
    if not 0.0 < rad < 1.0:
        return None
    return math.sqrt(rad)


def _endpoint_order(scenario: ScenarioInstance) -> Tuple[int, int]:
    """Sign of ``p1 - p2`` at ``cx = 0`` and at ``cx = 1``.

    When both bounds are unbounded at ``cx = 1`` they grow like
    ``2 beta_j Psi(1,2) / (I_s_j (1 - cx^2))`` and the leading coefficients
    decide the order.
    """

    def sign(x: float) -> int:
        return (x > 0.0) - (x < 0.0)

    p1_0, p2_0 = igs_power_bound(scenario, 1, 0.0), igs_power_bound(scenario, 2, 0.0)
    p1_1, p2_1 = igs_power_bound(scenario, 1, 1.0), igs_power_bound(scenario, 2, 1.0)
    if math.isinf(p1_1) and math.isinf(p2_1):
        (b1, g1, a1, _), (b2, g2, a2, _) = _curve(scenario, 1), _curve(scenario, 2)
        at_one = sign(b1 * a1 / g1 - b2 * a2 / g2)
    elif math.isinf(p1_1):
        at_one = 1
    elif math.isinf(p2_1):
        at_one = -1
    else:
        at_one = sign(p1_1 - p2_1)
    return sign(p1_0 - p2_0), at_one


def _identical_curves(scenario: ScenarioInstance) -> bool:
    (b1, g1, a1, c1), (b2, g2, a2, c2) = _curve(scenario, 1), _curve(scenario, 2)
    return (
        math.isclose(b1 / g1, b2 / g2, rel_tol=IDENTICAL_TOL, abs_tol=IDENTICAL_TOL)
        and math.isclose(a1, a2, rel_tol=IDENTICAL_TOL, abs_tol=IDENTICAL_TOL)
        and math.isclose(c1, c2, rel_tol=IDENTICAL_TOL, abs_tol=IDENTICAL_TOL)
    )


def cross_intersection(scenario: ScenarioInstance) -> Optional[float]:
    """Circularity at which the two stream bounds cross, if they do."""
    if scenario.i_s[0] == 0.0 or scenario.i_s[1] == 0.0:
        return None
    if _identical_curves(scenario):
        return None
    at_zero, at_one = _endpoint_order(scenario)
    if at_zero == 0 or at_one == 0 or at_zero == at_one:
        return None

    beta1, beta2 = beta(scenario, 1), beta(scenario, 2)
    is1, is2 = scenario.i_s
    a1, c1 = psi_margin(scenario, 1, 1, 2), psi_margin(scenario, 1, 2, 2)
    a2, c2 = psi_margin(scenario, 2, 1, 2), psi_margin(scenario, 2, 2, 2)
    den = (beta2**2 * is1**2 * c1 - beta1**2 * is2**2 * c2) ** 2
    if den == 0.0:
        return None
    num = (
        4.0 * beta1 * beta2 * is1 * is2
        * (beta1 * is2 * a2 - beta2 * is1 * a1)
        * (beta2 * is1 * a2 * c1 - beta1 * is2 * a1 * c2)
    )
    rad = 1.0 - num / den
    if not 0.0 < rad < 1.0:
        return None
    return math.sqrt(rad)


def breakpoints(scenario: ScenarioInstance) -> BreakpointSet:
    found = []
    for i in (1, 2):
        r = budget_intersection(scenario, i)
        if r is not None:
            found.append((r, f"{BUDGET}-{i}"))
    r = cross_intersection(scenario)
    if r is not None:
        found.append((r, CROSS))
    found.sort()

    points: List[float] = []
    sources: List[str] = []
    for r, src in found:
        if points and r - points[-1] <= MERGE_TOL:
            sources[-1] = f"{sources[-1]}+{src}"
            continue
        points.append(r)
        sources.append(src)
    return BreakpointSet(tuple(points), tuple(sources))


def monotonicity_condition(scenario: ScenarioInstance, m: int) -> bool:
    """Whether the secondary rate increases with ``cx`` along the bound of stream m."""
    j = receiver_of(m)
    gain = scenario.i_s[j - 1]
    if gain == 0.0:
        return True
    lhs = beta(scenario, j) * scenario.gamma_s * psi_margin(scenario, m, 1, 2) / (gain * delta(scenario))
    return lhs > -1.0


def _active_curve(scenario: ScenarioInstance, cx: float) -> Tuple[int, bool]:
    """Index of the smallest of (budget, bound 1, bound 2) at ``cx``.

    Ties go to the lower index. The flag reports whether a tie occurred.
    """
    values = (scenario.ps_max, igs_power_bound(scenario, 1, cx), igs_power_bound(scenario, 2, cx))
    best = 0
    for idx in (1, 2):
        if values[idx] < values[best]:
            best = idx
    tie = sum(v == values[best] for v in values) > 1
    return best, tie


def solve_subproblem(scenario: ScenarioInstance, a: float, b: float, z: int = 1) -> SubproblemCandidate:
    """Best design with ``a <= cx <= b``, assuming one curve is active throughout."""
    if not 0.0 <= a < b <= 1.0:
        raise ValueError(f"invalid interval [{a}, {b}]")
    m, _ = _active_curve(scenario, 0.5 * (a + b))
    if m == 0:
        ps, cx = scenario.ps_max, a
    else:
        cx = b if monotonicity_condition(scenario, m) else a
        ps = min(igs_power_bound(scenario, m, cx), scenario.ps_max)
    return SubproblemCandidate(z, ps, cx, float(su_rate(scenario, ps, cx)), REGIMES[m])


def solve_pgs(scenario: ScenarioInstance) -> Solution:
    """Optimal proper-signaling power: the tightest of the two bounds and the budget."""
    if not (working_condition(scenario, 1) and working_condition(scenario, 2)):
        return _idle(scenario, ["working condition violated"])
    ps = min(pgs_bound(scenario, 1), pgs_bound(scenario, 2), scenario.ps_max)
    design = SignalDesign(ps, 0.0)
    return Solution(design, evaluate(design, scenario), "PGS")


def solve_igs(scenario: ScenarioInstance) -> Solution:
    """Joint power and circularity design maximizing the secondary rate."""
    if not (working_condition(scenario, 1) and working_condition(scenario, 2)):
        return _idle(scenario, ["working condition violated"])

    bps = breakpoints(scenario)
    notes = []
    candidates = []
    for z, (a, b) in enumerate(bps.intervals(), start=1):
        if _active_curve(scenario, 0.5 * (a + b))[1]:
            notes.append(f"tie between curves at midpoint of interval {z}")
        candidates.append(solve_subproblem(scenario, a, b, z))

    best = candidates[0]
    for cand in candidates[1:]:
        if cand.rs > best.rs or (cand.rs == best.rs and cand.cx < best.cx):
            best = cand
    design = SignalDesign(best.ps, best.cx)
    return Solution(design, evaluate(design, scenario), "IGS", tuple(candidates), bps, tuple(notes))
