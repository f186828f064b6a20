"""Rate and threshold expressions for a half-duplex secondary pair sharing
the band of a full-duplex primary pair.

Every quantity is expressed through channel-to-noise ratios (CNRs), so the
noise variance never appears explicitly. Primary nodes are indexed 1 and 2;
the stream transmitted by node ``i`` is received by node ``j = 3 - i``.

The rate functions accept either Python floats or numpy arrays for the
secondary power ``ps`` and circularity coefficient ``cx`` and broadcast
in the usual way.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

__all__ = [
    "DegenerateTargetError",
    "ScenarioInstance",
    "ScenarioStatistics",
    "SignalDesign",
    "RateReport",
    "IDLE",
    "db_to_linear",
    "linear_to_db",
    "receiver_of",
    "beta",
    "delta",
    "gamma_target",
    "phi_required",
    "psi_margin",
    "circularity_coefficients",
    "pu_rate",
    "pu_rate_composed",
    "pu_rate_proper",
    "su_rate",
    "su_rate_proper",
    "i_max",
    "evaluate",
]

Pair = Tuple[float, float]

# absolute tolerance for comparisons against bounds
BOUND_TOL = 1e-9

_LN2 = math.log(2.0)


class DegenerateTargetError(ValueError):
    """Raised when a primary target rate of zero makes a margin undefined."""


def db_to_linear(x):
    """Convert a value in dB to linear scale."""
    if np.ndim(x) == 0:
        return 10.0 ** (float(x) / 10.0)
    return np.power(10.0, np.asarray(x, dtype=float) / 10.0)


def linear_to_db(x):
    """Convert a linear (power-like) value to dB."""
    return 10.0 * np.log10(x)


def _pair(value, name: str) -> Pair:
    if np.ndim(value) == 0:
        v = float(value)
        return (v, v)
    values = tuple(float(v) for v in value)
    if len(values) != 2:
        raise ValueError(f"{name} must have exactly two entries, got {len(values)}")
    return values  # type: ignore[return-value]


@dataclass(frozen=True)
class ScenarioInstance:
    """One instantaneous channel realization, all quantities linear.

    Parameters
    ----------
    p : pair of float
        Primary transmit powers ``(p_1, p_2)`` in watts.
    r0 : pair of float
        Primary minimum target rates in bits/s/Hz.
    gamma_p : pair of float
        Primary direct CNRs; ``gamma_p[i-1]`` is the link from node i to
        node ``3 - i``.
    gamma_s : float
        Secondary direct CNR.
    i_s : pair of float
        Secondary-to-primary interference CNRs; ``i_s[j-1]`` is seen at
        primary node j.
    i_p : pair of float
        Primary-to-secondary interference CNRs.
    upsilon_p : pair of float
        Residual self-interference CNRs at the primary nodes.
    ps_max : float
        Secondary power budget in watts.
    """

    p: Pair
    r0: Pair
    gamma_p: Pair
    gamma_s: float
    i_s: Pair
    i_p: Pair
    upsilon_p: Pair
    ps_max: float

    def __post_init__(self):
        for name in ("p", "r0", "gamma_p", "i_s", "i_p", "upsilon_p"):
            object.__setattr__(self, name, _pair(getattr(self, name), name))
        object.__setattr__(self, "gamma_s", float(self.gamma_s))
        object.__setattr__(self, "ps_max", float(self.ps_max))

        values = (*self.gamma_p, self.gamma_s, *self.i_s, *self.i_p, *self.upsilon_p)
        if not all(math.isfinite(v) and v >= 0.0 for v in values):
            raise ValueError("all CNRs must be finite and non-negative")
        if not all(math.isfinite(v) and v > 0.0 for v in self.p):
            raise ValueError("primary powers must be positive")
        if not all(math.isfinite(v) and v > 0.0 for v in self.r0):
            raise ValueError("primary target rates must be positive")
        if not (math.isfinite(self.ps_max) and self.ps_max > 0.0):
            raise ValueError("ps_max must be positive")

    @classmethod
    def from_db(cls, *, p, r0, gamma_p_db, gamma_s_db, i_s_db, i_p_db, upsilon_p_db, ps_max):
        """Build an instance from CNRs given in dB (powers stay in watts)."""
        lin = lambda v: tuple(10.0 ** (x / 10.0) for x in _pair(v, "cnr"))  # noqa: E731
        return cls(
            p=p,
            r0=r0,
            gamma_p=lin(gamma_p_db),
            gamma_s=10.0 ** (float(gamma_s_db) / 10.0),
            i_s=lin(i_s_db),
            i_p=lin(i_p_db),
            upsilon_p=lin(upsilon_p_db),
            ps_max=ps_max,
        )

    def replace(self, **changes) -> "ScenarioInstance":
        return replace(self, **changes)


@dataclass(frozen=True)
class ScenarioStatistics:
    """Mean CNRs (dB) of the fading channels plus the deterministic parameters.

    ``pu_direct_correlation`` is the correlation coefficient between the
    complex gains of the two primary direct links.
    """

    p: Pair
    r0: Pair
    gamma_p_db: Pair
    gamma_s_db: float
    i_s_db: Pair
    i_p_db: Pair
    upsilon_p_db: Pair
    ps_max: float
    pu_direct_correlation: float = 0.95

    def __post_init__(self):
        for name in ("p", "r0", "gamma_p_db", "i_s_db", "i_p_db", "upsilon_p_db"):
            object.__setattr__(self, name, _pair(getattr(self, name), name))
        for name in ("gamma_s_db", "ps_max", "pu_direct_correlation"):
            object.__setattr__(self, name, float(getattr(self, name)))
        db = (*self.gamma_p_db, self.gamma_s_db, *self.i_s_db, *self.i_p_db, *self.upsilon_p_db)
        if not all(math.isfinite(v) for v in db):
            raise ValueError("dB means must be finite")
        if not 0.0 <= self.pu_direct_correlation <= 1.0:
            raise ValueError("pu_direct_correlation must lie in [0, 1]")
        if min(self.p) <= 0.0 or min(self.r0) <= 0.0 or self.ps_max <= 0.0:
            raise ValueError("powers and target rates must be positive")

    def replace(self, **changes) -> "ScenarioStatistics":
        return replace(self, **changes)

    def mean_instance(self) -> ScenarioInstance:
        """The instance whose CNRs equal the mean values."""
        return ScenarioInstance.from_db(
            p=self.p,
            r0=self.r0,
            gamma_p_db=self.gamma_p_db,
            gamma_s_db=self.gamma_s_db,
            i_s_db=self.i_s_db,
            i_p_db=self.i_p_db,
            upsilon_p_db=self.upsilon_p_db,
            ps_max=self.ps_max,
        )


@dataclass(frozen=True)
class SignalDesign:
    """Secondary transmit power ``ps`` (watts) and circularity coefficient ``cx``."""

    ps: float
    cx: float

    def __post_init__(self):
        if self.ps < 0.0:
            raise ValueError("ps must be non-negative")
        if not 0.0 <= self.cx <= 1.0:
            raise ValueError("cx must lie in [0, 1]")

    @property
    def idle(self) -> bool:
        return self.ps == 0.0


IDLE = SignalDesign(0.0, 0.0)


@dataclass(frozen=True)
class RateReport:
    """Rates and circularity coefficients produced by a design."""

    r_p: Pair
    r_s: float
    c_y: Pair
    c_i: Pair


def receiver_of(i: int) -> int:
    if i not in (1, 2):
        raise ValueError(f"node index must be 1 or 2, got {i}")
    return 3 - i


def beta(scenario: ScenarioInstance, j: int) -> float:
    """Residual self-interference plus noise at receiver j: ``p_j υ_j + 1``."""
    return scenario.p[j - 1] * scenario.upsilon_p[j - 1] + 1.0


def delta(scenario: ScenarioInstance) -> float:
    """Primary-to-secondary interference plus noise at the secondary receiver."""
    return scenario.p[0] * scenario.i_p[0] + scenario.p[1] * scenario.i_p[1] + 1.0


def gamma_target(scenario: ScenarioInstance, i: int, x: float) -> float:
    """SINR needed for stream i to reach ``x`` times its target rate."""
    return math.expm1(x * scenario.r0[i - 1] * math.log(2.0))


def phi_required(scenario: ScenarioInstance, i: int, x: float) -> float:
    """SINR needed for stream i to reach ``x`` times its interference-free rate."""
    j = receiver_of(i)
    snr = scenario.p[i - 1] * scenario.gamma_p[i - 1] / beta(scenario, j)
    # 2**(x log2(1 + snr)) - 1 without the round trip through log2
    return math.expm1(x * math.log1p(snr))


def psi_margin(scenario: ScenarioInstance, i: int, x: float, y: float) -> float:
    """Relative SINR margin ``phi_i(x) / Gamma_i(y) - 1`` (may be negative)."""
    target = gamma_target(scenario, i, y)
    if target <= 0.0:
        raise DegenerateTargetError(f"target SINR of stream {i} is zero")
    return phi_required(scenario, i, x) / target - 1.0


def circularity_coefficients(scenario: ScenarioInstance, i: int, ps, cx):
    """Circularity coefficients ``(C_y, C_I)`` seen by the receiver of stream i."""
    j = receiver_of(i)
    b = beta(scenario, j)
    interference = ps * scenario.i_s[j - 1]
    signal = scenario.p[i - 1] * scenario.gamma_p[i - 1]
    improper = interference * cx
    c_y = improper / (signal + b + interference)
    c_i = improper / (b + interference)
    return c_y, c_i


def pu_rate(scenario: ScenarioInstance, i: int, ps, cx):
    """Achievable rate of primary stream i under an improper secondary signal."""
    j = receiver_of(i)
    b = beta(scenario, j)
    interference = ps * scenario.i_s[j - 1]
    improper = interference * cx
    signal = scenario.p[i - 1] * scenario.gamma_p[i - 1]
    noise = b + interference
    total = signal + noise
    # num / den = 1 + signal (total + noise) / den, with
    # den = noise^2 - improper^2 factored to avoid cancellation
    den = (noise - improper) * (noise + improper)
    return 0.5 * np.log1p(signal * (total + noise) / den) / _LN2


def pu_rate_composed(scenario: ScenarioInstance, i: int, ps, cx):
    """Same rate as :func:`pu_rate`, built from the SINR term plus the
    impropriety correction with explicit circularity coefficients."""
    j = receiver_of(i)
    b = beta(scenario, j)
    c_y, c_i = circularity_coefficients(scenario, i, ps, cx)
    sinr = scenario.p[i - 1] * scenario.gamma_p[i - 1] / (b + ps * scenario.i_s[j - 1])
    return (np.log1p(sinr) + 0.5 * (np.log1p(-c_y * c_y) - np.log1p(-c_i * c_i))) / _LN2


def pu_rate_proper(scenario: ScenarioInstance, i: int, ps):
    j = receiver_of(i)
    sinr = scenario.p[i - 1] * scenario.gamma_p[i - 1] / (beta(scenario, j) + ps * scenario.i_s[j - 1])
    return np.log1p(sinr) / _LN2


def su_rate(scenario: ScenarioInstance, ps, cx):
    """Achievable rate of the secondary link."""
    snr = ps * scenario.gamma_s / delta(scenario)
    return 0.5 * np.log1p(snr * snr * (1.0 - cx) * (1.0 + cx) + 2.0 * snr) / _LN2


def su_rate_proper(scenario: ScenarioInstance, ps):
    return np.log1p(ps * scenario.gamma_s / delta(scenario)) / _LN2


def i_max(scenario: ScenarioInstance, i: int) -> float:
    """Largest interference-to-noise ratio stream i tolerates at its target rate."""
    target = gamma_target(scenario, i, 1.0)
    return max(scenario.p[i - 1] * scenario.gamma_p[i - 1] / target - 1.0, 0.0)


def evaluate(design: SignalDesign, scenario: ScenarioInstance) -> RateReport:
    """Rates and circularity coefficients of ``design`` on ``scenario``."""
    ps, cx = design.ps, design.cx
    coeffs = [circularity_coefficients(scenario, i, ps, cx) for i in (1, 2)]
    return RateReport(
        r_p=(float(pu_rate(scenario, 1, ps, cx)), float(pu_rate(scenario, 2, ps, cx))),
        r_s=float(su_rate(scenario, ps, cx)),
        c_y=(float(coeffs[0][0]), float(coeffs[1][0])),
        c_i=(float(coeffs[0][1]), float(coeffs[1][1])),
    )
