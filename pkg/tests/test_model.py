import dataclasses
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from igs_underlay.model import (
    DegenerateTargetError,
    ScenarioInstance,
    ScenarioStatistics,
    SignalDesign,
    beta,
    circularity_coefficients,
    db_to_linear,
    delta,
    evaluate,
    gamma_target,
    i_max,
    linear_to_db,
    phi_required,
    psi_margin,
    pu_rate,
    pu_rate_composed,
    pu_rate_proper,
    receiver_of,
    su_rate,
    su_rate_proper,
)
from scenarios import db, random_instance

# hand evaluations on the canonical instance
GAMMA = 10 ** 1.5
DELTA = 1 + 10 ** 0.5 + 10 ** 0.8
PHI1 = GAMMA / 11


@pytest.mark.parametrize("x, expected", [(0, 1.0), (15, 31.6228), (10, 10.0), (-10, 0.1)])
def test_db_to_linear(x, expected):
    assert db_to_linear(x) == pytest.approx(expected, abs=1e-4)


def test_db_round_trip_on_arrays():
    x = np.array([-30.0, 0.0, 12.5])
    np.testing.assert_allclose(linear_to_db(db_to_linear(x)), x, atol=1e-12)


def test_receiver_of():
    assert receiver_of(1) == 2 and receiver_of(2) == 1
    with pytest.raises(ValueError):
        receiver_of(3)


@pytest.mark.parametrize("p, ups, expected", [(1.0, 10.0, 11.0), (1.0, 0.0, 1.0), (2.0, 5.0, 11.0)])
def test_beta(canonical, p, ups, expected):
    s = canonical.replace(p=(p, p), upsilon_p=(ups, ups))
    assert beta(s, 1) == pytest.approx(expected)
    assert beta(s, 2) == pytest.approx(expected)


def test_delta(canonical):
    assert delta(canonical) == pytest.approx(DELTA, rel=1e-12)


def test_gamma_target(canonical):
    assert gamma_target(canonical, 1, 1) == pytest.approx(1.0)
    assert gamma_target(canonical, 1, 2) == pytest.approx(3.0)
    tiny = canonical.replace(r0=(1e-12, 1e-12))
    assert gamma_target(tiny, 1, 1) == pytest.approx(0.0, abs=1e-11)


def test_phi_required(canonical):
    assert phi_required(canonical, 1, 1) == pytest.approx(2.87480, abs=1e-5)
    assert phi_required(canonical, 1, 1) == pytest.approx(PHI1, rel=1e-15)
    assert phi_required(canonical, 1, 2) == pytest.approx(14.0141, abs=1e-4)
    silent = canonical.replace(gamma_p=(0.0, 0.0))
    assert phi_required(silent, 1, 1) == 0.0


def test_phi_is_interference_free_rate(canonical):
    r00 = math.log2(1 + PHI1)
    assert phi_required(canonical, 2, 2) == pytest.approx(2 ** (2 * r00) - 1, rel=1e-12)


def test_psi_margin(canonical):
    assert psi_margin(canonical, 1, 1, 1) == pytest.approx(1.87480, abs=1e-5)
    assert psi_margin(canonical, 1, 1, 2) == pytest.approx(-0.04173, abs=1e-5)
    assert psi_margin(canonical, 1, 2, 2) == pytest.approx(3.67136, abs=1e-5)


def test_psi_margin_zero_target_is_degenerate(canonical):
    s = canonical.replace()
    object.__setattr__(s, "r0", (0.0, 1.0))
    with pytest.raises(DegenerateTargetError):
        psi_margin(s, 1, 1, 1)


def test_circularity_coefficients(canonical):
    assert circularity_coefficients(canonical, 2, 0.0, 0.7) == (0.0, 0.0)
    assert circularity_coefficients(canonical, 2, 0.5, 0.0) == (0.0, 0.0)
    c_y, c_i = circularity_coefficients(canonical, 2, 1.0, 1.0)
    assert c_i == pytest.approx(100 / 111, rel=1e-12)
    assert c_y == pytest.approx(100 / (GAMMA + 111), rel=1e-12)


def test_zero_interference_gain_gives_zero_coefficients(canonical):
    s = canonical.replace(i_s=(0.0, 0.0))
    assert circularity_coefficients(s, 1, 1.0, 1.0) == (0.0, 0.0)


def test_pu_rate_examples(canonical):
    assert pu_rate(canonical, 1, 0.0, 0.0) == pytest.approx(math.log2(1 + PHI1), rel=1e-14)
    assert pu_rate(canonical, 1, 0.0, 0.0) == pytest.approx(1.95404, abs=1e-4)
    # the improper optimum keeps stream 2 exactly at its target
    assert pu_rate(canonical, 2, 1.0, 0.982221) == pytest.approx(1.0, abs=1e-5)


def test_su_rate_examples(canonical):
    assert su_rate(canonical, 0.0, 0.3) == 0.0
    expected_pgs = math.log2(1 + 0.206228 * GAMMA / DELTA)
    assert su_rate(canonical, 0.206228, 0.0) == pytest.approx(expected_pgs, rel=1e-12)
    assert su_rate(canonical, 0.206228, 0.0) == pytest.approx(0.69851, abs=1e-4)
    snr = GAMMA / DELTA
    expected_igs = 0.5 * math.log2(snr**2 * (1 - 0.982221**2) + 2 * snr + 1)
    assert su_rate(canonical, 1.0, 0.982221) == pytest.approx(expected_igs, rel=1e-12)
    assert su_rate(canonical, 1.0, 0.982221) == pytest.approx(1.43992, abs=1e-4)


def test_i_max(canonical):
    assert i_max(canonical, 1) == pytest.approx(30.6228, abs=1e-4)
    weak = canonical.replace(gamma_p=(0.5, 0.5))
    assert i_max(weak, 1) == 0.0
    strict = canonical.replace(r0=(2.0, 2.0))
    assert i_max(strict, 1) == pytest.approx(9.54093, abs=1e-5)


def test_evaluate_report(canonical):
    rep = evaluate(SignalDesign(1.0, 0.982221), canonical)
    assert rep.r_s == pytest.approx(float(su_rate(canonical, 1.0, 0.982221)))
    assert rep.r_p[1] == pytest.approx(1.0, abs=1e-5)
    assert all(cy <= ci for cy, ci in zip(rep.c_y, rep.c_i))


def test_scenario_validation(canonical):
    with pytest.raises(ValueError):
        canonical.replace(gamma_s=-1.0)
    with pytest.raises(ValueError):
        canonical.replace(p=(0.0, 1.0))
    with pytest.raises(ValueError):
        canonical.replace(r0=(1.0, 0.0))
    with pytest.raises(ValueError):
        canonical.replace(ps_max=0.0)
    with pytest.raises(ValueError):
        canonical.replace(i_s=(1.0, 2.0, 3.0))
    with pytest.raises(dataclasses.FrozenInstanceError):
        canonical.gamma_s = 2.0


def test_scenario_from_db_matches_linear(canonical):
    s = ScenarioInstance.from_db(
        p=1, r0=1, gamma_p_db=15, gamma_s_db=15, i_s_db=(20, 10), i_p_db=(5, 8), upsilon_p_db=10, ps_max=1
    )
    for name in ("gamma_p", "gamma_s", "i_s", "i_p", "upsilon_p"):
        np.testing.assert_allclose(getattr(s, name), getattr(canonical, name), rtol=1e-14)


def test_statistics_validation():
    stats = ScenarioStatistics(1, 1, 15, 15, (20, 10), (5, 8), 10, 1)
    assert stats.pu_direct_correlation == 0.95
    assert stats.mean_instance().i_s == pytest.approx((100.0, 10.0))
    with pytest.raises(ValueError):
        stats.replace(pu_direct_correlation=1.5)
    with pytest.raises(ValueError):
        stats.replace(gamma_s_db=float("inf"))


def test_signal_design_validation():
    assert SignalDesign(0.0, 0.0).idle
    with pytest.raises(ValueError):
        SignalDesign(-1.0, 0.0)
    with pytest.raises(ValueError):
        SignalDesign(1.0, 1.5)


def _identity_sample(n_scenarios=1000, n_points=100, seed=0):
    rng = np.random.default_rng(seed)
    for _ in range(n_scenarios):
        s = random_instance(rng)
        ps = rng.uniform(0.0, s.ps_max, n_points)
        cx = rng.uniform(0.0, 1.0, n_points)
        yield s, ps, cx


def test_simplified_rate_matches_composed_form():
    worst = 0.0
    for s, ps, cx in _identity_sample():
        for i in (1, 2):
            a = pu_rate(s, i, ps, cx)
            b = pu_rate_composed(s, i, ps, cx)
            worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))))
    assert worst <= 1e-12


def test_proper_reduction():
    worst = 0.0
    for s, ps, _ in _identity_sample(seed=1):
        zero = np.zeros_like(ps)
        pairs = [(su_rate(s, ps, zero), su_rate_proper(s, ps))]
        pairs += [(pu_rate(s, i, ps, zero), pu_rate_proper(s, i, ps)) for i in (1, 2)]
        for a, b in pairs:
            worst = max(worst, float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300))))
    assert worst <= 1e-12


cnr_db = st.floats(-20, 30)


@st.composite
def instances(draw):
    m = [draw(cnr_db) for _ in range(9)]
    return ScenarioInstance(
        p=(draw(st.floats(0.1, 5)), draw(st.floats(0.1, 5))),
        r0=(draw(st.floats(0.1, 3)), draw(st.floats(0.1, 3))),
        gamma_p=(db(m[0]), db(m[1])),
        gamma_s=db(m[2]),
        i_s=(db(m[3]), db(m[4])),
        i_p=(db(m[5]), db(m[6])),
        upsilon_p=(db(m[7]), db(m[8])),
        ps_max=draw(st.floats(0.1, 10)),
    )


@settings(max_examples=300, deadline=None)
@given(s=instances(), frac=st.floats(1e-3, 1.0), cx=st.floats(0.0, 1.0), i=st.sampled_from([1, 2]))
def test_coefficient_ordering(s, frac, cx, i):
    c_y, c_i = circularity_coefficients(s, i, frac * s.ps_max, cx)
    assert 0.0 <= c_y <= c_i <= cx + 1e-15


@settings(max_examples=300, deadline=None)
@given(s=instances(), frac=st.floats(1e-2, 1.0), cx=st.floats(0.01, 0.98), i=st.sampled_from([1, 2]))
def test_rate_monotonicity(s, frac, cx, i):
    ps = frac * s.ps_max
    h = 1e-3
    assert pu_rate(s, i, ps, cx + h) > pu_rate(s, i, ps, cx)
    assert su_rate(s, ps, cx + h) < su_rate(s, ps, cx)
    assert su_rate(s, ps * 1.01, cx) > su_rate(s, ps, cx)


@settings(max_examples=300, deadline=None)
@given(s=instances(), i=st.sampled_from([1, 2]))
def test_doubling_identities(s, i):
    phi1, g1 = phi_required(s, i, 1), gamma_target(s, i, 1)
    assert phi_required(s, i, 2) == pytest.approx(phi1**2 + 2 * phi1, rel=1e-12)
    assert gamma_target(s, i, 2) == pytest.approx(g1**2 + 2 * g1, rel=1e-12)
