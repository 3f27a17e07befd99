"""Closed-form benchmark expressions.

These are analytic transcriptions, so the tests pin frozen evaluations
against regressions and check the internal identities the expressions must
satisfy (pure-state relations, endpoint equalities, symmetries, limits).
Agreement with the full numeric pipeline is exercised separately by the
cross-validation suite.
"""
import math

import numpy as np
import pytest

from tritangle import closedform as cf
from tritangle.channels import dephasing_lambda

BAL = 1 / math.sqrt(2)


def test_scenario_catalog_is_complete():
    assert len(cf.ScenarioId) == 10
    assert {s.value for s in cf.ScenarioId} >= {"MilburnGGHZ", "Pdc1W", "GadcWWbar"}


def test_milburn_closed_frozen_point():
    got = cf.milburn_closed(0.6, 0.1, 0.5, 3.0)
    assert got["c2_a_bc"] == pytest.approx(0.136072053879060, abs=1e-14)
    assert got["gtc"] == pytest.approx(0.368879457111751, abs=1e-14)


def test_milburn_closed_pure_identities():
    # spread envelope: c2 = gtc^2 at every time, decay from the t=0 value
    for a in (0.3, 0.6, BAL):
        for t in (0.0, 2.0, 10.0):
            got = cf.milburn_closed(a, 0.2, 0.7, t)
            assert got["c2_a_bc"] == pytest.approx(got["gtc"] ** 2, abs=1e-14)
        at0 = cf.milburn_closed(a, 0.2, 0.7, 0.0)
        assert at0["c2_a_bc"] == pytest.approx(4 * a * a * (1 - a * a), abs=1e-14)


def test_milburn_closed_frozen_mixture_point():
    got = cf.milburn_closed(BAL, 0.1, 0.5, 3.0, 0.2, 0.1)
    assert got["c2_a_bc"] == pytest.approx(0.072347337674414, abs=1e-14)
    assert got["gtc"] == pytest.approx(0.268974604143985, abs=1e-14)


def test_milburn_mixture_requires_balanced_amplitude():
    with pytest.raises(ValueError):
        cf.milburn_closed(0.6, 0.1, 0.5, 1.0, 0.2, 0.1)


def test_pdc1_w_frozen_point_and_limits():
    got = cf.pdc1_w_closed(0.5)
    assert got["m_min"] == pytest.approx(-0.490388203202208, abs=1e-14)
    assert got["c2_a_bc"] == pytest.approx(0.448716354132352, abs=1e-14)
    assert got["c2_b_ac"] == pytest.approx(0.633890003469165, abs=1e-14)
    assert got["c2_ab"] == pytest.approx(2 / 9, abs=1e-14)
    assert got["c2_bc"] == pytest.approx(4 / 9, abs=1e-14)
    # untouched input: one-to-other values collapse to the W-state 8/9
    at0 = cf.pdc1_w_closed(0.0)
    assert at0["c2_a_bc"] == pytest.approx(8 / 9, abs=1e-12)
    assert at0["c2_b_ac"] == pytest.approx(8 / 9, abs=1e-12)
    assert at0["c2_ab"] == pytest.approx(4 / 9, abs=1e-12)
    assert at0["m_min"] == pytest.approx(-0.496988171048598, abs=1e-14)


def test_pdc1_w_domain():
    with pytest.raises(ValueError):
        cf.pdc1_w_closed(-0.01)
    with pytest.raises(ValueError):
        cf.pdc1_w_closed(1.01)


def test_adc_w_vacuum_frozen_point_and_structure():
    got = cf.adc_w_vacuum_closed(0.3, 0.2)
    assert got["c2_a_bc"] == pytest.approx(0.278755555555556, abs=1e-14)
    # the pair value is exactly half the one-to-other value in this family
    assert got["c_pair"] == pytest.approx(got["c2_a_bc"] / 2, abs=1e-14)
    assert got["s_lin"] == pytest.approx(0.4928, abs=1e-14)
    # no mixing, no damping: pure W values
    clean = cf.adc_w_vacuum_closed(0.0, 0.0)
    assert clean["c2_a_bc"] == pytest.approx(8 / 9, abs=1e-14)
    assert clean["s_lin"] == pytest.approx(0.0, abs=1e-14)


def test_gghz_adc_variants():
    one = cf.gghz_adc_closed(0.6, 0.4, "I")
    three = cf.gghz_adc_closed(0.6, 0.4, "III")
    assert one["c2_a_bc"] == pytest.approx(0.552960000000000, abs=1e-14)
    assert three["c2_a_bc"] == pytest.approx(0.737280000000000, abs=1e-14)
    # both placements share the same three-way concurrence
    assert one["gtc"] == pytest.approx(three["gtc"], abs=1e-15)
    assert one["gtc"] == pytest.approx(0.743612802471824, abs=1e-14)
    # variant I keeps c2 = gtc^2 / (1 - ...) consistency at d = 0
    fresh = cf.gghz_adc_closed(0.6, 0.0, "I")
    assert fresh["c2_a_bc"] == pytest.approx(4 * 0.36 * 0.64, abs=1e-14)
    with pytest.raises(ValueError):
        cf.gghz_adc_closed(0.6, 0.4, "II")


def test_ghz_vacuum_pdc_frozen_point_and_identities():
    got = cf.ghz_vacuum_pdc_closed(0.3, 0.1)
    assert got["gmc"] == pytest.approx(0.527095816716468, abs=1e-14)
    assert got["s_lin"] == pytest.approx(0.356085, abs=1e-14)
    assert got["c2_smallw"] == pytest.approx(0.27783, abs=1e-14)
    # gmc is the square root of the small-w c2 at w = 0
    at_w0 = cf.ghz_vacuum_pdc_closed(0.3, 0.0)
    assert at_w0["gmc"] ** 2 == pytest.approx(at_w0["c2_smallw"], abs=1e-14)
    assert cf.ghz_vacuum_pdc_closed(0.0, 0.0)["s_lin"] == pytest.approx(0.0, abs=1e-14)


def test_nonmarkov_frozen_points_and_steady_limits():
    got = cf.nonmarkov_closed(0.5, 0.0, 1.0, 5.0, 4.0)
    assert got["c2_a_bc"] == pytest.approx(0.187499972487565, abs=1e-13)
    assert got["gtc"] == pytest.approx(0.000165868766106, abs=1e-13)
    mix = cf.nonmarkov_closed(0.0, 0.3, 1.0, 5.0, 4.0, "GhzMixture")
    assert mix["c2_a_bc"] == pytest.approx(0.227499907463116, abs=1e-13)
    # the mixture settles on (1 - w^2) / 4
    for w in (0.1, 0.3, 0.5):
        steady = cf.nonmarkov_closed(0.0, w, 1.0, 5.0, 500.0, "GhzMixture")
        assert steady["c2_a_bc"] == pytest.approx((1 - w * w) / 4, abs=1e-12)
    # the balanced pure state instead dies out completely
    gone = cf.nonmarkov_closed(BAL, 0.0, 1.0, 5.0, 500.0)
    assert abs(gone["c2_a_bc"]) < 1e-12
    with pytest.raises(ValueError):
        cf.nonmarkov_closed(0.5, 0.0, 1.0, 5.0, 1.0, "Other")


def test_nonmarkov_t0_reduces_to_pure_values():
    for a in (0.3, 0.5, BAL, 0.9):
        got = cf.nonmarkov_closed(a, 0.0, 1.0, 5.0, 0.0)
        assert got["c2_a_bc"] == pytest.approx(4 * a * a * (1 - a * a), abs=1e-12)
        assert got["gtc"] == pytest.approx(2 * a * math.sqrt(1 - a * a), abs=1e-12)


def test_gadc_frozen_points():
    got = cf.gadc_wwbar_closed(0.0, 0.2, 0.3)
    assert got["c_pair"] == pytest.approx(0.207863525892527, abs=1e-14)
    dead = cf.gadc_wwbar_closed(0.0, 0.4, 0.3)
    assert dead["c_pair"] == 0.0
    spec = cf.gadc_wwbar_closed(math.pi / 2, 0.4, 0.3)
    assert spec["c_pair"] == pytest.approx(0.075298537114475, abs=1e-14)
    assert spec["c2_spectral"] == pytest.approx(0.630637137920000, abs=1e-14)
    assert cf.gadc_wwbar_closed(math.pi / 4, 0.4, 0.3)["c2_spectral"] is None


def test_gadc_excitation_symmetry():
    # swapping the state for its spin flip mirrors the channel bias p -> 1-p
    for d in (0.1, 0.35, 0.7):
        for p in (0.0, 0.2, 0.5, 0.9):
            a = cf.gadc_wwbar_closed(0.0, d, p)["c_pair"]
            b = cf.gadc_wwbar_closed(math.pi / 2, d, 1 - p)["c_pair"]
            assert a == pytest.approx(b, abs=1e-13)
    # the equal superposition is symmetric on its own
    for d in (0.2, 0.6):
        lo = cf.gadc_wwbar_closed(math.pi / 4, d, 0.3)["c_pair"]
        hi = cf.gadc_wwbar_closed(math.pi / 4, d, 0.7)["c_pair"]
        assert lo == pytest.approx(hi, abs=1e-13)


def test_gadc_unknown_angle_rejected():
    with pytest.raises(ValueError):
        cf.gadc_wwbar_closed(0.3, 0.5, 0.5)


def test_spectral_polynomials_endpoint_identity():
    for d in np.linspace(0.0, 1.0, 41):
        w_end = cf.gadc_wwbar_closed(0.0, d, 1.0)["c2_spectral"]
        wbar_end = cf.gadc_wwbar_closed(math.pi / 2, d, 0.0)["c2_spectral"]
        assert w_end == pytest.approx(wbar_end, abs=1e-13)
        assert w_end == pytest.approx(8 * (1 - d) / 9, abs=1e-13)


def test_d_esd_brackets_the_death_point():
    for theta, p in ((0.0, 0.3), (math.pi / 2, 0.6), (math.pi / 4, 0.5)):
        d_star = cf.d_esd(theta, p)
        if 0.0 < d_star < 1.0:
            before = cf.gadc_wwbar_closed(theta, max(d_star - 1e-4, 0.0), p)["c_pair"]
            after = cf.gadc_wwbar_closed(theta, min(d_star + 1e-4, 1.0), p)["c_pair"]
            assert before > 0.0
            assert after == 0.0
    assert cf.d_esd(0.0, 0.3) == pytest.approx(0.38086748, abs=1e-6)
    assert cf.d_esd(math.pi / 4, 0.5) == pytest.approx(0.35424852, abs=1e-6)


def test_dephasing_factor_enters_smoothly():
    # evaluate the closed pure-state expression against a manual rebuild
    a, b, tau, t = 0.4, 1.0, 5.0, 2.5
    lam3 = dephasing_lambda(b, tau, t) ** 3
    got = cf.nonmarkov_closed(a, 0.0, b, tau, t)
    assert got["gtc"] == pytest.approx(2 * a * math.sqrt(1 - a * a) * abs(lam3),
                                       abs=1e-14)
