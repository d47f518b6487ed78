import math

import pytest
from hypothesis import given, strategies as st

from spincat import asymptotics as asy
from spincat import model
from spincat.observables import purity

PI6 = math.pi / 6


def test_reference_value():
    assert math.sqrt(asy.clt_fidelity_squared(50, 50, PI6, 0.01)) == pytest.approx(2.334e-4, rel=1e-3)


def test_underflow_to_zero_at_huge_scale():
    assert asy.clt_fidelity_squared(1e8, 1e8, 0.01, 1e-8) == 0.0
    assert asy.log_clt_fidelity_squared(1e8, 1e8, 0.01, 1e-8) < asy.LOG_UNDERFLOW


def test_zero_coupling_is_unity():
    assert asy.clt_fidelity_squared(100, 100, 0.7, 0.0) == 1.0


grid_s = st.floats(25, 200)
grid_j = st.floats(25, 100)
grid_g = st.floats(0.005, 0.02)
grid_t = st.floats(math.pi / 12, math.pi / 3)


@given(grid_s, grid_j, grid_g, grid_t)
def test_monotone_decreasing(s, j, g, theta):
    base = asy.log_clt_fidelity_squared(s, j, theta, g)
    assert asy.log_clt_fidelity_squared(s * 1.01, j, theta, g) < base
    assert asy.log_clt_fidelity_squared(s, j * 1.01, theta, g) < base
    assert asy.log_clt_fidelity_squared(s, j, theta, g * 1.01) < base


def test_regime_classes():
    assert asy.regime_check(50, 50, PI6, 0.01).in_window
    assert asy.regime_check(5, 50, PI6, 0.01).classification == "below-decay"
    assert asy.regime_check(500, 50, PI6, 0.01).classification == "above-purity-limit"
    for theta in (0.0, math.pi / 2):
        rep = asy.regime_check(50, 50, theta, 0.01)
        assert rep.classification == "degenerate"
    assert asy.regime_check(50, 50, 0.0, 0.01).s_lower < math.inf


def test_regime_thresholds():
    rep = asy.regime_check(50, 50, PI6, 0.01)
    assert rep.s_lower == pytest.approx(math.pi ** 2 / (4e-4 * 2500 * 0.75))
    assert rep.s_upper == pytest.approx(1 / (1e-4 * 50 * 0.25))


def test_scaling_laws_values():
    laws = asy.scaling_laws(50, 50, PI6, 0.01)
    assert laws.p_loss_2nd == pytest.approx(0.125)
    assert laws.f0_sq_2nd == pytest.approx(0.9375)
    assert laws.mean_fsq_2nd == pytest.approx(0.875)
    assert laws.dp_4th == pytest.approx(0.03125)
    assert laws.rp_2nd == pytest.approx(0.25)


@pytest.mark.parametrize("g", [0.0025, 0.004, 0.0056])
def test_purity_loss_law_against_exact(g):
    x = g * g * 50 * 50 * 0.25
    assert x <= 0.02
    cat = model.cat_coefficients(100)
    exact = 1 - purity(model.apply_environment(cat, model.dephasing_kernel(100, PI6, g, 100)))
    assert exact == pytest.approx(asy.scaling_laws(50, 50, PI6, g).p_loss_2nd, rel=0.1)
