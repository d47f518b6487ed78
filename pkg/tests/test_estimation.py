import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spincat import estimation as est
from spincat.errors import DomainError

PI6 = math.pi / 6


def test_theta_from_ratio_reference():
    # equal populations give pi/2, strong polarization drives theta to zero
    with pytest.warns(UserWarning):
        assert est.theta_from_energy_ratio(0.0) == pytest.approx(math.pi / 2)
    assert est.theta_from_energy_ratio(50.0) < 1e-10
    assert math.cos(est.theta_from_energy_ratio(1.0)) == pytest.approx(math.tanh(0.5))


def test_theta_from_ratio_warns_on_nonpositive():
    with pytest.warns(UserWarning):
        est.theta_from_energy_ratio(-1.0)


@given(st.floats(1e-3, 1e3), st.floats(1.01, 10))
def test_theta_increases_with_temperature(temp, factor):
    de = 1e-23
    lo = est.theta_from_thermal(de, temp)
    hi = est.theta_from_thermal(de, temp * factor)
    assert 0 < lo <= hi < math.pi / 2


def test_thermal_rejects_bad_temperature():
    with pytest.raises(DomainError):
        est.theta_from_thermal(1e-23, 0.0)


def test_env_from_decay_inverts_relations():
    j, g0, s, theta = 50.0, 0.005, 50.0, PI6
    t0 = 2.0
    # forward relations
    g0_sq = math.pi ** 2 / (4 * s * math.cos(theta) ** 2) / j ** 2
    p0 = 1 - 2 * s * math.sin(theta) ** 2 * g0_sq * j
    e = est.env_from_decay(t0, p0, s, theta)
    assert e.j == pytest.approx(j)
    assert e.g0 == pytest.approx(math.sqrt(g0_sq))
    assert e.two_j == 100
    assert e.g_of_t(t0) == pytest.approx(e.g0)
    np.testing.assert_allclose(e.g_of_t([0.0, 1.0]), [0.0, e.g0 / 2])


@given(st.floats(0.001, 0.1), st.floats(0.2, 5.0))
def test_scale_consistency(loss, lam):
    lam = min(lam, 0.99 / loss)
    a = est.env_from_decay(1.0, 1 - loss, 50, PI6)
    b = est.env_from_decay(1.0, 1 - lam * loss, 50, PI6)
    assert b.j == pytest.approx(a.j / lam, rel=1e-9)
    assert b.g0 ** 2 == pytest.approx(a.g0 ** 2 * lam ** 2, rel=1e-9)
    assert (b.g0 * b.j) == pytest.approx(a.g0 * a.j, rel=1e-9)


@pytest.mark.parametrize("theta,word", [(math.pi / 2, "cos"), (0.0, "sin")])
def test_degenerate_angles_named(theta, word):
    with pytest.raises(DomainError, match=word):
        est.env_from_decay(1.0, 0.9, 50, theta)


@pytest.mark.parametrize("args", [(0.0, 0.9, 50), (1.0, 1.0, 50), (1.0, 0.9, -1)])
def test_domain_errors(args):
    with pytest.raises(DomainError):
        est.env_from_decay(*args, PI6)


def test_ill_conditioned_flag():
    assert est.env_from_decay(1.0, 1 - 1e-12, 50, PI6).ill_conditioned


def test_decay_observation_crossing():
    obs = est.decay_observation(100, 100, PI6, g_rate=2.0)
    assert obs.t0 == pytest.approx(obs.g0 / 2.0)
    assert 0.9 < obs.p0_prime < 1


def test_gaussian_threshold_definition():
    # the Gaussian estimate equals the default threshold at the decay time
    assert est.DEFAULT_F_THRESHOLD == pytest.approx(math.exp(-math.pi ** 2 / 4))


def test_millesimal_threshold_underestimates_j():
    # defining t0 by F' < 1e-3 overshoots the decay time; recorded as a characterization
    obs = est.decay_observation(100, 100, PI6, f_threshold=1e-3)
    e = est.env_from_decay(obs.t0, obs.p0_prime, 50, PI6)
    assert e.j / 50 == pytest.approx(0.375, abs=0.02)
