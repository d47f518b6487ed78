import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import comb

from spincat import model
from spincat.errors import DomainError, OutcomeImpossibleError, ValidationError
from spincat.observables import purity

spins = st.integers(min_value=1, max_value=40)
angles = st.floats(min_value=0.0, max_value=math.pi)
couplings = st.floats(min_value=0.0, max_value=1.5)


def test_spin_labels_are_twice_values():
    assert model.spin_labels(3).tolist() == [-3, -1, 1, 3]
    assert model.spin_labels(4).tolist() == [-4, -2, 0, 2, 4]


def test_log_binomial_root_matches_scipy():
    two_n = 30
    labels = model.spin_labels(two_n)
    expected = 0.5 * np.log(comb(two_n, (two_n + labels) // 2)) - 0.5 * two_n * np.log(2)
    np.testing.assert_allclose(model.log_binomial_root(two_n, labels), expected, rtol=1e-13)


def test_cat_coefficients_half_integer_parity():
    cat = model.cat_coefficients(1)
    # s = 1/2: c_-1/2 = (c+ - c-)/sqrt2 vanishes for the even cat
    np.testing.assert_allclose(cat.coeffs, [0.0, 1.0], atol=1e-15)
    odd = model.cat_coefficients(1, 2 ** -0.5, -(2 ** -0.5))
    np.testing.assert_allclose(odd.coeffs, [1.0, 0.0], atol=1e-15)


@given(spins, st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(0, math.pi / 2))
def test_cat_normalized(two_s, phi_p, phi_m, mix):
    cp = math.cos(mix) * np.exp(1j * phi_p)
    cm = math.sin(mix) * np.exp(1j * phi_m)
    cat = model.cat_coefficients(two_s, cp, cm)
    assert abs(cat.weights.sum() - 1.0) < 1e-12


def test_cat_rejects_unnormalized():
    with pytest.raises(ValidationError):
        model.cat_coefficients(4, 1.0, 1.0)


def test_large_spin_is_finite():
    cat = model.cat_coefficients(10000)
    assert np.all(np.isfinite(cat.coeffs))
    assert abs(cat.weights.sum() - 1) < 1e-12


@pytest.mark.parametrize("bad", [-1, 0, 2.5, "4"])
def test_spin_validation(bad):
    with pytest.raises((DomainError, ValidationError, TypeError)):
        model.cat_coefficients(bad)


def test_theta_validation():
    with pytest.raises(DomainError):
        model.dephasing_kernel(4, 3.5, 0.1, 4)


@settings(max_examples=60)
@given(spins, st.integers(1, 30), angles, couplings)
def test_kernel_invariants(two_s, two_j, theta, g):
    kern = model.dephasing_kernel(two_j, theta, g, two_s)
    n = kern.entries
    assert np.all(n.diagonal() == 1.0)
    assert np.max(np.abs(n - n.conj().T)) < 1e-14
    assert np.linalg.eigvalsh(n).min() > -1e-10


@settings(max_examples=40)
@given(st.integers(1, 12), st.integers(1, 24), angles, couplings)
def test_kernel_binomial_expansion(two_s, two_j, theta, g):
    kern = model.dephasing_kernel(two_j, theta, g, two_s)
    sigma = model.spin_labels(two_s) / 2
    d = sigma[:, None] - sigma[None, :]
    expect = np.zeros_like(d, dtype=complex)
    for two_k in model.spin_labels(two_j):
        up, down = (two_j + two_k) // 2, (two_j - two_k) // 2
        w = comb(two_j, up) * math.cos(theta / 2) ** (2 * up) * math.sin(theta / 2) ** (2 * down)
        expect += w * np.exp(-1j * g * two_k * d)
    np.fill_diagonal(expect, 1.0)
    assert np.max(np.abs(kern.entries - expect)) < 1e-12


def test_kernel_degenerate_theta_is_pure_phase():
    for theta in (0.0, math.pi):
        kern = model.dephasing_kernel(20, theta, 0.3, 10)
        np.testing.assert_allclose(np.abs(kern.entries), 1.0, atol=1e-13)


def test_zero_coupling_is_identity():
    cat = model.cat_coefficients(9, 0.6, 0.8j)
    rho = model.apply_environment(cat, model.dephasing_kernel(7, 0.7, 0.0, 9))
    pure = np.outer(cat.coeffs, cat.coeffs.conj())
    assert np.max(np.abs(rho.dense() - pure)) <= 1e-15


def test_approx_kernel_close_for_weak_coupling():
    exact = model.dephasing_kernel(100, math.pi / 6, 0.001, 20)
    approx = model.dephasing_kernel_approx(100, math.pi / 6, 0.001, 20)
    assert not approx.exact
    assert np.max(np.abs(exact.entries - approx.entries)) < 1e-4


@settings(max_examples=60)
@given(st.integers(1, 30), st.integers(1, 30), angles, couplings)
def test_probe_completeness(two_s, two_j, theta, g):
    probe = model.probe_model(two_j, theta, g, two_s)
    col = np.sum(np.abs(probe.amplitudes) ** 2, axis=0)
    assert np.max(np.abs(col - 1.0)) < 1e-12


def test_probe_rows_indexed_by_twice_m():
    probe = model.probe_model(3, 0.4, 0.1, 2)
    assert probe.two_m.tolist() == [-3, -1, 1, 3]
    np.testing.assert_array_equal(probe.row(-1), probe.amplitudes[1])
    with pytest.raises(ValueError):
        probe.row(0)


def test_measurement_normalizes_and_tracks_norm():
    cat = model.cat_coefficients(10)
    rho = model.apply_environment(cat, model.dephasing_kernel(10, 0.5, 0.05, 10))
    probe = model.probe_model(10, 0.5, 0.05, 10)
    p, post = model.apply_probe_measurement(rho, probe, 0)
    assert 0 < p < 1
    assert abs(post.trace() - 1.0) < 1e-13
    assert post.norm == pytest.approx(rho.norm * p)
    assert p == pytest.approx(model.outcome_probability(rho, probe, 0), rel=1e-13)


def test_impossible_outcome_raises():
    import dataclasses
    cat = model.cat_coefficients(4)
    rho = model.apply_environment(cat, model.dephasing_kernel(4, 0.5, 0.1, 4))
    probe = model.probe_model(4, 0.5, 0.1, 4)
    amps = probe.amplitudes.copy()
    amps[0] = 0.0
    blocked = dataclasses.replace(probe, amplitudes=amps)
    assert model.outcome_probability(rho, blocked, -4) == 0.0
    with pytest.raises(OutcomeImpossibleError):
        model.apply_probe_measurement(rho, blocked, -4)


def test_average_unitary_keeps_purity():
    cat = model.cat_coefficients(40)
    rho = model.apply_environment(cat, model.dephasing_kernel(40, 0.9, 0.02, 40))
    rho_u = model.apply_average_unitary(rho)
    assert abs(purity(rho_u) - purity(rho)) <= 1e-14
    phase = model.average_unitary_phase(40, 40, 0.9, 0.02)
    np.testing.assert_allclose(np.abs(phase), 1.0, atol=1e-15)
