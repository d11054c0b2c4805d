import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfc.matrix import build_drift, frequency_matrix, output_correlations, second_moments, transfer_matrices
from qfc.model import ResonatorParams, SingularityError, ValidityError

from .conftest import OMEGA_1550

# commutator form [v_a, v_b] for v = (b_s, b_s^dag, b_i, b_i^dag)
J = np.array([[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]], dtype=complex)

rates = st.floats(1e7, 1e10)
pumps = st.floats(0.0, 0.99)
detunings = st.floats(-5.0, 5.0)


def _params(kappa, gamma, eta=1.0):
    return ResonatorParams(kappa=kappa, gamma=gamma, g_opt=1.5e6, eta=eta, omega_p=OMEGA_1550)


def test_drift_structure(comb_ring):
    d = build_drift(comb_ring, 0.5, 2e8, -1e8)
    k = d.k
    assert k.shape == (4, 4)
    assert d.sigma == 0.5e9
    np.testing.assert_allclose(np.diag(k), [-2e8j - 1e8, 2e8j - 1e8, 1e8j - 1e8, -1e8j - 1e8])
    # pump couples b_s to b_i^dag and b_s^dag to b_i only
    assert k[0, 3] == k[3, 0] == k[1, 2] == k[2, 1] == 0.25e9
    assert np.count_nonzero(k) == 8
    with pytest.raises(ValueError):
        k[0, 0] = 0.0


def test_drift_rejects_invalid_pump(comb_ring):
    with pytest.raises(ValidityError):
        build_drift(comb_ring, 0.999, 0.0)


def test_frequency_matrix():
    np.testing.assert_array_equal(np.diag(frequency_matrix(2.0)), [2j, -2j, 2j, -2j])


def test_vacuum_at_zero_pump(comb_ring):
    q = second_moments(build_drift(comb_ring, 0.0, 3e8), comb_ring)
    assert q.n_s == pytest.approx(0.0, abs=1e-15)
    assert q.n_i == pytest.approx(0.0, abs=1e-15)
    assert abs(q.m_si) < 1e-15


@settings(max_examples=200, deadline=None)
@given(kappa=rates, gamma=rates, x=pumps, d=detunings, omega=detunings)
def test_output_commutators_preserved(kappa, gamma, x, d, omega):
    p = _params(kappa, gamma)
    G = p.total_loss
    drift = build_drift(p, x, d * G)
    m_in, m_loss = transfer_matrices(drift, p, omega * G)
    np.testing.assert_allclose(m_in @ J @ m_in.T + m_loss @ J @ m_loss.T, J, atol=1e-10)


@settings(max_examples=100, deadline=None)
@given(kappa=rates, x=pumps, d=detunings)
def test_lossless_transfer_is_symplectic(kappa, x, d):
    p = _params(kappa, 0.0)
    m_in, m_loss = transfer_matrices(build_drift(p, x, d * kappa), p)
    np.testing.assert_allclose(m_in @ J @ m_in.T, J, atol=1e-12)
    np.testing.assert_array_equal(m_loss, np.zeros((4, 4)))


@settings(max_examples=200, deadline=None)
@given(kappa=rates, gamma=rates, x=pumps, d=detunings)
def test_hermiticity_and_balance(kappa, gamma, x, d):
    p = _params(kappa, gamma)
    corr = output_correlations(build_drift(p, x, d * p.total_loss), p)
    n = corr[1, 0]
    scale = 1.0 + abs(n)
    assert abs(n.imag) <= 1e-12 * scale
    # <b b^dag> - <b^dag b> = 1
    np.testing.assert_allclose(corr[0, 1] - corr[1, 0], 1.0, atol=1e-10 * scale)
    # symmetric pair: signal and idler equally populated
    np.testing.assert_allclose(corr[3, 2], n, rtol=1e-10, atol=1e-14)


@settings(max_examples=200, deadline=None)
@given(kappa=rates, gamma=rates, x=pumps, d=detunings)
def test_detuning_reflection(kappa, gamma, x, d):
    p = _params(kappa, gamma)
    G = p.total_loss
    a = second_moments(build_drift(p, x, d * G), p)
    b = second_moments(build_drift(p, x, -d * G), p)
    np.testing.assert_allclose(a.n_s, b.n_s, rtol=1e-10, atol=1e-300)
    np.testing.assert_allclose(a.m_si, np.conj(b.m_si), rtol=1e-10, atol=1e-300)


def test_sideband_offset_is_common_detuning_shift(comb_ring):
    for omega in [-3e8, 0.0, 4.5e8]:
        shifted = second_moments(build_drift(comb_ring, 0.7, 2e8), comb_ring, omega)
        direct = second_moments(build_drift(comb_ring, 0.7, 2e8 + omega), comb_ring)
        np.testing.assert_allclose(shifted.n_s, direct.n_s, rtol=1e-12)
        np.testing.assert_allclose(shifted.m_si, direct.m_si, rtol=1e-12)


def test_collection_efficiency_scales_moments(comb_ring):
    drift = build_drift(comb_ring, 0.6, 1e8)
    full = second_moments(drift, comb_ring, eta=1.0)
    half = second_moments(drift, comb_ring, eta=0.5)
    assert half.n_s == 0.5 * full.n_s
    assert half.m_si == 0.5 * full.m_si


def test_singular_at_threshold(comb_ring):
    drift = build_drift(comb_ring, 1.0, 0.0, validate=False)
    with pytest.raises(SingularityError, match="sigma=1e\\+09"):
        second_moments(drift, comb_ring)


def test_ill_conditioned_warning(comb_ring):
    drift = build_drift(comb_ring, 1.0 - 1e-13, 0.0, validate=False)
    with pytest.warns(UserWarning, match="ill-conditioned"):
        transfer_matrices(drift, comb_ring)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        transfer_matrices(build_drift(comb_ring, 0.99, 0.0), comb_ring)
