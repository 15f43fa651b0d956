"""Eigensystem analysis: widths, participation, transition detection."""

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.testing import assert_allclose

import srswitch as sr
from srswitch import NumericalError, ValidationError

from conftest import at_kappa, random_network


def _dummy_spectral(widths, energies=None):
    w = np.asarray(widths, dtype=float)
    n = len(w)
    e = np.arange(n, dtype=complex) if energies is None else np.asarray(energies)
    states = np.eye(n, dtype=complex)
    return sr.SpectralResult(energies_cm1=e, widths_cm1=w, states=states,
                             participation=np.ones(n), overlap_L=np.zeros(n),
                             overlap_R=np.zeros(n))


def test_uniform_chain_spectrum_is_analytic():
    """With equal bonds the network is a 6-site open chain: eigenvalues
    2 Omega cos(k pi / 7) and sine-wave eigenvectors, all with PR 14/3."""
    net = sr.build_multimer(omega_sp_cm1=100.0, gamma_L_cm1=0.0,
                            gamma_R_cm1=0.0)
    spec = sr.eigendecompose(net)
    ks = np.arange(6, 0, -1)  # ascending energy
    assert_allclose(spec.energies_cm1.real, 200.0 * np.cos(ks * np.pi / 7.0),
                    atol=1e-10)
    assert_allclose(spec.energies_cm1.imag, 0.0, atol=1e-12)
    assert_allclose(spec.widths_cm1, 0.0, atol=1e-12)
    chain_order = [4, 2, 0, 1, 3, 5]  # sites listed end to end
    for col, k in enumerate(ks):
        v = np.zeros(6)
        for pos, site in enumerate(chain_order, start=1):
            v[site] = np.sin(pos * k * np.pi / 7.0)
        v /= np.linalg.norm(v)
        assert_allclose(np.abs(spec.states[:, col]), np.abs(v), atol=1e-10)
    assert_allclose(spec.participation, 14.0 / 3.0, rtol=1e-12)


def test_states_are_unit_norm_and_sorted(multimer):
    spec = sr.eigendecompose(at_kappa(multimer, 7.0))
    assert_allclose(np.linalg.norm(spec.states, axis=0), 1.0, rtol=1e-12)
    assert np.all(np.diff(spec.energies_cm1.real) >= 0)
    assert np.array_equal(spec.overlap_L, np.abs(spec.states[4]) ** 2)
    assert np.array_equal(spec.overlap_R, np.abs(spec.states[5]) ** 2)


def test_overlap_zero_without_sink():
    net = sr.SiteNetwork(np.zeros(2), np.array([[0.0, 50.0], [50.0, 0.0]]),
                         (sr.Sink(0, "L", 10.0),), (0, 1))
    spec = sr.eigendecompose(net)
    assert np.array_equal(spec.overlap_R, np.zeros(2))
    assert spec.overlap_L.sum() > 0


@given(gamma_L=st.floats(0.0, 1e4), gamma_R=st.floats(0.0, 1e4))
def test_width_sum_equals_total_decay_multimer(multimer, gamma_L, gamma_R):
    spec = sr.eigendecompose(sr.with_sink_strengths(multimer, gamma_L, gamma_R))
    total = gamma_L + gamma_R
    assert abs(spec.widths_cm1.sum() - total) <= 1e-9 * max(total, 1.0)
    assert spec.widths_cm1.min() >= -1e-10


@given(seed=st.integers(0, 2**32 - 1))
def test_width_sum_equals_total_decay_random(seed):
    net = random_network(np.random.default_rng(seed))
    spec = sr.eigendecompose(net)
    total = sum(s.gamma_cm1 for s in net.sinks)
    assert abs(spec.widths_cm1.sum() - total) <= 1e-9 * max(total, 1.0)
    assert spec.widths_cm1.min() >= -1e-10


def test_perturbative_widths_follow_sink_overlap(multimer):
    """For gamma much smaller than the couplings, each width is the sink
    strength weighted by the closed-network overlap on the sink site."""
    closed = sr.eigendecompose(sr.with_sink_strengths(multimer, 0.0, 0.0))
    gamma_L, gamma_R = 0.2, 0.002
    spec = sr.eigendecompose(sr.with_sink_strengths(multimer, gamma_L, gamma_R))
    first_order = (gamma_L * np.abs(closed.states[4]) ** 2
                   + gamma_R * np.abs(closed.states[5]) ** 2)
    assert_allclose(spec.widths_cm1, first_order, rtol=0.05)


def test_participation_ratio_bounds_and_scale_invariance():
    rng = np.random.default_rng(0)
    states = rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))
    pr = sr.participation_ratio(states)
    assert np.all(pr >= 1.0) and np.all(pr <= 5.0)
    assert_allclose(sr.participation_ratio(states * 17.3), pr, rtol=1e-12)
    assert_allclose(sr.participation_ratio(np.array([1.0, 0, 0, 0])), 1.0)
    assert_allclose(sr.participation_ratio(np.ones(4) / 2.0), 4.0)


def test_superradiant_indices_tie_rule(multimer):
    assert sr.superradiant_indices(_dummy_spectral([10.0, 5.0, 1.0])) == (0, 1)
    assert sr.superradiant_indices(_dummy_spectral([10.0, 4.9, 1.0])) == (0,)
    symmetric = sr.eigendecompose(sr.with_sink_strengths(multimer, 500.0, 500.0))
    assert len(sr.superradiant_indices(symmetric)) == 2
    between = sr.eigendecompose(at_kappa(multimer, 10.0))
    assert len(sr.superradiant_indices(between)) == 1


def test_subradiant_average_width():
    spec = _dummy_spectral([8.0, 0.2, 0.4, 6.0],
                           energies=np.array([0, 1, 2, 3], dtype=complex))
    assert_allclose(sr.subradiant_average_width(spec), 0.3, rtol=1e-12)
    with pytest.raises(ValidationError, match="n_exclude"):
        sr.subradiant_average_width(spec, n_exclude=0)
    with pytest.raises(ValidationError, match="n_exclude"):
        sr.subradiant_average_width(spec, n_exclude=4)


def test_mean_level_spacing():
    spec = _dummy_spectral([0.0, 0.0],
                           energies=np.array([1 + 2j, 5 - 1j]))
    assert sr.mean_level_spacing(spec) == 4.0
    with pytest.raises(ValidationError, match="at least 2"):
        sr.mean_level_spacing(_dummy_spectral([1.0], energies=np.array([0j])))


def test_partial_widths_symmetry_and_crossover(multimer):
    symmetric = sr.with_sink_strengths(multimer, 500.0, 500.0)
    pw = sr.partial_widths(sr.eigendecompose(symmetric), symmetric)
    assert set(pw) == {"L", "R"}
    assert_allclose(pw["L"], pw["R"], rtol=1e-10)
    before = at_kappa(multimer, 3.0)
    pw = sr.partial_widths(sr.eigendecompose(before), before)
    assert pw["L"] > pw["R"]
    after = at_kappa(multimer, 60.0)
    pw = sr.partial_widths(sr.eigendecompose(after), after)
    assert pw["L"] < pw["R"]


def test_switching_point_estimate():
    assert sr.switching_point_estimate(100.0) == 10.0
    assert_allclose(sr.switching_point_estimate(7.3), np.sqrt(7.3), rtol=1e-15)
    with pytest.raises(ValidationError, match="q must be > 0"):
        sr.switching_point_estimate(0.0)
    with pytest.raises(ValidationError, match="q must be > 0"):
        sr.switching_point_estimate(-2.0)


def test_detect_transitions_synthetic():
    kappas = np.logspace(-2, 4, 61)
    x = np.log10(kappas)
    curve = np.exp(-x**2 / 0.18) + np.exp(-((x - 2.0) ** 2) / 0.18)
    report = sr.detect_transitions(kappas, curve)
    assert_allclose(report.kappa_st_left, 1.0, rtol=1e-12)
    assert_allclose(report.kappa_st_right, 100.0, rtol=1e-12)
    assert_allclose(report.kappa_minimum, 10.0, rtol=1e-12)


def test_detect_transitions_errors():
    kappas = np.logspace(-2, 4, 31)
    with pytest.raises(NumericalError, match="found 0"):
        sr.detect_transitions(kappas, np.linspace(0.0, 1.0, 31))
    x = np.log10(kappas)
    three = sum(np.exp(-((x - c) ** 2) / 0.02) for c in (-1.0, 1.0, 3.0))
    with pytest.raises(NumericalError, match="found 3"):
        sr.detect_transitions(kappas, three)
    with pytest.raises(ValidationError, match="matching 1-d"):
        sr.detect_transitions(kappas, np.zeros(7))
    with pytest.raises(ValidationError, match="matching 1-d"):
        sr.detect_transitions(np.zeros(2), np.zeros(2))


def test_eigendecompose_residual_guard(multimer):
    with pytest.raises(NumericalError, match="residual"):
        sr.eigendecompose(at_kappa(multimer, 5.0), residual_rtol=1e-30)
