"""Contracts shared by the compiled and pure integration kernels."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import expm

from srswitch._kernels import BACKEND, available_backends

BACKENDS = available_backends()


def _random_system(seed, n=6, m=2):
    rng = np.random.default_rng(seed)
    a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / 6.0
    a -= 0.5 * np.eye(n)  # mildly dissipative so trajectories stay bounded
    y0 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    obs = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    return a, y0, obs


def test_compiled_backend_is_active():
    assert BACKEND in BACKENDS
    assert "pure" in BACKENDS


@pytest.mark.parametrize("name", sorted(BACKENDS))
@pytest.mark.parametrize("n_steps,stride", [(103, 10), (16, 1), (7, 100)])
def test_snapshot_schedule(name, n_steps, stride):
    kern = BACKENDS[name]
    a, y0, obs = _random_system(0, n=4, m=1)
    steps, snaps, ints = kern.rk4_linear(a, y0, 1e-3, n_steps, obs, stride)
    expected = list(range(0, n_steps + 1, stride))
    if expected[-1] != n_steps:
        expected.append(n_steps)
    assert list(steps) == expected
    assert snaps.shape == (len(expected), 4)
    assert ints.shape == (len(expected), 1)
    assert_allclose(snaps[0], y0, rtol=0, atol=0)
    assert ints[0] == 0.0


@pytest.mark.parametrize("stride", [1, 7, 100])
def test_backends_agree(stride):
    if len(BACKENDS) < 2:
        pytest.skip("only one backend importable")
    a, y0, obs = _random_system(1)
    results = [kern.rk4_linear(a, y0, 2e-3, 500, obs, stride)
               for kern in BACKENDS.values()]
    (s1, y1, i1), (s2, y2, i2) = results
    assert np.array_equal(s1, s2)
    assert_allclose(y1, y2, rtol=0, atol=1e-14)
    assert_allclose(i1, i2, rtol=0, atol=1e-14)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_rk4_matches_matrix_exponential(name):
    kern = BACKENDS[name]
    a, y0, _ = _random_system(2)
    dt, n_steps = 1e-3, 2000
    steps, snaps, _ = kern.rk4_linear(a, y0, dt, n_steps, np.zeros((0, 6)), 250)
    for k, y in zip(steps, snaps):
        assert_allclose(y, expm(a * (k * dt)) @ y0, atol=1e-10)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_quadrature_identities_at_every_step(name):
    """Recorded integrals follow composite Simpson with a trapezoid tail.

    With snapshots at every step the accumulator is reconstructible from
    the snapshots themselves, so the identity holds to rounding.
    """
    kern = BACKENDS[name]
    a, y0, obs = _random_system(3, m=3)
    dt, n_steps = 5e-3, 41
    steps, snaps, ints = kern.rk4_linear(a, y0, dt, n_steps, obs, 1)
    f = (snaps @ obs.T).real
    acc = np.zeros(3)
    for k in range(n_steps + 1):
        if k % 2 == 0 and k > 0:
            acc = acc + dt / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k])
        want = acc if k % 2 == 0 else acc + 0.5 * dt * (f[k - 1] + f[k])
        assert_allclose(ints[k], want, rtol=0, atol=1e-13)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_quadrature_is_fourth_order(name):
    """Halving dt shrinks the integral error ~16x on even step counts."""
    kern = BACKENDS[name]
    w = 3.0
    a = np.array([[1j * w]])
    y0 = np.array([1.0 + 0j])
    obs = np.array([[1.0 + 0j]])
    horizon = 2.0
    exact = np.sin(w * horizon) / w
    errs = []
    for n_steps in (200, 400):
        _, _, ints = kern.rk4_linear(a, y0, horizon / n_steps, n_steps, obs,
                                     n_steps)
        errs.append(abs(ints[-1, 0] - exact))
    assert errs[0] > 1e-12  # above the rounding floor, ratio is meaningful
    assert errs[0] / errs[1] > 10.0


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_propagate_linear_matches_matrix_power(name):
    kern = BACKENDS[name]
    rng = np.random.default_rng(4)
    p = expm((rng.standard_normal((5, 5)) - 2.0 * np.eye(5)) * 0.1)
    y0 = rng.standard_normal(5) + 0j
    steps, snaps = kern.propagate_linear(p, y0, 13, 5)
    assert list(steps) == [0, 5, 10, 13]
    for k, y in zip(steps, snaps):
        assert_allclose(y, np.linalg.matrix_power(p, k) @ y0, atol=1e-12)


def test_propagate_backends_agree():
    if len(BACKENDS) < 2:
        pytest.skip("only one backend importable")
    rng = np.random.default_rng(5)
    p = (rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))) / 4.0
    y0 = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    outs = [kern.propagate_linear(p, y0, 9, 2) for kern in BACKENDS.values()]
    (s1, y1), (s2, y2) = outs
    assert np.array_equal(s1, s2)
    assert_allclose(y1, y2, rtol=0, atol=1e-13)
