"""Shared fixtures and hypothesis configuration for the test suite."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

import srswitch as sr

settings.register_profile(
    "suite",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def at_kappa(net, kappa_L, q=100.0):
    """Return a copy of ``net`` with sink strengths set from (kappa_L, q)."""
    gamma_L = 2.0 * sr.reference_coupling(net) * kappa_L
    return sr.with_sink_strengths(net, gamma_L, gamma_L / q)


def random_network(rng, n=8):
    """Random symmetric n-site network with two sinks, for property tests."""
    coup = rng.normal(0.0, 100.0, size=(n, n))
    coup = 0.5 * (coup + coup.T)
    np.fill_diagonal(coup, 0.0)
    energies = rng.normal(0.0, 200.0, size=n)
    left, right = rng.choice(n, size=2, replace=False)
    gamma_L, gamma_R = 10.0 ** rng.uniform(-1.0, 3.0, size=2)
    sinks = (
        sr.Sink(site=int(left), label="L", gamma_cm1=float(gamma_L)),
        sr.Sink(site=int(right), label="R", gamma_cm1=float(gamma_R)),
    )
    return sr.SiteNetwork(energies, coup, sinks, (0, 1))


@pytest.fixture(scope="session")
def multimer():
    return sr.build_multimer()


@pytest.fixture(scope="session")
def thermal_bath():
    return sr.BathSpec(temperature_K=300.0, reorganization_cm1=35.0,
                       cutoff_cm1=150.0)
