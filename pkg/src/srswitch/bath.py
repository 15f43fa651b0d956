"""Ohmic thermal environment and secular dissipator construction.

Each site couples to an independent bath with Ohmic spectral density
J(omega) = (E_R / omega_c) * omega * exp(-omega / omega_c), written here
as a function of the transition energy eps = hbar * omega in cm^-1. The
downward/upward rates,

    gamma(eps) = 2 pi / hbar * [ J(eps) (1 + n(eps)) + J(-eps) n(-eps) ],

satisfy detailed balance gamma(eps) / gamma(-eps) = exp(eps / kB T) and
approach the finite limit gamma(0) = 2 pi E_R kB T / (hbar omega_c). The
corresponding homogeneous linewidth gamma_T = hbar * gamma(0) also sets
the default dephasing width of the semiclassical hopping rates.

Jump operators are the secular (Davies) generators of the closed
Hamiltonian: for each site projector |m><m| and each binned Bohr energy
eps = E' - E, A_m(eps) = sum <E|m><m|E'> |E><E'|, so a generator with
eps > 0 transfers amplitude downward in energy and the stationary state
of the sink-free dissipator is the Gibbs state of H0.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import HBAR_CM1_PS, KB_CM1_PER_K
from .errors import ValidationError
from .network import BathSpec, SiteNetwork, closed_hamiltonian

# two Bohr energies are identified when closer than this relative scale
FREQUENCY_BIN_RTOL = 1e-6


def bose_occupation(eps_cm1: float, temperature_K: float) -> float:
    """Thermal occupation 1 / (exp(eps / kB T) - 1) for eps > 0."""
    if temperature_K <= 0:
        raise ValidationError(f"temperature must be > 0, got {temperature_K}")
    if eps_cm1 <= 0:
        raise ValidationError(f"occupation defined for eps > 0, got {eps_cm1}")
    # exp(-x) / (1 - exp(-x)) == 1 / expm1(x) without overflow for large x
    x = eps_cm1 / (KB_CM1_PER_K * temperature_K)
    return float(np.exp(-x) / -np.expm1(-x))


def spectral_density(eps_cm1, bath: BathSpec):
    """Ohmic J(eps) = (E_R / omega_c) * eps * exp(-eps / omega_c), zero
    for eps <= 0. Accepts scalars or arrays; result in cm^-1."""
    eps = np.asarray(eps_cm1, dtype=float)
    j = (bath.reorganization_cm1 / bath.cutoff_cm1) * eps * np.exp(-eps / bath.cutoff_cm1)
    return np.where(eps > 0, j, 0.0) if eps.ndim else (float(j) if eps > 0 else 0.0)


def homogeneous_broadening(bath: BathSpec) -> float:
    """Thermal linewidth gamma_T = 2 pi kB T E_R / omega_c in cm^-1."""
    return float(2.0 * np.pi * KB_CM1_PER_K * bath.temperature_K
                 * bath.reorganization_cm1 / bath.cutoff_cm1)


def bath_rate(eps_cm1: float, bath: BathSpec) -> float:
    """Transition rate gamma(eps) in ps^-1 for Bohr energy eps = E' - E.

    eps > 0 is a downward jump (stimulated + spontaneous emission into
    the bath), eps < 0 the thermally activated reverse; eps = 0 gets the
    pure-dephasing limit gamma_T / hbar.
    """
    if eps_cm1 > 0:
        val = spectral_density(eps_cm1, bath) * (1.0 + bose_occupation(eps_cm1, bath.temperature_K))
    elif eps_cm1 < 0:
        val = spectral_density(-eps_cm1, bath) * bose_occupation(-eps_cm1, bath.temperature_K)
    else:
        val = (bath.reorganization_cm1 * KB_CM1_PER_K * bath.temperature_K
               / bath.cutoff_cm1)
    return float(2.0 * np.pi * val / HBAR_CM1_PS)


def _bin_energies(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cluster values whose spacing is below FREQUENCY_BIN_RTOL * max(1, |v|).

    Returns (representatives, index) with index mapping each input value
    to its cluster.
    """
    order = np.argsort(values, kind="stable")
    reps, idx = [], np.empty(len(values), dtype=int)
    members = []
    for pos in order:
        v = values[pos]
        if reps and abs(v - reps[-1]) <= FREQUENCY_BIN_RTOL * max(1.0, abs(v)):
            members[-1].append(pos)
            reps[-1] = np.mean([values[p] for p in members[-1]])
        else:
            reps.append(v)
            members.append([pos])
    for k, group in enumerate(members):
        idx[group] = k
    return np.asarray(reps), idx


def bohr_energies(net: SiteNetwork) -> np.ndarray:
    """Distinct binned Bohr energies E_b - E_a of the closed Hamiltonian."""
    evals = np.linalg.eigvalsh(closed_hamiltonian(net))
    diffs = np.subtract.outer(evals, evals).ravel()
    reps, _ = _bin_energies(diffs)
    return reps


@dataclass(frozen=True)
class LindbladGenerators:
    """Secular jump operators per site and binned Bohr energy.

    operators[m, f] is A_m(eps_f); rates_ps[f] the bath rate gamma(eps_f).
    Completeness: sum over f of operators[m, f] equals the site projector
    |m><m| expressed in the site basis.
    """
    energies_cm1: np.ndarray
    rates_ps: np.ndarray
    operators: np.ndarray

    @property
    def n_sites(self) -> int:
        return self.operators.shape[0]


def build_generators(net: SiteNetwork, bath: BathSpec | None = None) -> LindbladGenerators:
    """Davies generators of the closed Hamiltonian with Ohmic rates.

    Bath defaults to the network's own; one of the two must be present.
    """
    bath = bath or net.bath
    if bath is None:
        raise ValidationError("no bath given and the network carries none")
    h0 = closed_hamiltonian(net)
    evals, vecs = np.linalg.eigh(h0)
    n = len(evals)
    diffs = np.subtract.outer(evals, evals)  # diffs[a, b] = E_a - E_b
    reps, idx = _bin_energies(-diffs.ravel())  # eps = E_b - E_a
    idx = idx.reshape(n, n)
    ops = np.zeros((n, len(reps), n, n), dtype=complex)
    for a in range(n):
        for b in range(n):
            f = idx[a, b]
            for m in range(n):
                amp = np.conj(vecs[m, a]) * vecs[m, b]
                if amp != 0:
                    ops[m, f] += amp * np.outer(vecs[:, a], np.conj(vecs[:, b]))
    rates = np.array([bath_rate(eps, bath) for eps in reps])
    return LindbladGenerators(energies_cm1=reps, rates_ps=rates, operators=ops)


def dissipator_superoperator(gens: LindbladGenerators) -> np.ndarray:
    """Vectorized dissipator sum_mf gamma_f D[A_mf] acting on vec(rho)
    in row-major convention, in ps^-1."""
    n = gens.operators.shape[-1]
    eye = np.eye(n)
    d = np.zeros((n * n, n * n), dtype=complex)
    for m in range(gens.n_sites):
        for f, rate in enumerate(gens.rates_ps):
            if rate == 0:
                continue
            a = gens.operators[m, f]
            ada = a.conj().T @ a
            d += rate * (np.kron(a, a.conj())
                         - 0.5 * (np.kron(ada, eye) + np.kron(eye, ada.T)))
    return d


def thermal_state(net: SiteNetwork, temperature_K: float) -> np.ndarray:
    """Gibbs state exp(-H0 / kB T) / Z of the closed Hamiltonian."""
    if temperature_K <= 0:
        raise ValidationError(f"temperature must be > 0, got {temperature_K}")
    evals, vecs = np.linalg.eigh(closed_hamiltonian(net))
    w = np.exp(-(evals - evals.min()) / (KB_CM1_PER_K * temperature_K))
    w /= w.sum()
    return (vecs * w) @ vecs.conj().T
