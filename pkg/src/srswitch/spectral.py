"""Spectral analysis of the non-Hermitian effective Hamiltonian.

Complex eigenvalues E_k - i Gamma_k / 2 of the effective Hamiltonian
carry the decay widths Gamma_k = -2 Im(lambda_k). Summed over all states
the widths equal gamma_L + gamma_R, so superradiance shows up as a
segregation of that fixed budget: past a superradiance transition one
state absorbs nearly the whole width of its sink while the remaining
(subradiant) states narrow. The participation ratio
PR = (sum |c_n|^2)^2 / sum |c_n|^4 measures how many sites a state
occupies; sink-site overlaps |<s|Psi_k>|^2 measure how exposed it is to
each loss channel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .network import SiteNetwork, effective_hamiltonian

# second-largest width counts as superradiant too when it reaches this
# fraction of the largest (covers gamma_L = gamma_R, where the two sink
# states broaden together and the ratio is exactly 1)
_SR_TIE_FRACTION = 0.5


@dataclass(frozen=True)
class SpectralResult:
    """Eigensystem of one effective Hamiltonian, sorted by Re(E).

    states holds unit-norm right eigenvectors as columns; overlap_L and
    overlap_R are |<sink site|Psi_k>|^2 (zeros when the network lacks
    that sink).
    """
    energies_cm1: np.ndarray
    widths_cm1: np.ndarray
    states: np.ndarray
    participation: np.ndarray
    overlap_L: np.ndarray
    overlap_R: np.ndarray

    @property
    def n_states(self) -> int:
        return len(self.energies_cm1)


def participation_ratio(states: np.ndarray) -> np.ndarray:
    """PR of each column vector; scale invariant, 1 <= PR <= N."""
    states = np.asarray(states, dtype=complex)
    if states.ndim == 1:
        states = states[:, None]
    if states.ndim != 2:
        raise ValidationError("states must be a vector or a matrix of column vectors")
    p = np.abs(states) ** 2
    return p.sum(axis=0) ** 2 / (p**2).sum(axis=0)


def eigendecompose(net: SiteNetwork, residual_rtol: float = 1e-10) -> SpectralResult:
    """Eigensystem of the network's effective Hamiltonian.

    Raises NumericalError when any eigenpair residual ||H v - lambda v||
    exceeds residual_rtol * ||H||.
    """
    h = effective_hamiltonian(net)
    evals, vecs = np.linalg.eig(h)
    vecs = vecs / np.linalg.norm(vecs, axis=0, keepdims=True)
    hnorm = np.linalg.norm(h, 2)
    resid = np.linalg.norm(h @ vecs - vecs * evals, axis=0)
    if not np.all(resid <= residual_rtol * hnorm):
        raise NumericalError(
            f"eigenpair residual {resid.max():.3e} exceeds {residual_rtol:.1e} * ||H||")
    order = np.argsort(evals.real, kind="stable")
    evals, vecs = evals[order], vecs[:, order]

    def overlap(label):
        for s in net.sinks:
            if s.label == label:
                return np.abs(vecs[s.site]) ** 2
        return np.zeros(len(evals))

    return SpectralResult(
        energies_cm1=evals,
        widths_cm1=-2.0 * evals.imag,
        states=vecs,
        participation=participation_ratio(vecs),
        overlap_L=overlap("L"),
        overlap_R=overlap("R"),
    )


def mean_level_spacing(spectral: SpectralResult) -> float:
    """Spread of Re(E) divided by N - 1."""
    re = spectral.energies_cm1.real
    n = len(re)
    if n < 2:
        raise ValidationError("mean level spacing needs at least 2 states")
    return float(re.max() - re.min()) / (n - 1)


def subradiant_average_width(spectral: SpectralResult, n_exclude: int = 2) -> float:
    """Average width of the N - n_exclude narrowest states over the mean
    level spacing.

    With one sink per end the two broadest states carry the superradiant
    weight, hence the default n_exclude = 2. The result is dimensionless
    and, for perturbatively small total width, linear in it.
    """
    w = spectral.widths_cm1
    if not 0 < n_exclude < len(w):
        raise ValidationError(f"n_exclude must be in (0, {len(w)}), got {n_exclude}")
    sub = np.sort(w)[: len(w) - n_exclude]
    return float(sub.mean() / mean_level_spacing(spectral))


def superradiant_indices(spectral: SpectralResult) -> tuple[int, ...]:
    """Indices of the superradiant state(s): the largest-width state,
    plus the runner-up when their widths are within _SR_TIE_FRACTION.
    """
    w = spectral.widths_cm1
    order = np.argsort(-w)
    out = [int(order[0])]
    if len(w) > 1 and w[order[1]] >= _SR_TIE_FRACTION * w[order[0]]:
        out.append(int(order[1]))
    return tuple(out)


def partial_widths(spectral: SpectralResult, net: SiteNetwork) -> dict[str, float]:
    """Subradiant partial widths Gamma_X = gamma_X * sum_k |<s_X|Psi_k>|^2.

    The sum runs over the subradiant states only (superradiant ones
    excluded per superradiant_indices). Between the two superradiance
    transitions Gamma_L falls like 1/kappa_L while Gamma_R grows like
    kappa_L, and their crossing marks the efficiency switching point.
    """
    sr = set(superradiant_indices(spectral))
    sub = [k for k in range(spectral.n_states) if k not in sr]
    out = {}
    for s in net.sinks:
        ov = np.abs(spectral.states[s.site, sub]) ** 2
        out[s.label] = float(s.gamma_cm1 * ov.sum())
    return out


def switching_point_estimate(q: float) -> float:
    """Predicted switching point kappa_L = sqrt(q) from balancing the
    subradiant partial widths."""
    if q <= 0:
        raise ValidationError(f"q must be > 0, got {q}")
    return float(np.sqrt(q))


@dataclass(frozen=True)
class TransitionReport:
    """Superradiance transitions read off a width scan."""
    kappa_st_left: float
    kappa_st_right: float
    kappa_minimum: float


def detect_transitions(kappas: np.ndarray, curve: np.ndarray) -> TransitionReport:
    """Locate the two superradiance transitions on a width scan.

    The transitions are the interior local maxima (3-point stencil) of
    the normalized subradiant average width as a function of kappa_L;
    the report also carries the minimum between them, which estimates
    the switching point. Raises NumericalError unless exactly two maxima
    are resolved.
    """
    kappas = np.asarray(kappas, dtype=float)
    curve = np.asarray(curve, dtype=float)
    if kappas.shape != curve.shape or kappas.ndim != 1 or len(kappas) < 3:
        raise ValidationError("scan needs matching 1-d arrays of length >= 3")
    maxima = [i for i in range(1, len(curve) - 1)
              if curve[i] > curve[i - 1] and curve[i] > curve[i + 1]]
    if len(maxima) != 2:
        raise NumericalError(
            f"expected exactly 2 interior maxima in the width scan, found {len(maxima)}; "
            "widen the kappa range or refine the grid")
    lo, hi = maxima
    between = slice(lo, hi + 1)
    k_min = int(np.argmin(curve[between])) + lo
    return TransitionReport(
        kappa_st_left=float(kappas[lo]),
        kappa_st_right=float(kappas[hi]),
        kappa_minimum=float(kappas[k_min]),
    )
