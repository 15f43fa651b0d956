"""Evolution laws and transfer efficiencies.

Three laws act on the same networks:

* "vonneumann": coherent evolution under the non-Hermitian effective
  Hamiltonian, d rho/dt = -i/hbar (H rho - rho H+). Sinks drain trace;
  the transfer efficiencies eta_{L,R}(T) = gamma_{L,R}/hbar *
  integral_0^T rho_ss(t) dt book the loss, so trace + eta_L + eta_R = 1
  at all times.
* "classical" and "classical-semiclassical": a hopping master equation
  on site populations with rates |H_ij| / hbar (bare) or the
  broadening-limited form 2 H_ij^2 / (hbar gamma_d) damped by a
  Lorentzian in the site detuning (semiclassical).
* "lindblad": the von Neumann term plus the secular thermal dissipator
  of the closed Hamiltonian.

All laws are linear, so the state (vectorized when quantum) follows
dy/dt = A y. The default integrator is fixed-step RK4 with the step
chosen from the generator's scale; when the required step count is
excessive the "auto" method switches to stepping with the exact matrix
exponential of an augmented generator whose extra rows accumulate the
efficiencies exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import _kernels
from .bath import BathSpec, build_generators, dissipator_superoperator, homogeneous_broadening
from .constants import HBAR_CM1_PS
from .errors import ValidationError
from .network import (SiteNetwork, closed_hamiltonian, effective_hamiltonian,
                      initial_state, validate_density_matrix)

LAWS = ("vonneumann", "classical", "classical-semiclassical", "lindblad")

# keeps the worst-case RK4 flow error under the 1e-8 positivity floor
# over 20 ps horizons (error grows ~ horizon * dt^4, worst when the
# dynamics is nearly unitary and nothing decays the accumulated phase)
DT_SAFETY = 0.01
RK4_STEP_CAP = 250_000
DEFAULT_SNAPSHOTS = 401


@dataclass(frozen=True)
class EvolutionResult:
    """Trajectory of one evolution run.

    rho is (S, N, N); classical laws store diagonal matrices so the same
    consumers work for every law. eta_L / eta_R are the running transfer
    efficiencies at the snapshot times.
    """
    times_ps: np.ndarray
    rho: np.ndarray
    eta_L: np.ndarray
    eta_R: np.ndarray
    law: str
    method: str
    dt_ps: float | None

    @property
    def populations(self) -> np.ndarray:
        return np.real(np.diagonal(self.rho, axis1=1, axis2=2))

    @property
    def final_trace(self) -> float:
        return float(np.trace(self.rho[-1]).real)

    @property
    def ledger(self) -> float:
        """trace + eta_L + eta_R at the final time; 1 up to integration error."""
        return self.final_trace + float(self.eta_L[-1] + self.eta_R[-1])


def efficiency(result: EvolutionResult) -> tuple[float, float]:
    """Final (eta_L, eta_R) of a trajectory."""
    return float(result.eta_L[-1]), float(result.eta_R[-1])


def bare_rates(net: SiteNetwork) -> np.ndarray:
    """Incoherent hop rates T_ij = |H0_ij| / hbar in ps^-1, zero diagonal."""
    t = np.abs(closed_hamiltonian(net)) / HBAR_CM1_PS
    np.fill_diagonal(t, 0.0)
    return t


def semiclassical_rates(net: SiteNetwork, gamma_d_cm1: float | None = None) -> np.ndarray:
    """Broadening-limited hop rates in ps^-1.

    T_ij = 2 H_ij^2 / (hbar gamma_d) / (1 + (dE_ij / gamma_d)^2), with
    gamma_d the homogeneous linewidth (defaults to the network bath's
    thermal value).
    """
    if gamma_d_cm1 is None:
        if net.bath is None:
            raise ValidationError("semiclassical rates need gamma_d_cm1 or a network bath")
        gamma_d_cm1 = homogeneous_broadening(net.bath)
    if not (np.isfinite(gamma_d_cm1) and gamma_d_cm1 > 0):
        raise ValidationError(f"gamma_d must be > 0, got {gamma_d_cm1}")
    h0 = closed_hamiltonian(net)
    de = np.subtract.outer(net.energies_cm1, net.energies_cm1)
    t = 2.0 * h0**2 / (HBAR_CM1_PS * gamma_d_cm1) / (1.0 + (de / gamma_d_cm1) ** 2)
    np.fill_diagonal(t, 0.0)
    return t


def _classical_generator(net: SiteNetwork, hop_rates: np.ndarray) -> np.ndarray:
    """Master-equation generator M with dp/dt = M p, sink drains included."""
    m = hop_rates.T.copy()  # m[i, j]: gain of site i from site j
    m[np.diag_indices_from(m)] -= m.sum(axis=0)
    for s in net.sinks:
        m[s.site, s.site] -= s.gamma_cm1 / HBAR_CM1_PS
    return m


def vn_superoperator(net: SiteNetwork) -> np.ndarray:
    """Vectorized -i/hbar (H rho - rho H+) in row-major convention, ps^-1."""
    h = effective_hamiltonian(net)
    eye = np.eye(net.n_sites)
    return (-1j / HBAR_CM1_PS) * (np.kron(h, eye) - np.kron(eye, h.conj()))


def lindblad_superoperator(net: SiteNetwork, bath: BathSpec | None = None,
                           dissipator: np.ndarray | None = None) -> np.ndarray:
    """von Neumann part plus the secular dissipator (precomputable, since
    it depends only on the closed Hamiltonian and the bath)."""
    if dissipator is None:
        dissipator = dissipator_superoperator(build_generators(net, bath))
    return vn_superoperator(net) + dissipator


def _sink_rows(net: SiteNetwork, size: int, flat_index) -> np.ndarray:
    """Coefficient rows whose time integrals are eta_L and eta_R."""
    rows = np.zeros((2, size), dtype=complex)
    for pos, label in enumerate(("L", "R")):
        for s in net.sinks:
            if s.label == label:
                rows[pos, flat_index(s.site)] = s.gamma_cm1 / HBAR_CM1_PS
    return rows


def default_timestep(net: SiteNetwork, law: str, bath: BathSpec | None = None,
                     gamma_d_cm1: float | None = None) -> float:
    """Stability step: DT_SAFETY * hbar / max-abs-row-sum of the effective
    Hamiltonian for quantum laws (also capped by the dissipator scale for
    lindblad), DT_SAFETY / max-abs-row-sum of the rate generator for the
    classical laws."""
    if law not in LAWS:
        raise ValidationError(f"unknown law {law!r}; expected one of {LAWS}")
    if law in ("vonneumann", "lindblad"):
        h = effective_hamiltonian(net)
        dt = DT_SAFETY * HBAR_CM1_PS / np.abs(h).sum(axis=1).max()
        if law == "lindblad":
            d = dissipator_superoperator(build_generators(net, bath))
            dt = min(dt, DT_SAFETY / np.abs(d).sum(axis=1).max())
        return float(dt)
    rates = (bare_rates(net) if law == "classical"
             else semiclassical_rates(net, gamma_d_cm1))
    m = _classical_generator(net, rates)
    return float(DT_SAFETY / np.abs(m).sum(axis=1).max())


def _augment(gen: np.ndarray, rows: np.ndarray) -> np.ndarray:
    n = gen.shape[0]
    out = np.zeros((n + len(rows), n + len(rows)), dtype=complex)
    out[:n, :n] = gen
    out[n:, :n] = rows
    return out


def _run(gen, y0, rows, horizon_ps, dt_ps, dt_max, method, n_snapshots):
    """Advance dy/dt = gen @ y, accumulating the efficiency rows.

    Returns (times, snaps, etas, method_used, dt_used).
    """
    if horizon_ps <= 0 or not np.isfinite(horizon_ps):
        raise ValidationError(f"horizon must be > 0 ps, got {horizon_ps}")
    if n_snapshots < 2:
        raise ValidationError(f"n_snapshots must be >= 2, got {n_snapshots}")
    if method not in ("auto", "rk4", "expm"):
        raise ValidationError(f"unknown method {method!r}; expected auto, rk4, or expm")
    if dt_ps is None:
        dt_ps = dt_max
    elif dt_ps > dt_max:
        raise ValidationError(
            f"dt_ps={dt_ps:g} exceeds the stability limit; required dt <= {dt_max:g} ps")
    elif dt_ps <= 0:
        raise ValidationError(f"dt_ps must be > 0, got {dt_ps}")
    n_steps = max(1, math.ceil(horizon_ps / dt_ps))
    if method == "auto":
        method = "rk4" if n_steps <= RK4_STEP_CAP else "expm"
    if method == "rk4":
        dt = horizon_ps / n_steps
        stride = max(1, math.ceil(n_steps / (n_snapshots - 1)))
        steps, snaps, etas = _kernels.rk4_linear(gen, y0, dt, n_steps, rows, stride)
        return steps * dt, snaps, etas, "rk4", dt
    n_out = n_snapshots - 1
    aug = _augment(gen, rows)
    prop = expm(aug * (horizon_ps / n_out))
    y0_aug = np.concatenate([y0, np.zeros(len(rows), dtype=complex)])
    steps, snaps = _kernels.propagate_linear(prop, y0_aug, n_out, 1)
    times = steps * (horizon_ps / n_out)
    return times, snaps[:, : gen.shape[0]], snaps[:, gen.shape[0]:].real, "expm", None


def _quantum_result(net, gen, rho0, law, horizon_ps, dt_ps, method, n_snapshots, dt_max):
    n = net.n_sites
    rows = _sink_rows(net, n * n, lambda s: s * n + s)
    times, snaps, etas, used, dt = _run(
        gen, rho0.ravel(), rows, horizon_ps, dt_ps, dt_max, method, n_snapshots)
    return EvolutionResult(times_ps=times, rho=snaps.reshape(-1, n, n),
                           eta_L=etas[:, 0], eta_R=etas[:, 1],
                           law=law, method=used, dt_ps=dt)


def evolve_von_neumann(net: SiteNetwork, rho0: np.ndarray | None = None,
                       horizon_ps: float = 20.0, dt_ps: float | None = None,
                       method: str = "auto", n_snapshots: int = DEFAULT_SNAPSHOTS,
                       initial: str = "symmetric_pure") -> EvolutionResult:
    """Coherent evolution under the effective Hamiltonian."""
    if rho0 is None:
        rho0 = initial_state(net, initial)
    rho0 = validate_density_matrix(rho0, net.n_sites)
    dt_max = default_timestep(net, "vonneumann")
    return _quantum_result(net, vn_superoperator(net), rho0, "vonneumann",
                           horizon_ps, dt_ps, method, n_snapshots, dt_max)


def evolve_lindblad(net: SiteNetwork, rho0: np.ndarray | None = None,
                    horizon_ps: float = 20.0, dt_ps: float | None = None,
                    method: str = "auto", n_snapshots: int = DEFAULT_SNAPSHOTS,
                    initial: str = "symmetric_pure",
                    bath: BathSpec | None = None) -> EvolutionResult:
    """Effective-Hamiltonian evolution with the secular thermal dissipator."""
    if rho0 is None:
        rho0 = initial_state(net, initial)
    rho0 = validate_density_matrix(rho0, net.n_sites)
    gen = lindblad_superoperator(net, bath)
    h = effective_hamiltonian(net)
    dt_max = min(DT_SAFETY * HBAR_CM1_PS / np.abs(h).sum(axis=1).max(),
                 DT_SAFETY / np.abs(gen - vn_superoperator(net)).sum(axis=1).max())
    return _quantum_result(net, gen, rho0, "lindblad",
                           horizon_ps, dt_ps, method, n_snapshots, dt_max)


def classical_evolve(net: SiteNetwork, p0: np.ndarray | None = None,
                     horizon_ps: float = 20.0, dt_ps: float | None = None,
                     method: str = "auto", n_snapshots: int = DEFAULT_SNAPSHOTS,
                     initial: str = "symmetric_pure", rates: str = "bare",
                     gamma_d_cm1: float | None = None) -> EvolutionResult:
    """Hopping master equation on site populations.

    rates selects the hop law: "bare" or "semiclassical". The trajectory
    stores diagonal density matrices so quantum consumers apply as-is.
    """
    n = net.n_sites
    if p0 is None:
        p0 = np.real(np.diag(initial_state(net, initial)))
    p0 = np.asarray(p0, dtype=float)
    if p0.shape != (n,):
        raise ValidationError(f"p0 shape {p0.shape}, expected {(n,)}")
    if p0.min() < 0 or not 0 < p0.sum() <= 1 + 1e-12:
        raise ValidationError("p0 must be nonnegative with total in (0, 1]")
    if rates == "bare":
        law, hop = "classical", bare_rates(net)
    elif rates == "semiclassical":
        law, hop = "classical-semiclassical", semiclassical_rates(net, gamma_d_cm1)
    else:
        raise ValidationError(f"unknown rates {rates!r}; expected bare or semiclassical")
    gen = _classical_generator(net, hop)
    dt_max = float(DT_SAFETY / np.abs(gen).sum(axis=1).max())
    rows = _sink_rows(net, n, lambda s: s)
    times, snaps, etas, used, dt = _run(
        gen.astype(complex), p0.astype(complex), rows,
        horizon_ps, dt_ps, dt_max, method, n_snapshots)
    rho = np.zeros((len(times), n, n), dtype=complex)
    rho[:, np.arange(n), np.arange(n)] = snaps.real
    return EvolutionResult(times_ps=times, rho=rho, eta_L=etas[:, 0], eta_R=etas[:, 1],
                           law=law, method=used, dt_ps=dt)


def evolve(net: SiteNetwork, law: str, **kwargs) -> EvolutionResult:
    """Dispatch to the law-specific evolution."""
    if law == "vonneumann":
        return evolve_von_neumann(net, **kwargs)
    if law == "lindblad":
        return evolve_lindblad(net, **kwargs)
    if law == "classical":
        return classical_evolve(net, rates="bare", **kwargs)
    if law == "classical-semiclassical":
        return classical_evolve(net, rates="semiclassical", **kwargs)
    raise ValidationError(f"unknown law {law!r}; expected one of {LAWS}")


def final_efficiencies(net: SiteNetwork, law: str = "vonneumann",
                       horizon_ps: float = 20.0, initial: str = "symmetric_pure",
                       bath: BathSpec | None = None,
                       gamma_d_cm1: float | None = None,
                       dissipator: np.ndarray | None = None) -> tuple[float, float, float]:
    """(eta_L, eta_R, final trace) at the horizon via one exact
    exponential of the augmented generator; the fast path for sweeps."""
    if horizon_ps <= 0 or not np.isfinite(horizon_ps):
        raise ValidationError(f"horizon must be > 0 ps, got {horizon_ps}")
    n = net.n_sites
    if law in ("vonneumann", "lindblad"):
        gen = (vn_superoperator(net) if law == "vonneumann"
               else lindblad_superoperator(net, bath, dissipator))
        y0 = initial_state(net, initial).ravel()
        rows = _sink_rows(net, n * n, lambda s: s * n + s)
        trace_idx = np.arange(n) * n + np.arange(n)
    else:
        rates = "bare" if law == "classical" else "semiclassical"
        hop = bare_rates(net) if rates == "bare" else semiclassical_rates(net, gamma_d_cm1)
        gen = _classical_generator(net, hop).astype(complex)
        y0 = np.real(np.diag(initial_state(net, initial))).astype(complex)
        rows = _sink_rows(net, n, lambda s: s)
        trace_idx = np.arange(n)
    z0 = np.concatenate([y0, np.zeros(2, dtype=complex)])
    z = expm(_augment(gen, rows) * horizon_ps) @ z0
    trace = float(z[trace_idx].real.sum())
    return float(z[-2].real), float(z[-1].real), trace
