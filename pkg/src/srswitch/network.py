"""Site networks with irreversible sinks.

A network is a set of N sites with on-site energies (cm^-1), a real
symmetric coupling matrix (cm^-1), and one or more sinks: sites that leak
probability irreversibly at rate gamma / hbar. The default geometry is the
paradigmatic multimer: a linear chain folded so that a strongly coupled
special pair (sites 1 and 2) sits at the center, the remaining sites
alternate onto the left and right arms, and the two chain ends host the
left (L) and right (R) sinks. For six sites the chain order is
5 - 3 - 1 - 2 - 4 - 6.

Conventions: in-memory site indices are 0-based; model files and CLI
output are 1-based. The non-Hermitian effective Hamiltonian carries
-i gamma/2 on each sink site's diagonal, so the total decay width summed
over eigenstates equals gamma_L + gamma_R.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ValidationError

_SINK_LABELS = ("L", "R")


def _frozen_array(a, dtype=float):
    out = np.array(a, dtype=dtype)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Sink:
    """An irreversible loss channel attached to one site.

    site is 0-based; gamma_cm1 is the decay width in cm^-1 (the
    probability leaves at rate gamma / hbar per unit time).
    """
    site: int
    label: str
    gamma_cm1: float

    def __post_init__(self):
        if self.label not in _SINK_LABELS:
            raise ValidationError(f"sink label must be one of {_SINK_LABELS}, got {self.label!r}")
        if not np.isfinite(self.gamma_cm1) or self.gamma_cm1 < 0:
            raise ValidationError(f"sink gamma must be finite and >= 0, got {self.gamma_cm1}")


@dataclass(frozen=True)
class BathSpec:
    """Ohmic thermal bath parameters: J(omega) = E_R/omega_c * omega * exp(-omega/omega_c)."""
    temperature_K: float
    reorganization_cm1: float
    cutoff_cm1: float

    def __post_init__(self):
        if not (np.isfinite(self.temperature_K) and self.temperature_K > 0):
            raise ValidationError(f"bath temperature must be > 0, got {self.temperature_K}")
        if not (np.isfinite(self.reorganization_cm1) and self.reorganization_cm1 >= 0):
            raise ValidationError(
                f"reorganization energy must be >= 0, got {self.reorganization_cm1}")
        if not (np.isfinite(self.cutoff_cm1) and self.cutoff_cm1 > 0):
            raise ValidationError(f"bath cutoff must be > 0, got {self.cutoff_cm1}")


@dataclass(frozen=True)
class SiteNetwork:
    """Immutable site network; arrays are read-only views.

    energies_cm1: (N,) on-site energies.
    couplings_cm1: (N, N) real symmetric, zero diagonal.
    sinks: one Sink per leaky site, labels unique.
    special_pair: 0-based pair of sites whose symmetric superposition is
        the canonical initial excitation.
    bath: optional thermal environment attached to the model.
    """
    energies_cm1: np.ndarray
    couplings_cm1: np.ndarray
    sinks: tuple[Sink, ...]
    special_pair: tuple[int, int]
    bath: BathSpec | None = None

    def __post_init__(self):
        e = _frozen_array(self.energies_cm1)
        c = _frozen_array(self.couplings_cm1)
        object.__setattr__(self, "energies_cm1", e)
        object.__setattr__(self, "couplings_cm1", c)
        object.__setattr__(self, "sinks", tuple(self.sinks))
        object.__setattr__(self, "special_pair", tuple(int(i) for i in self.special_pair))
        _validate_network(self)

    @property
    def n_sites(self) -> int:
        return len(self.energies_cm1)

    def sink(self, label: str) -> Sink:
        for s in self.sinks:
            if s.label == label:
                return s
        raise ValidationError(f"network has no sink labeled {label!r}")


def _validate_network(net: SiteNetwork):
    e, c = net.energies_cm1, net.couplings_cm1
    n = len(e)
    if n < 2:
        raise ValidationError(f"network needs at least 2 sites, got {n}")
    if not np.all(np.isfinite(e)):
        raise ValidationError("site energies must be finite")
    if c.shape != (n, n):
        raise ValidationError(f"coupling matrix shape {c.shape} does not match {n} sites")
    if not np.all(np.isfinite(c)):
        raise ValidationError("couplings must be finite")
    if not np.array_equal(c, c.T):
        raise ValidationError("coupling matrix must be symmetric")
    if np.any(np.diag(c) != 0):
        raise ValidationError("self-couplings are not allowed")
    seen_sites, seen_labels = set(), set()
    for s in net.sinks:
        if not 0 <= s.site < n:
            raise ValidationError(f"sink site {s.site} out of range for {n} sites")
        if s.site in seen_sites:
            raise ValidationError(f"multiple sinks on site {s.site}")
        if s.label in seen_labels:
            raise ValidationError(f"duplicate sink label {s.label!r}")
        seen_sites.add(s.site)
        seen_labels.add(s.label)
    i, j = net.special_pair
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise ValidationError(f"special pair {net.special_pair} invalid for {n} sites")


@dataclass(frozen=True)
class CouplingRatios:
    """Dimensionless sink strengths kappa = gamma / (2 * Omega_ref) and their ratio q."""
    kappa_L: float
    kappa_R: float
    q: float = field(init=False)

    def __post_init__(self):
        if self.kappa_L < 0 or self.kappa_R < 0:
            raise ValidationError("kappa values must be >= 0")
        q = self.kappa_L / self.kappa_R if self.kappa_R > 0 else np.inf
        object.__setattr__(self, "q", q)


def build_multimer(omega_cm1: float = 100.0, omega_sp_cm1: float = 200.0,
                   gamma_L_cm1: float = 200.0, gamma_R_cm1: float = 2.0,
                   n_sites: int = 6, site_energy_cm1: float = 0.0,
                   bath: BathSpec | None = None) -> SiteNetwork:
    """Build the folded-chain multimer with a central special pair.

    Sites 1 and 2 (1-based) form the special pair coupled by omega_sp;
    odd sites extend the left arm, even sites the right arm, all with
    coupling omega. The left sink sits on site n_sites - 1 and the right
    sink on site n_sites. n_sites must be even and >= 4.
    """
    if n_sites < 4 or n_sites % 2:
        raise ValidationError(f"n_sites must be even and >= 4, got {n_sites}")
    if omega_cm1 <= 0 or not np.isfinite(omega_cm1):
        raise ValidationError(f"omega must be > 0, got {omega_cm1}")
    if not np.isfinite(omega_sp_cm1):
        raise ValidationError(f"omega_sp must be finite, got {omega_sp_cm1}")
    c = np.zeros((n_sites, n_sites))
    c[0, 1] = c[1, 0] = omega_sp_cm1
    for k in range(n_sites - 2):  # (1,3), (2,4), (3,5), ... in 1-based labels
        c[k, k + 2] = c[k + 2, k] = omega_cm1
    sinks = (Sink(n_sites - 2, "L", float(gamma_L_cm1)),
             Sink(n_sites - 1, "R", float(gamma_R_cm1)))
    return SiteNetwork(np.full(n_sites, float(site_energy_cm1)), c, sinks, (0, 1), bath)


def reference_coupling(net: SiteNetwork) -> float:
    """Largest |coupling| incident to any sink site; sets the kappa scale."""
    if not net.sinks:
        raise ValidationError("network has no sinks")
    cols = [np.abs(net.couplings_cm1[s.site]) for s in net.sinks]
    ref = float(np.max(cols))
    if ref == 0:
        raise ValidationError("sink sites are uncoupled; reference coupling undefined")
    return ref


def coupling_ratios(net: SiteNetwork) -> CouplingRatios:
    ref = reference_coupling(net)
    return CouplingRatios(net.sink("L").gamma_cm1 / (2 * ref),
                          net.sink("R").gamma_cm1 / (2 * ref))


def with_sink_strengths(net: SiteNetwork, gamma_L_cm1: float,
                        gamma_R_cm1: float) -> SiteNetwork:
    """Same geometry, new sink widths."""
    gammas = {"L": float(gamma_L_cm1), "R": float(gamma_R_cm1)}
    sinks = tuple(Sink(s.site, s.label, gammas.get(s.label, s.gamma_cm1))
                  for s in net.sinks)
    return SiteNetwork(net.energies_cm1, net.couplings_cm1, sinks,
                       net.special_pair, net.bath)


def closed_hamiltonian(net: SiteNetwork) -> np.ndarray:
    """Hermitian part H0: site energies on the diagonal plus couplings."""
    return np.diag(net.energies_cm1) + net.couplings_cm1


def effective_hamiltonian(net: SiteNetwork) -> np.ndarray:
    """Non-Hermitian H0 - i/2 * sum_s gamma_s |s><s| (complex, cm^-1)."""
    h = closed_hamiltonian(net).astype(complex)
    for s in net.sinks:
        h[s.site, s.site] -= 0.5j * s.gamma_cm1
    return h


def validate_density_matrix(rho: np.ndarray, n_sites: int, atol: float = 1e-10):
    """Check shape, hermiticity, positive semidefiniteness, trace <= 1."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (n_sites, n_sites):
        raise ValidationError(f"density matrix shape {rho.shape}, expected {(n_sites, n_sites)}")
    if not np.all(np.isfinite(rho.view(float))):
        raise ValidationError("density matrix must be finite")
    if np.max(np.abs(rho - rho.conj().T)) > atol:
        raise ValidationError("density matrix must be Hermitian")
    w = np.linalg.eigvalsh(rho)
    if w.min() < -atol:
        raise ValidationError(f"density matrix must be positive semidefinite (min eig {w.min():.3e})")
    tr = rho.trace().real
    if tr > 1 + atol or tr <= atol:
        raise ValidationError(f"density matrix trace must lie in (0, 1], got {tr}")
    return rho


def initial_state(net: SiteNetwork, kind: str = "symmetric_pure") -> np.ndarray:
    """Canonical initial density matrices.

    "symmetric_pure": the symmetric superposition of the special pair,
        rho = 1/2 (|1> + |2>)(<1| + <2|).
    "mixed": the incoherent half-half mixture of the pair sites.
    "site:k": full population on 1-based site k.
    """
    n = net.n_sites
    i, j = net.special_pair
    rho = np.zeros((n, n), dtype=complex)
    if kind == "symmetric_pure":
        v = np.zeros(n)
        v[i] = v[j] = 1.0 / np.sqrt(2.0)
        rho = np.outer(v, v).astype(complex)
    elif kind == "mixed":
        rho[i, i] = rho[j, j] = 0.5
    elif kind.startswith("site:"):
        try:
            k = int(kind.split(":", 1)[1])
        except ValueError:
            raise ValidationError(f"bad site index in initial state {kind!r}") from None
        if not 1 <= k <= n:
            raise ValidationError(f"initial site {k} out of range 1..{n}")
        rho[k - 1, k - 1] = 1.0
    else:
        raise ValidationError(
            f"unknown initial state {kind!r}; expected symmetric_pure, mixed, or site:k")
    return rho


def _require(cond, msg):
    if not cond:
        raise ValidationError(msg)


def network_to_dict(net: SiteNetwork) -> dict:
    """JSON-ready form; site indices 1-based, each coupling pair once."""
    n = net.n_sites
    couplings = []
    for i in range(n):
        for j in range(i + 1, n):
            v = net.couplings_cm1[i, j]
            if v != 0:
                couplings.append([i + 1, j + 1, float(v)])
    d = {
        "sites": [{"energy_cm1": float(e)} for e in net.energies_cm1],
        "couplings": couplings,
        "sinks": [{"site": s.site + 1, "label": s.label, "gamma_cm1": float(s.gamma_cm1)}
                  for s in net.sinks],
        "special_pair": [net.special_pair[0] + 1, net.special_pair[1] + 1],
    }
    if net.bath is not None:
        d["bath"] = {
            "temperature_K": net.bath.temperature_K,
            "reorganization_cm1": net.bath.reorganization_cm1,
            "cutoff_cm1": net.bath.cutoff_cm1,
        }
    return d


def network_from_dict(d: dict, where: str = "model") -> SiteNetwork:
    _require(isinstance(d, dict), f"{where}: expected a JSON object")
    for key in ("sites", "couplings", "sinks", "special_pair"):
        _require(key in d, f"{where}: missing key {key!r}")
    sites = d["sites"]
    _require(isinstance(sites, list) and len(sites) >= 2,
             f"{where}: sites must be a list of >= 2 entries")
    energies = []
    for k, s in enumerate(sites):
        _require(isinstance(s, dict) and "energy_cm1" in s,
                 f"{where}: sites[{k}] must be an object with energy_cm1")
        energies.append(float(s["energy_cm1"]))
    n = len(energies)
    c = np.zeros((n, n))
    seen = set()
    for k, row in enumerate(d["couplings"]):
        _require(isinstance(row, (list, tuple)) and len(row) == 3,
                 f"{where}: couplings[{k}] must be [i, j, value_cm1]")
        i, j, v = int(row[0]), int(row[1]), float(row[2])
        _require(1 <= i <= n and 1 <= j <= n and i != j,
                 f"{where}: couplings[{k}] sites ({i},{j}) out of range")
        pair = (min(i, j), max(i, j))
        _require(pair not in seen, f"{where}: duplicate coupling for sites {pair}")
        seen.add(pair)
        c[i - 1, j - 1] = c[j - 1, i - 1] = v
    sinks = []
    for k, s in enumerate(d["sinks"]):
        _require(isinstance(s, dict) and {"site", "label", "gamma_cm1"} <= set(s),
                 f"{where}: sinks[{k}] must have site, label, gamma_cm1")
        site = int(s["site"])
        _require(1 <= site <= n, f"{where}: sinks[{k}] site {site} out of range")
        sinks.append(Sink(site - 1, str(s["label"]), float(s["gamma_cm1"])))
    pair = d["special_pair"]
    _require(isinstance(pair, (list, tuple)) and len(pair) == 2,
             f"{where}: special_pair must be [i, j]")
    bath = None
    if d.get("bath") is not None:
        b = d["bath"]
        _require(isinstance(b, dict) and
                 {"temperature_K", "reorganization_cm1", "cutoff_cm1"} <= set(b),
                 f"{where}: bath must have temperature_K, reorganization_cm1, cutoff_cm1")
        bath = BathSpec(float(b["temperature_K"]), float(b["reorganization_cm1"]),
                        float(b["cutoff_cm1"]))
    try:
        return SiteNetwork(np.asarray(energies), c, tuple(sinks),
                           (int(pair[0]) - 1, int(pair[1]) - 1), bath)
    except ValidationError as exc:
        raise ValidationError(f"{where}: {exc}") from None


def save_network(net: SiteNetwork, path):
    path = Path(path)
    with open(path, "w") as fh:
        json.dump(network_to_dict(net), fh, indent=2)
        fh.write("\n")


def load_network(path) -> SiteNetwork:
    path = Path(path)
    try:
        with open(path) as fh:
            d = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"model file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return network_from_dict(d, where=str(path))
