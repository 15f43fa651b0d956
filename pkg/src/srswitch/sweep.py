"""Parameter sweeps over sink strengths, with parallel execution.

Sweeps vary the dimensionless sink couplings kappa = gamma / (2 Omega_ref)
on a fixed network geometry: 1-d sweeps move kappa_L with the asymmetry
q = kappa_L / kappa_R held fixed, 2-d sweeps span a (kappa_L, kappa_R)
grid. Every grid point integrates the chosen evolution law to the horizon
and records the transfer efficiencies; failed points are isolated as NaN
records instead of aborting the sweep. Results are aggregated in grid
order regardless of worker count, so output files are byte-identical for
any parallelism.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from multiprocessing import get_context

import numpy as np

from .bath import BathSpec, build_generators, dissipator_superoperator
from .csvio import write_csv
from .dynamics import LAWS, final_efficiencies
from .errors import ValidationError
from .network import SiteNetwork, reference_coupling, with_sink_strengths
from .spectral import eigendecompose, subradiant_average_width, detect_transitions

SWEEP_CSV_HEADER = ["kappa_L", "kappa_R", "eta_L", "eta_R", "unbalanced", "final_trace"]
SPECTRAL_CSV_HEADER = ["kappa_L", "k", "Re_E_cm1", "Gamma_cm1", "PR", "overlap_L", "overlap_R"]
TRANSITIONS_CSV_HEADER = ["kappa_L", "avg_sub_width_over_D"]


@dataclass(frozen=True)
class AxisSpec:
    """One sweep axis; scale is "log" or "linear"."""
    name: str
    start: float
    stop: float
    points: int
    scale: str = "log"

    def __post_init__(self):
        if self.name not in ("kappa_L", "kappa_R"):
            raise ValidationError(f"axis name must be kappa_L or kappa_R, got {self.name!r}")
        if self.points < 2:
            raise ValidationError(f"axis needs >= 2 points, got {self.points}")
        if not (np.isfinite(self.start) and np.isfinite(self.stop) and self.start < self.stop):
            raise ValidationError(f"axis range [{self.start}, {self.stop}] invalid")
        if self.scale not in ("log", "linear"):
            raise ValidationError(f"axis scale must be log or linear, got {self.scale!r}")
        if self.scale == "log" and self.start <= 0:
            raise ValidationError("log axis requires start > 0")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.logspace(np.log10(self.start), np.log10(self.stop), self.points)
        return np.linspace(self.start, self.stop, self.points)


def default_axis_1d() -> AxisSpec:
    return AxisSpec("kappa_L", 1e-2, 1e4, 61)


def default_axes_2d() -> tuple[AxisSpec, AxisSpec]:
    return (AxisSpec("kappa_L", 1e-2, 1e2, 41), AxisSpec("kappa_R", 1e-2, 1e2, 41))


@dataclass(frozen=True)
class SweepSpec:
    """Full description of one sweep; immutable so workers share it."""
    network: SiteNetwork
    axes: tuple[AxisSpec, ...]
    law: str = "vonneumann"
    q: float | None = 100.0
    horizon_ps: float = 20.0
    initial: str = "symmetric_pure"
    bath: BathSpec | None = None
    gamma_d_cm1: float | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if self.law not in LAWS:
            raise ValidationError(f"unknown law {self.law!r}; expected one of {LAWS}")
        if len(self.axes) == 1:
            if self.axes[0].name != "kappa_L":
                raise ValidationError("1-d sweeps vary kappa_L")
            if self.q is None or self.q <= 0:
                raise ValidationError("1-d sweeps need q > 0")
        elif len(self.axes) == 2:
            names = tuple(a.name for a in self.axes)
            if names != ("kappa_L", "kappa_R"):
                raise ValidationError(f"2-d sweep axes must be (kappa_L, kappa_R), got {names}")
        else:
            raise ValidationError(f"sweeps take 1 or 2 axes, got {len(self.axes)}")
        if self.horizon_ps <= 0 or not np.isfinite(self.horizon_ps):
            raise ValidationError(f"horizon must be > 0 ps, got {self.horizon_ps}")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")

    def effective_bath(self) -> BathSpec | None:
        return self.bath or self.network.bath

    def to_dict(self) -> dict:
        d = {
            "law": self.law,
            "axes": [{"name": a.name, "start": a.start, "stop": a.stop,
                      "points": a.points, "scale": a.scale} for a in self.axes],
            "q": self.q,
            "horizon_ps": self.horizon_ps,
            "initial": self.initial,
            "gamma_d_cm1": self.gamma_d_cm1,
            "workers": self.workers,
        }
        b = self.effective_bath()
        if b is not None:
            d["bath"] = {"temperature_K": b.temperature_K,
                         "reorganization_cm1": b.reorganization_cm1,
                         "cutoff_cm1": b.cutoff_cm1}
        return d


@dataclass(frozen=True)
class EfficiencyRecord:
    kappa_L: float
    kappa_R: float
    eta_L: float
    eta_R: float
    unbalanced: float
    final_trace: float

    def row(self) -> tuple[float, ...]:
        return (self.kappa_L, self.kappa_R, self.eta_L, self.eta_R,
                self.unbalanced, self.final_trace)


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    records: tuple[EfficiencyRecord, ...]
    failures: tuple[dict, ...] = ()

    @property
    def kappa_L(self) -> np.ndarray:
        return np.array([r.kappa_L for r in self.records])

    @property
    def unbalanced(self) -> np.ndarray:
        return np.array([r.unbalanced for r in self.records])

    def grids(self) -> dict[str, np.ndarray]:
        """2-d sweeps only: reshape the record fields onto the axis grid,
        kappa_L rows by kappa_R columns."""
        if len(self.spec.axes) != 2:
            raise ValidationError("grids() applies to 2-d sweeps")
        shape = (self.spec.axes[0].points, self.spec.axes[1].points)
        out = {}
        for name in ("eta_L", "eta_R", "unbalanced", "final_trace"):
            vals = np.array([getattr(r, name) for r in self.records])
            out[name] = vals.reshape(shape)
        return out

    def crossings(self) -> list[float]:
        if len(self.spec.axes) != 1:
            raise ValidationError("crossings apply to 1-d sweeps")
        return find_crossings(self.kappa_L, self.unbalanced)

    def primary_crossing(self) -> float | None:
        return primary_crossing(self.crossings(), self.spec.q)


# worker globals, set once per pool via the initializer
_WORKER: dict = {}


def _init_worker(payload: dict):
    _WORKER.update(payload)


def _point(task: tuple[int, float, float, float, float]):
    idx, kappa_L, kappa_R, gamma_L, gamma_R = task
    st = _WORKER
    try:
        net = with_sink_strengths(st["network"], gamma_L, gamma_R)
        eta_L, eta_R, trace = final_efficiencies(
            net, st["law"], st["horizon_ps"], st["initial"],
            st["bath"], st["gamma_d_cm1"], st["dissipator"])
        rec = EfficiencyRecord(kappa_L, kappa_R, eta_L, eta_R, eta_L - eta_R, trace)
        return idx, rec, None
    except Exception as exc:
        rec = EfficiencyRecord(kappa_L, kappa_R, math.nan, math.nan, math.nan, math.nan)
        return idx, rec, f"{type(exc).__name__}: {exc}"


def _worker_payload(spec: SweepSpec) -> dict:
    dissipator = None
    if spec.law == "lindblad":
        bath = spec.effective_bath()
        if bath is None:
            raise ValidationError("lindblad sweeps need a bath (spec or network)")
        dissipator = dissipator_superoperator(build_generators(spec.network, bath))
    return {
        "network": spec.network,
        "law": spec.law,
        "horizon_ps": spec.horizon_ps,
        "initial": spec.initial,
        "bath": spec.effective_bath(),
        "gamma_d_cm1": spec.gamma_d_cm1,
        "dissipator": dissipator,
    }


def _run_tasks(spec: SweepSpec, tasks: list[tuple]) -> tuple[list[EfficiencyRecord], list[dict]]:
    payload = _worker_payload(spec)
    results: list = [None] * len(tasks)
    failures = []
    workers = min(spec.workers, len(tasks))
    if workers <= 1:
        _init_worker(payload)
        done = map(_point, tasks)
    else:
        ctx = get_context("fork")
        pool = ctx.Pool(workers, initializer=_init_worker, initargs=(payload,))
        done = pool.imap_unordered(_point, tasks, chunksize=max(1, len(tasks) // (4 * workers)))
    try:
        for idx, rec, err in done:
            results[idx] = rec
            if err is not None:
                failures.append({"index": idx, "kappa_L": rec.kappa_L,
                                 "kappa_R": rec.kappa_R, "error": err})
    finally:
        if workers > 1:
            pool.close()
            pool.join()
    failures.sort(key=lambda f: f["index"])
    return results, failures


def sweep_1d(spec: SweepSpec) -> SweepResult:
    """Sweep kappa_L at fixed q = kappa_L / kappa_R."""
    if len(spec.axes) != 1:
        raise ValidationError("sweep_1d needs a single kappa_L axis")
    ref = reference_coupling(spec.network)
    kappas = spec.axes[0].grid()
    tasks = []
    for i, k in enumerate(kappas):
        kr = k / spec.q
        tasks.append((i, float(k), float(kr), 2 * ref * float(k), 2 * ref * float(kr)))
    records, failures = _run_tasks(spec, tasks)
    return SweepResult(spec, tuple(records), tuple(failures))


def sweep_2d(spec: SweepSpec) -> SweepResult:
    """Sweep the (kappa_L, kappa_R) grid; records in row-major order
    (kappa_L outer, kappa_R inner)."""
    if len(spec.axes) != 2:
        raise ValidationError("sweep_2d needs kappa_L and kappa_R axes")
    ref = reference_coupling(spec.network)
    kl, kr = spec.axes[0].grid(), spec.axes[1].grid()
    tasks = []
    for i, a in enumerate(kl):
        for j, b in enumerate(kr):
            tasks.append((i * len(kr) + j, float(a), float(b),
                          2 * ref * float(a), 2 * ref * float(b)))
    records, failures = _run_tasks(spec, tasks)
    return SweepResult(spec, tuple(records), tuple(failures))


def find_crossings(kappas: np.ndarray, unbalanced: np.ndarray) -> list[float]:
    """Sign changes of the unbalanced efficiency, interpolated linearly in
    log(kappa); exact zeros report the grid point itself."""
    kappas = np.asarray(kappas, dtype=float)
    u = np.asarray(unbalanced, dtype=float)
    out: list[float] = []
    for i in range(len(u)):
        if not np.isfinite(u[i]):
            continue
        if u[i] == 0.0:
            if not out or out[-1] != kappas[i]:
                out.append(float(kappas[i]))
        elif i + 1 < len(u) and np.isfinite(u[i + 1]) and u[i] * u[i + 1] < 0:
            f = u[i] / (u[i] - u[i + 1])
            lk = np.log10(kappas[i]) + f * (np.log10(kappas[i + 1]) - np.log10(kappas[i]))
            out.append(float(10.0 ** lk))
    return out


def primary_crossing(crossings: list[float], q: float) -> float | None:
    """The crossing nearest the sqrt(q) switching estimate, or None."""
    if not crossings:
        return None
    target = np.log10(np.sqrt(q))
    return min(crossings, key=lambda c: abs(np.log10(c) - target))


@dataclass(frozen=True)
class SpectralScanResult:
    spec: SweepSpec
    rows: tuple[tuple[float, ...], ...]  # SPECTRAL_CSV_HEADER order

    def per_kappa(self) -> dict[float, np.ndarray]:
        out: dict[float, list] = {}
        for row in self.rows:
            out.setdefault(row[0], []).append(row[1:])
        return {k: np.asarray(v) for k, v in out.items()}


def scan_spectral(spec: SweepSpec) -> SpectralScanResult:
    """Eigensystem summary at every kappa_L grid point: state index
    (1-based, by ascending Re E), complex energy, width, PR, and sink
    overlaps."""
    if len(spec.axes) != 1:
        raise ValidationError("scan_spectral needs a single kappa_L axis")
    ref = reference_coupling(spec.network)
    rows = []
    for k in spec.axes[0].grid():
        net = with_sink_strengths(spec.network, 2 * ref * k, 2 * ref * k / spec.q)
        sp = eigendecompose(net)
        for j in range(sp.n_states):
            rows.append((float(k), float(j + 1), float(sp.energies_cm1[j].real),
                         float(sp.widths_cm1[j]), float(sp.participation[j]),
                         float(sp.overlap_L[j]), float(sp.overlap_R[j])))
    return SpectralScanResult(spec, tuple(rows))


@dataclass(frozen=True)
class TransitionScanResult:
    spec: SweepSpec
    kappas: np.ndarray
    curve: np.ndarray

    def report(self):
        return detect_transitions(self.kappas, self.curve)


def transition_scan(spec: SweepSpec) -> TransitionScanResult:
    """Normalized subradiant average width across the kappa_L grid."""
    if len(spec.axes) != 1:
        raise ValidationError("transition_scan needs a single kappa_L axis")
    ref = reference_coupling(spec.network)
    kappas = spec.axes[0].grid()
    curve = []
    for k in kappas:
        net = with_sink_strengths(spec.network, 2 * ref * k, 2 * ref * k / spec.q)
        curve.append(subradiant_average_width(eigendecompose(net)))
    return TransitionScanResult(spec, kappas, np.asarray(curve))


def write_sweep_csv(path, result: SweepResult) -> None:
    write_csv(path, SWEEP_CSV_HEADER, (r.row() for r in result.records))


def write_spectral_csv(path, result: SpectralScanResult) -> None:
    write_csv(path, SPECTRAL_CSV_HEADER, result.rows)


def write_transitions_csv(path, result: TransitionScanResult) -> None:
    write_csv(path, TRANSITIONS_CSV_HEADER, zip(result.kappas, result.curve))


@dataclass(frozen=True)
class ContourLine:
    """One iso-ratio polyline in (kappa_L, kappa_R) coordinates."""
    family: str  # "L_over_R", "R_over_L", or "equal"
    ratio: float
    points: np.ndarray


def _marching_squares(x, y, f, level):
    """Line segments of the level set of f on the structured grid (x, y).

    f is indexed [i, j] for (x[i], y[j]). Cells containing NaN corners are
    skipped; corner values equal to the level count as below it.
    """
    segments = []

    def interp(xa, ya, va, xb, yb, vb):
        t = (level - va) / (vb - va)
        return (xa + t * (xb - xa), ya + t * (yb - ya))

    for i in range(len(x) - 1):
        for j in range(len(y) - 1):
            va, vb = f[i, j], f[i + 1, j]
            vc, vd = f[i + 1, j + 1], f[i, j + 1]
            if not (np.isfinite(va) and np.isfinite(vb)
                    and np.isfinite(vc) and np.isfinite(vd)):
                continue
            case = ((va > level) | (vb > level) << 1
                    | (vc > level) << 2 | (vd > level) << 3)
            if case in (0, 15):
                continue
            bottom = interp(x[i], y[j], va, x[i + 1], y[j], vb) \
                if (va > level) != (vb > level) else None
            right = interp(x[i + 1], y[j], vb, x[i + 1], y[j + 1], vc) \
                if (vb > level) != (vc > level) else None
            top = interp(x[i], y[j + 1], vd, x[i + 1], y[j + 1], vc) \
                if (vd > level) != (vc > level) else None
            left = interp(x[i], y[j], va, x[i], y[j + 1], vd) \
                if (va > level) != (vd > level) else None
            if case in (5, 10):  # saddle: split by the cell-center value
                center_above = (va + vb + vc + vd) / 4.0 > level
                if (case == 5) == center_above:
                    segments.append((bottom, right))
                    segments.append((top, left))
                else:
                    segments.append((bottom, left))
                    segments.append((top, right))
            else:
                ends = [e for e in (bottom, right, top, left) if e is not None]
                segments.append((ends[0], ends[1]))
    return segments


def _chain_segments(segments):
    """Join shared endpoints into polylines; deterministic for a
    deterministic segment order."""
    def key(p):
        return (round(p[0], 12), round(p[1], 12))

    incident: dict = {}
    for idx, (a, b) in enumerate(segments):
        incident.setdefault(key(a), []).append(idx)
        incident.setdefault(key(b), []).append(idx)
    visited = set()
    lines = []

    def walk(pt):
        line = [pt]
        while True:
            found = None
            for idx in incident[key(line[-1])]:
                if idx not in visited:
                    found = idx
                    break
            if found is None:
                return line
            visited.add(found)
            a, b = segments[found]
            line.append(b if key(a) == key(line[-1]) else a)

    # open chains first (degree-1 endpoints), then remaining loops
    starts = [k for k, v in incident.items() if len(v) % 2 == 1] + list(incident)
    for start_key in starts:
        for idx in incident[start_key]:
            if idx in visited:
                continue
            visited.add(idx)
            a, b = segments[idx]
            head, tail = (a, b) if key(a) == start_key else (b, a)
            lines.append([head] + walk(tail))
    return lines


def contour_extract(kappa_L: np.ndarray, kappa_R: np.ndarray,
                    eta_L: np.ndarray, eta_R: np.ndarray,
                    ratio: float = 9.0) -> list[ContourLine]:
    """Iso-ratio curves eta_L / eta_R = ratio (and its reciprocal) on a
    2-d sweep grid.

    Interpolation is linear in log(kappa); an unattained ratio yields an
    empty list. ratio = 1 emits the single "equal" family.
    """
    kappa_L = np.asarray(kappa_L, dtype=float)
    kappa_R = np.asarray(kappa_R, dtype=float)
    eta_L = np.asarray(eta_L, dtype=float)
    eta_R = np.asarray(eta_R, dtype=float)
    if eta_L.shape != (len(kappa_L), len(kappa_R)) or eta_L.shape != eta_R.shape:
        raise ValidationError("eta grids must be (len(kappa_L), len(kappa_R))")
    if not np.isfinite(ratio) or ratio <= 0:
        raise ValidationError(f"ratio must be > 0, got {ratio}")
    if ratio < 1:
        ratio = 1.0 / ratio
    tiny = 1e-300
    fgrid = np.log10(eta_L + tiny) - np.log10(eta_R + tiny)
    x, y = np.log10(kappa_L), np.log10(kappa_R)
    levels = ([(0.0, "equal")] if ratio == 1.0 else
              [(np.log10(ratio), "L_over_R"), (-np.log10(ratio), "R_over_L")])
    out = []
    for level, family in levels:
        segs = _marching_squares(x, y, fgrid, level)
        for line in _chain_segments(segs):
            pts = 10.0 ** np.asarray(line)
            out.append(ContourLine(family=family, ratio=ratio, points=pts))
    return out
