"""Command line interface.

Subcommands cover the full pipeline: model construction (multimer),
validation, spectral analysis (spectrum, transitions, scan-spectral),
time evolution (evolve), and efficiency sweeps (sweep1d, sweep2d). Every
file-producing command writes a <output>.manifest.json sidecar recording
the resolved parameters, input digests, output digests, and wall time.

Exit codes: 0 success, 1 invalid input (including unknown flags and
malformed model files), 2 numerical failure.

All defaults reproduce the paradigmatic six-site multimer with
Omega = 100 cm^-1, Omega_sp = 200 cm^-1, kappa_L = 1, q = 100 and a
20 ps horizon. The environment variable SRSWITCH_WORKERS overrides
--workers for the sweep commands.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from ._kernels import BACKEND
from .csvio import format_float, write_csv
from .dynamics import LAWS, evolve
from .errors import NumericalError, ValidationError
from .network import (BathSpec, SiteNetwork, build_multimer, coupling_ratios,
                      load_network, reference_coupling, save_network,
                      with_sink_strengths)
from .spectral import eigendecompose, switching_point_estimate
from .sweep import (AxisSpec, SweepSpec, scan_spectral, sweep_1d, sweep_2d,
                    transition_scan, write_spectral_csv, write_sweep_csv,
                    write_transitions_csv)


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems through the error taxonomy."""

    def error(self, message):
        raise ValidationError(message)


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _file_entry(path) -> dict:
    p = Path(path)
    return {"path": str(p), "sha256": _sha256(p), "bytes": p.stat().st_size}


def _write_manifest(out_path, command, params, inputs, outputs, started, extra=None):
    manifest = {
        "command": command,
        "version": __version__,
        "backend": BACKEND,
        "parameters": params,
        "inputs": [_file_entry(p) for p in inputs],
        "outputs": [_file_entry(p) for p in outputs],
        "elapsed_s": round(time.monotonic() - started, 6),
    }
    if extra:
        manifest["extra"] = extra
    mpath = Path(str(out_path) + ".manifest.json")
    with open(mpath, "w") as fh:
        json.dump(manifest, fh, indent=2, default=str)
        fh.write("\n")
    return mpath


def _params(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _add_model_args(p: _Parser, sink_overrides: bool = True):
    g = p.add_argument_group("model")
    g.add_argument("--model", metavar="JSON", help="model file; omit for the built-in multimer")
    g.add_argument("--omega", type=float, default=100.0,
                   help="chain coupling in cm^-1 for the built-in multimer (default 100)")
    g.add_argument("--omega-sp", type=float, default=200.0,
                   help="special-pair coupling in cm^-1 (default 200)")
    g.add_argument("--n-sites", type=int, default=6,
                   help="multimer size, even and >= 4 (default 6)")
    g.add_argument("--site-energy", type=float, default=0.0,
                   help="uniform site energy in cm^-1 (default 0)")
    if sink_overrides:
        g.add_argument("--kappa-l", type=float, default=None,
                       help="left sink strength kappa_L = gamma_L / (2 Omega_ref) (default 1)")
        g.add_argument("--q", type=float, default=100.0,
                       help="sink asymmetry kappa_L / kappa_R (default 100)")
        g.add_argument("--gamma-l", type=float, default=None,
                       help="left sink width in cm^-1 (alternative to --kappa-l)")
        g.add_argument("--gamma-r", type=float, default=None,
                       help="right sink width in cm^-1 (alternative to --q)")
    g.add_argument("--bath", metavar="T_K,E_R,omega_c",
                   help="thermal bath: temperature (K), reorganization and "
                        "cutoff energies (cm^-1), e.g. 300,35,150")


def _parse_bath(text) -> BathSpec | None:
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 3:
        raise ValidationError(f"--bath expects T_K,E_R,omega_c, got {text!r}")
    try:
        t, er, wc = (float(x) for x in parts)
    except ValueError:
        raise ValidationError(f"--bath expects three numbers, got {text!r}") from None
    return BathSpec(t, er, wc)


def _resolve_network(args, inputs: list) -> SiteNetwork:
    """Model file or built-in multimer, with sink strengths applied."""
    bath = _parse_bath(getattr(args, "bath", None))
    kappa_l = getattr(args, "kappa_l", None)
    gamma_l = getattr(args, "gamma_l", None)
    gamma_r = getattr(args, "gamma_r", None)
    q = getattr(args, "q", 100.0)
    if kappa_l is not None and gamma_l is not None:
        raise ValidationError("--kappa-l and --gamma-l are mutually exclusive")
    if args.model:
        net = load_network(args.model)
        inputs.append(args.model)
        if bath is not None:
            net = SiteNetwork(net.energies_cm1, net.couplings_cm1, net.sinks,
                              net.special_pair, bath)
    else:
        net = build_multimer(args.omega, args.omega_sp, n_sites=args.n_sites,
                             site_energy_cm1=args.site_energy, bath=bath)
    if gamma_l is not None or gamma_r is not None:
        gl = gamma_l if gamma_l is not None else net.sink("L").gamma_cm1
        gr = gamma_r if gamma_r is not None else net.sink("R").gamma_cm1
        return with_sink_strengths(net, gl, gr)
    if kappa_l is not None or not args.model:
        kl = 1.0 if kappa_l is None else kappa_l
        ref = reference_coupling(net)
        return with_sink_strengths(net, 2 * ref * kl, 2 * ref * kl / q)
    return net


def _resolve_workers(args) -> int:
    env = os.environ.get("SRSWITCH_WORKERS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"SRSWITCH_WORKERS must be an integer, got {env!r}") from None
    return args.workers


def _axis_args(p: _Parser, prefix="kappa", start=1e-2, stop=1e4, points=61):
    p.add_argument(f"--{prefix}-min", type=float, default=start,
                   help=f"lower edge of the {prefix} grid (default {start:g})")
    p.add_argument(f"--{prefix}-max", type=float, default=stop,
                   help=f"upper edge of the {prefix} grid (default {stop:g})")
    p.add_argument(f"--{prefix}-points", type=int, default=points,
                   help=f"grid points (default {points})")


def _cmd_multimer(args):
    started = time.monotonic()
    inputs: list = []
    net = _resolve_network(args, inputs)
    save_network(net, args.out)
    ratios = coupling_ratios(net)
    print(f"wrote {args.out}: {net.n_sites} sites, kappa_L={format_float(ratios.kappa_L)}, "
          f"q={format_float(ratios.q)}")
    _write_manifest(args.out, "multimer", _params(args), inputs, [args.out], started)
    return 0


def _cmd_validate(args):
    net = load_network(args.model)
    ratios = coupling_ratios(net)
    sinks = ", ".join(f"{s.label}: site {s.site + 1}, gamma={format_float(s.gamma_cm1)}"
                      for s in net.sinks)
    print(f"{args.model}: valid; {net.n_sites} sites; {sinks}; "
          f"kappa_L={format_float(ratios.kappa_L)}, kappa_R={format_float(ratios.kappa_R)}, "
          f"q={format_float(ratios.q)}; bath={'yes' if net.bath else 'no'}")
    return 0


def _cmd_spectrum(args):
    started = time.monotonic()
    inputs: list = []
    net = _resolve_network(args, inputs)
    sp = eigendecompose(net)
    rows = [(k + 1, sp.energies_cm1[k].real, sp.widths_cm1[k], sp.participation[k],
             sp.overlap_L[k], sp.overlap_R[k]) for k in range(sp.n_states)]
    write_csv(args.out, ["k", "Re_E_cm1", "Gamma_cm1", "PR", "overlap_L", "overlap_R"], rows)
    print(f"wrote {args.out}: {sp.n_states} states, total width "
          f"{format_float(sp.widths_cm1.sum())} cm^-1")
    _write_manifest(args.out, "spectrum", _params(args), inputs, [args.out], started)
    return 0


def _sweep_spec_1d(args, net, workers=1) -> SweepSpec:
    axis = AxisSpec("kappa_L", args.kappa_min, args.kappa_max, args.kappa_points)
    return SweepSpec(network=net, axes=(axis,), law=getattr(args, "law", "vonneumann"),
                     q=args.q, horizon_ps=getattr(args, "horizon_ps", 20.0),
                     initial=getattr(args, "initial", "symmetric_pure"),
                     bath=_parse_bath(getattr(args, "bath", None)),
                     gamma_d_cm1=getattr(args, "gamma_d", None), workers=workers)


def _cmd_transitions(args):
    started = time.monotonic()
    inputs: list = []
    net = _resolve_network(args, inputs)
    spec = _sweep_spec_1d(args, net)
    scan = transition_scan(spec)
    write_transitions_csv(args.out, scan)
    extra = {"switching_estimate": switching_point_estimate(args.q)}
    try:
        report = scan.report()
        extra["transitions"] = {"kappa_st_left": report.kappa_st_left,
                                "kappa_st_right": report.kappa_st_right,
                                "kappa_minimum": report.kappa_minimum}
        print(f"wrote {args.out}: ST_L at kappa_L={format_float(report.kappa_st_left)}, "
              f"ST_R at kappa_L={format_float(report.kappa_st_right)}, "
              f"minimum at {format_float(report.kappa_minimum)} "
              f"(sqrt(q)={format_float(extra['switching_estimate'])})")
    except NumericalError:
        _write_manifest(args.out, "transitions", _params(args), inputs, [args.out],
                        started, extra)
        raise
    _write_manifest(args.out, "transitions", _params(args), inputs, [args.out],
                    started, extra)
    return 0


def _cmd_evolve(args):
    started = time.monotonic()
    inputs: list = []
    net = _resolve_network(args, inputs)
    kwargs = dict(horizon_ps=args.horizon_ps, dt_ps=args.dt_ps, method=args.method,
                  n_snapshots=args.snapshots, initial=args.initial)
    if args.law == "classical-semiclassical":
        kwargs["gamma_d_cm1"] = args.gamma_d
    result = evolve(net, args.law, **kwargs)
    n = net.n_sites
    header = (["t_ps"] + [f"rho_{i}{i}" for i in range(1, n + 1)]
              + ["abs_rho_12", "eta_L", "eta_R", "trace"])
    pops = result.populations
    coh = np.abs(result.rho[:, 0, 1])
    trace = pops.sum(axis=1)
    rows = np.column_stack([result.times_ps, pops, coh, result.eta_L, result.eta_R, trace])
    write_csv(args.out, header, rows)
    print(f"wrote {args.out}: law={args.law}, method={result.method}, "
          f"eta_L={format_float(result.eta_L[-1])}, eta_R={format_float(result.eta_R[-1])}, "
          f"ledger={format_float(result.ledger)}")
    _write_manifest(args.out, "evolve", _params(args), inputs, [args.out], started,
                    extra={"method": result.method, "dt_ps": result.dt_ps,
                           "eta_L": result.eta_L[-1], "eta_R": result.eta_R[-1],
                           "final_trace": result.final_trace})
    return 0


def _cmd_sweep1d(args):
    started = time.monotonic()
    inputs: list = []
    net = _resolve_network(args, inputs)
    spec = _sweep_spec_1d(args, net, workers=_resolve_workers(args))
    result = sweep_1d(spec)
    write_sweep_csv(args.out, result)
    crossings = result.crossings()
    print(f"wrote {args.out}: {len(result.records)} points, "
          f"crossings at {[format_float(c) for c in crossings]} "
          f"(sqrt(q)={format_float(switching_point_estimate(spec.q))})")
    _write_manifest(args.out, "sweep1d", _params(args), inputs, [args.out], started,
                    extra={"sweep_spec": spec.to_dict(), "crossings": crossings,
                           "primary_crossing": result.primary_crossing(),
                           "failures": list(result.failures)})
    return 0


def _cmd_sweep2d(args):
    started = time.monotonic()
    inputs: list = []
    net = _resolve_network(args, inputs)
    axes = (AxisSpec("kappa_L", args.kappa_l_min, args.kappa_l_max, args.kappa_l_points),
            AxisSpec("kappa_R", args.kappa_r_min, args.kappa_r_max, args.kappa_r_points))
    spec = SweepSpec(network=net, axes=axes, law=args.law, q=None,
                     horizon_ps=args.horizon_ps, initial=args.initial,
                     bath=_parse_bath(args.bath), gamma_d_cm1=args.gamma_d,
                     workers=_resolve_workers(args))
    result = sweep_2d(spec)
    write_sweep_csv(args.out, result)
    print(f"wrote {args.out}: {axes[0].points}x{axes[1].points} grid, "
          f"{len(result.failures)} failed points")
    _write_manifest(args.out, "sweep2d", _params(args), inputs, [args.out], started,
                    extra={"sweep_spec": spec.to_dict(), "failures": list(result.failures)})
    return 0


def _cmd_scan_spectral(args):
    started = time.monotonic()
    inputs: list = []
    net = _resolve_network(args, inputs)
    spec = _sweep_spec_1d(args, net)
    result = scan_spectral(spec)
    write_spectral_csv(args.out, result)
    print(f"wrote {args.out}: {len(result.rows)} rows "
          f"({args.kappa_points} kappa points x {net.n_sites} states)")
    _write_manifest(args.out, "scan-spectral", _params(args), inputs, [args.out], started)
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="srswitch",
                description="Transport efficiency switching in sink-coupled site networks")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("multimer", help="write a multimer model file")
    _add_model_args(sp)
    sp.add_argument("--out", required=True, help="output model JSON path")
    sp.set_defaults(func=_cmd_multimer)

    sp = sub.add_parser("validate", help="check a model file")
    sp.add_argument("model", help="model JSON path")
    sp.set_defaults(func=_cmd_validate)

    sp = sub.add_parser("spectrum", help="eigenvalues, widths, PR, and sink overlaps")
    _add_model_args(sp)
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.set_defaults(func=_cmd_spectrum)

    sp = sub.add_parser("transitions",
                        help="normalized subradiant width scan and its maxima")
    _add_model_args(sp)
    _axis_args(sp)
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.set_defaults(func=_cmd_transitions)

    sp = sub.add_parser("evolve", help="integrate one trajectory")
    _add_model_args(sp)
    sp.add_argument("--law", choices=LAWS, default="vonneumann")
    sp.add_argument("--horizon-ps", type=float, default=20.0)
    sp.add_argument("--dt-ps", type=float, default=None,
                    help="integration step; default from the stability rule")
    sp.add_argument("--method", choices=("auto", "rk4", "expm"), default="auto")
    sp.add_argument("--snapshots", type=int, default=401,
                    help="trajectory rows (default 401)")
    sp.add_argument("--initial", default="symmetric_pure",
                    help="symmetric_pure, mixed, or site:k (default symmetric_pure)")
    sp.add_argument("--gamma-d", type=float, default=None,
                    help="dephasing width in cm^-1 for semiclassical rates")
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.set_defaults(func=_cmd_evolve)

    for name, helptext in (("sweep1d", "sweep kappa_L at fixed q"),
                           ("sweep2d", "sweep the (kappa_L, kappa_R) grid")):
        sp = sub.add_parser(name, help=helptext)
        _add_model_args(sp)
        sp.add_argument("--law", choices=LAWS, default="vonneumann")
        sp.add_argument("--horizon-ps", type=float, default=20.0)
        sp.add_argument("--initial", default="symmetric_pure")
        sp.add_argument("--gamma-d", type=float, default=None,
                        help="dephasing width in cm^-1 for semiclassical rates")
        sp.add_argument("--workers", type=int, default=1,
                        help="worker processes (SRSWITCH_WORKERS overrides)")
        sp.add_argument("--out", required=True, help="output CSV path")
        if name == "sweep1d":
            _axis_args(sp)
            sp.set_defaults(func=_cmd_sweep1d)
        else:
            _axis_args(sp, "kappa-l", 1e-2, 1e2, 41)
            _axis_args(sp, "kappa-r", 1e-2, 1e2, 41)
            sp.set_defaults(func=_cmd_sweep2d)

    sp = sub.add_parser("scan-spectral", help="spectral summary across a kappa_L grid")
    _add_model_args(sp)
    _axis_args(sp)
    sp.add_argument("--out", required=True, help="output CSV path")
    sp.set_defaults(func=_cmd_scan_spectral)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidationError as exc:
        print(f"srswitch: error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"srswitch: numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
