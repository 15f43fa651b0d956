"""Benchmark the compiled integration kernels against the numpy fallback.

Workload: the vectorized Lindblad generator of the standard six-site
network (a dense 36 x 36 complex matrix) advanced with rk4_linear, and
its one-step propagator iterated with propagate_linear. Reports the best
wall time per backend and the max deviation between the two results.

Usage: python benchmarks/bench_kernels.py [--steps N] [--repeats R]
"""
import argparse
import time

import numpy as np
from scipy.linalg import expm

import srswitch as sr
from srswitch import _kernels
from srswitch.constants import HBAR_CM1_PS


def _workload():
    net = sr.with_sink_strengths(sr.build_multimer(), 2000.0, 20.0)
    bath = sr.BathSpec(temperature_K=300.0, reorganization_cm1=35.0,
                       cutoff_cm1=150.0)
    gen = sr.lindblad_superoperator(net, bath)
    y0 = sr.initial_state(net, "symmetric_pure").ravel()
    n = net.n_sites
    rows = np.zeros((2, n * n), dtype=complex)
    for pos, sink in enumerate(sorted(net.sinks, key=lambda s: s.label)):
        rows[pos, sink.site * n + sink.site] = sink.gamma_cm1 / HBAR_CM1_PS
    dt = sr.default_timestep(net, "lindblad", bath=bath)
    return gen, y0, rows, dt


def _best(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=20000,
                        help="integration steps per run (default 20000)")
    parser.add_argument("--repeats", type=int, default=3,
                        help="timed repeats, best-of (default 3)")
    args = parser.parse_args(argv)

    backends = _kernels.available_backends()
    gen, y0, rows, dt = _workload()
    prop = expm(gen * dt)
    stride = max(1, args.steps // 100)

    print(f"backends: {', '.join(backends)} (active: {sr.BACKEND})")
    print(f"system dim {gen.shape[0]}, {args.steps} steps, dt {dt:.3e} ps,"
          f" best of {args.repeats}")
    for name, kernel_args in [
            ("rk4_linear", (gen, y0, dt, args.steps, rows, stride)),
            ("propagate_linear", (prop, y0, args.steps, stride))]:
        results = {}
        print(f"\n{name}:")
        for backend, mod in backends.items():
            fn = getattr(mod, name)
            elapsed, out = _best(lambda: fn(*kernel_args), args.repeats)
            results[backend] = (elapsed, out)
            print(f"  {backend:9s} {elapsed * 1e3:10.2f} ms"
                  f"  ({args.steps / elapsed:,.0f} steps/s)")
        if len(results) == 2:
            t_pure, out_pure = results["pure"]
            t_comp, out_comp = results["compiled"]
            dev = max(np.abs(a - b).max() for a, b in zip(out_pure, out_comp))
            print(f"  speedup   {t_pure / t_comp:10.2f} x   max deviation {dev:.3e}")


if __name__ == "__main__":
    main()
