"""Pure numpy implementations of the fixed-step integration kernels.

Both kernels advance a linear system and record snapshots at a fixed
stride. They are drop-in equivalents of the compiled versions in _core;
only the inner loops differ.
"""
import numpy as np


def _snap_steps(n_steps, stride):
    steps = list(range(0, n_steps + 1, stride))
    if steps[-1] != n_steps:
        steps.append(n_steps)
    return np.asarray(steps, dtype=np.int64)


def rk4_linear(a, y0, dt, n_steps, obs, snap_stride):
    """Integrate dy/dt = a @ y with classical fixed-step RK4.

    Args:
        a: (n, n) complex generator.
        y0: (n,) complex initial state.
        dt: step size.
        n_steps: number of steps; the final time is n_steps * dt.
        obs: (m, n) complex rows; Re(obs @ y) is accumulated with
            pairwise Simpson quadrature alongside the integration, so
            the quadrature order matches the integrator.
        snap_stride: record every this many steps (step 0 and the final
            step are always recorded).

    Returns:
        steps: (S,) int64 recorded step indices.
        snaps: (S, n) complex state at the recorded steps.
        integrals: (S, m) float running integrals at the recorded
            steps; a trailing odd interval is closed with a trapezoid.
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    y = np.array(y0, dtype=np.complex128)
    obs = np.ascontiguousarray(obs, dtype=np.complex128)
    m = obs.shape[0]
    steps = _snap_steps(n_steps, snap_stride)
    snaps = np.empty((len(steps), len(y)), dtype=np.complex128)
    integrals = np.empty((len(steps), m), dtype=np.float64)

    third = dt / 3.0
    acc = np.zeros(m)
    f_even = (obs @ y).real
    f_odd = np.zeros(m)
    pos = 0
    snaps[pos] = y
    integrals[pos] = acc
    pos += 1
    for k in range(1, n_steps + 1):
        k1 = a @ y
        k2 = a @ (y + 0.5 * dt * k1)
        k3 = a @ (y + 0.5 * dt * k2)
        k4 = a @ (y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        f_cur = (obs @ y).real
        if k % 2:
            f_odd = f_cur
        else:
            acc = acc + third * (f_even + 4.0 * f_odd + f_cur)
            f_even = f_cur
        if k == steps[pos]:
            snaps[pos] = y
            if k % 2:
                integrals[pos] = acc + 0.5 * dt * (f_even + f_odd)
            else:
                integrals[pos] = acc
            pos += 1
    return steps, snaps, integrals


def propagate_linear(p, y0, n_steps, snap_stride):
    """Iterate y <- p @ y, recording snapshots at a fixed stride.

    Returns (steps, snaps) with the same snapshot convention as
    rk4_linear.
    """
    p = np.ascontiguousarray(p, dtype=np.complex128)
    y = np.array(y0, dtype=np.complex128)
    steps = _snap_steps(n_steps, snap_stride)
    snaps = np.empty((len(steps), len(y)), dtype=np.complex128)
    pos = 0
    snaps[pos] = y
    pos += 1
    for k in range(1, n_steps + 1):
        y = p @ y
        if k == steps[pos]:
            snaps[pos] = y
            pos += 1
    return steps, snaps
