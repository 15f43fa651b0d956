# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled fixed-step integration kernels.

Same contracts as the numpy fallback in _pure: rk4_linear advances
dy/dt = a @ y with classical RK4 and accumulates pairwise Simpson
integrals of Re(obs @ y); propagate_linear iterates y <- p @ y.
Snapshots are taken every snap_stride steps, always including step 0
and the final step.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()

ctypedef double complex cplx


cdef inline void _matvec(const cplx[:, ::1] a, const cplx[::1] x,
                         cplx[::1] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef cplx acc
    for i in range(n):
        acc = 0
        for j in range(n):
            acc = acc + a[i, j] * x[j]
        out[i] = acc


cdef inline void _obs_eval(const cplx[:, ::1] obs, const cplx[::1] y,
                           double[::1] out, Py_ssize_t m, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef cplx acc
    for i in range(m):
        acc = 0
        for j in range(n):
            acc = acc + obs[i, j] * y[j]
        out[i] = acc.real


def _snap_steps(Py_ssize_t n_steps, Py_ssize_t stride):
    steps = list(range(0, n_steps + 1, stride))
    if steps[len(steps) - 1] != n_steps:  # no negative indexing: wraparound is off
        steps.append(n_steps)
    return np.asarray(steps, dtype=np.int64)


def rk4_linear(a, y0, double dt, Py_ssize_t n_steps, obs, Py_ssize_t snap_stride):
    a = np.ascontiguousarray(a, dtype=np.complex128)
    obs = np.ascontiguousarray(obs, dtype=np.complex128)
    cdef cplx[:, ::1] av = a
    cdef cplx[:, ::1] obsv = obs
    cdef Py_ssize_t n = av.shape[0]
    cdef Py_ssize_t m = obsv.shape[0]

    steps = _snap_steps(n_steps, snap_stride)
    cdef long long[::1] stepv = steps
    snaps = np.empty((len(steps), n), dtype=np.complex128)
    integrals = np.empty((len(steps), m), dtype=np.float64)
    cdef cplx[:, ::1] snapv = snaps
    cdef double[:, ::1] intv = integrals

    y_arr = np.array(y0, dtype=np.complex128)
    cdef cplx[::1] y = y_arr
    work = np.empty((5, n), dtype=np.complex128)
    cdef cplx[::1] k1 = work[0]
    cdef cplx[::1] k2 = work[1]
    cdef cplx[::1] k3 = work[2]
    cdef cplx[::1] k4 = work[3]
    cdef cplx[::1] yt = work[4]
    fwork = np.zeros((4, m), dtype=np.float64)
    cdef double[::1] acc = fwork[0]
    cdef double[::1] f_even = fwork[1]
    cdef double[::1] f_odd = fwork[2]
    cdef double[::1] f_cur = fwork[3]

    cdef Py_ssize_t i, k, pos
    cdef double sixth = dt / 6.0
    cdef double third = dt / 3.0

    _obs_eval(obsv, y, f_even, m, n)
    for i in range(n):
        snapv[0, i] = y[i]
    for i in range(m):
        intv[0, i] = 0.0
    pos = 1
    with nogil:
        for k in range(1, n_steps + 1):
            _matvec(av, y, k1, n)
            for i in range(n):
                yt[i] = y[i] + 0.5 * dt * k1[i]
            _matvec(av, yt, k2, n)
            for i in range(n):
                yt[i] = y[i] + 0.5 * dt * k2[i]
            _matvec(av, yt, k3, n)
            for i in range(n):
                yt[i] = y[i] + dt * k3[i]
            _matvec(av, yt, k4, n)
            for i in range(n):
                y[i] = y[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
            _obs_eval(obsv, y, f_cur, m, n)
            if k % 2 == 1:
                for i in range(m):
                    f_odd[i] = f_cur[i]
            else:
                for i in range(m):
                    acc[i] = acc[i] + third * (f_even[i] + 4.0 * f_odd[i] + f_cur[i])
                    f_even[i] = f_cur[i]
            if k == stepv[pos]:
                for i in range(n):
                    snapv[pos, i] = y[i]
                if k % 2 == 1:
                    # trailing odd interval closed with a trapezoid
                    for i in range(m):
                        intv[pos, i] = acc[i] + 0.5 * dt * (f_even[i] + f_odd[i])
                else:
                    for i in range(m):
                        intv[pos, i] = acc[i]
                pos = pos + 1
    return steps, snaps, integrals


def propagate_linear(p, y0, Py_ssize_t n_steps, Py_ssize_t snap_stride):
    p = np.ascontiguousarray(p, dtype=np.complex128)
    cdef cplx[:, ::1] pv = p
    cdef Py_ssize_t n = pv.shape[0]

    steps = _snap_steps(n_steps, snap_stride)
    cdef long long[::1] stepv = steps
    snaps = np.empty((len(steps), n), dtype=np.complex128)
    cdef cplx[:, ::1] snapv = snaps

    y_arr = np.array(y0, dtype=np.complex128)
    cdef cplx[::1] y = y_arr
    tmp_arr = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] tmp = tmp_arr

    cdef Py_ssize_t i, k, pos
    for i in range(n):
        snapv[0, i] = y[i]
    pos = 1
    with nogil:
        for k in range(1, n_steps + 1):
            _matvec(pv, y, tmp, n)
            for i in range(n):
                y[i] = tmp[i]
            if k == stepv[pos]:
                for i in range(n):
                    snapv[pos, i] = y[i]
                pos = pos + 1
    return steps, snaps
