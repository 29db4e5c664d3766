"""Compiled inner loop for accelerated projected gradient on sparse least squares.

The objective is ``0.5 * max(0, <h, x> - tau)**2 + 0.5 * w * ||K x - d||^2``
with the hinge term optional. ``K`` and ``K^T`` arrive as CSR arrays so each
step costs one product with each.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def _csr_matvec(indptr, indices, data, x, out):
    for i in range(out.size):
        acc = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            acc += data[p] * x[indices[p]]
        out[i] = acc


@njit(cache=True)
def objective_value(Kp, Ki, Kd, d, w, hv, use_hinge, tau, x):
    r = np.empty(d.size)
    _csr_matvec(Kp, Ki, Kd, x, r)
    sq = 0.0
    for k in range(d.size):
        r[k] -= d[k]
        sq += r[k] * r[k]
    val = 0.5 * w * sq
    if use_hinge:
        s = -tau
        for i in range(x.size):
            s += hv[i] * x[i]
        if s > 0.0:
            val += 0.5 * s * s
    return val


@njit(cache=True)
def fista_block(Kp, Ki, Kd, Tp, Ti, Td, d, w, hv, use_hinge, tau, lo, hi, x0, f0, L, h, target):
    """Run ``h`` accelerated projected gradient steps from ``x0``.

    Returns ``(best point, best value, steps taken, status)`` where status is
    0 for a full block, 1 when ``target`` was reached and -1 on a non-finite
    value.
    """
    n = x0.size
    m = d.size
    inv_L = 1.0 / L
    x = x0.copy()
    y = np.empty(n)
    y_prev = x0.copy()
    g = np.empty(n)
    r_y = np.empty(m)
    r_prev = np.empty(m)
    _csr_matvec(Kp, Ki, Kd, x0, r_prev)
    for k in range(m):
        r_prev[k] -= d[k]
    r_x = r_prev.copy()
    s_prev = -tau
    if use_hinge:
        for i in range(n):
            s_prev += hv[i] * x0[i]
    s_x = s_prev
    best = x0.copy()
    f_best = f0
    steps = 0
    status = 0
    for t in range(1, h + 1):
        _csr_matvec(Tp, Ti, Td, r_x, g)
        a = s_x if (use_hinge and s_x > 0.0) else 0.0
        for i in range(n):
            v = x[i] - (w * g[i] + a * hv[i]) * inv_L
            if v < lo[i]:
                v = lo[i]
            elif v > hi[i]:
                v = hi[i]
            y[i] = v
        _csr_matvec(Kp, Ki, Kd, y, r_y)
        sq = 0.0
        for k in range(m):
            r_y[k] -= d[k]
            sq += r_y[k] * r_y[k]
        f_y = 0.5 * w * sq
        s_y = -tau
        if use_hinge:
            for i in range(n):
                s_y += hv[i] * y[i]
            if s_y > 0.0:
                f_y += 0.5 * s_y * s_y
        steps += 1
        if not np.isfinite(f_y):
            status = -1
            break
        if f_y < f_best:
            f_best = f_y
            best[:] = y
        if f_y <= target:
            status = 1
            break
        beta = (t - 1.0) / (t + 2.0)
        for i in range(n):
            x[i] = y[i] + beta * (y[i] - y_prev[i])
            y_prev[i] = y[i]
        for k in range(m):
            r_x[k] = r_y[k] + beta * (r_y[k] - r_prev[k])
            r_prev[k] = r_y[k]
        s_x = s_y + beta * (s_y - s_prev)
        s_prev = s_y
    return best, f_best, steps, status
