"""Independent reference computations used by the tests."""

import numpy as np
from scipy.sparse.linalg import minres


def minres_trace(A, b, steps):
    """Classical MINRES residual norms ||b - A x_k||, k = 0..steps (scipy)."""
    xs = []
    minres(A, b, rtol=1e-30, maxiter=steps, callback=lambda x: xs.append(x.copy()))
    return np.array([np.linalg.norm(b)] + [np.linalg.norm(b - A @ x) for x in xs])


def realified_min_residual(kappa, M, b, Q):
    """min over z in span(Q) of ||kappa z + M conj(z) - b|| on the 2n-dim real form."""
    Qm = Q
    W = M @ Qm.conj()
    A = np.block([[(kappa * Qm).real + W.real, -(kappa * Qm).imag + W.imag],
                  [(kappa * Qm).imag + W.imag, (kappa * Qm).real - W.real]])
    rhs = np.concatenate([b.real, b.imag])
    x, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    return float(np.linalg.norm(A @ x - rhs))


def grid_minmax_const(nodes, kappa, half_width=2.0, pts=801):
    """min over constant p of max_k |kappa p + l_k conj(p) - 1| by grid search
    on a square of complex p, refined twice around the best point."""
    nodes = np.asarray(nodes, dtype=complex)
    center, width = 0j, half_width
    best = (np.inf, 0j)
    for _ in range(3):
        g = np.linspace(-width, width, pts)
        P = center + g[:, None] + 1j * g[None, :]
        val = np.max(np.abs(kappa * P[..., None] + nodes * np.conj(P)[..., None] - 1), axis=-1)
        k = np.unravel_index(np.argmin(val), val.shape)
        best = (val[k], P[k])
        center, width = P[k], width * 4 / pts * 4
    return best


def minres_reorth_trace(A, b, steps):
    """Classical MINRES residuals in exact-arithmetic form: real symmetric
    Lanczos with full reorthogonalization, then the small least squares
    problem min ||beta e1 - T y|| solved densely."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n = len(b)
    beta0 = np.linalg.norm(b)
    Q = np.zeros((n, steps + 1))
    T = np.zeros((steps + 1, steps))
    Q[:, 0] = b / beta0
    out = [beta0]
    for j in range(steps):
        w = A @ Q[:, j]
        for _ in range(2):
            w -= Q[:, :j + 1] @ (Q[:, :j + 1].T @ w)
        T[:j + 1, j] = Q[:, :j + 1].T @ (A @ Q[:, j])
        h = np.linalg.norm(w)
        T[j + 1, j] = h
        rhs = np.zeros(j + 2)
        rhs[0] = beta0
        y, *_ = np.linalg.lstsq(T[:j + 2, :j + 1], rhs, rcond=None)
        out.append(float(np.linalg.norm(T[:j + 2, :j + 1] @ y - rhs)))
        if h <= 1e-14 * beta0 * max(1.0, np.abs(A).max()):
            break
        Q[:, j + 1] = w / h
    return np.array(out)
