"""Min-max residual bounds for R-linear GMRES and CSYM.

For condiagonalizable ``M = X Lambda conj(X^{-1})`` the residual after ``j``
steps on ``kappa*z + M conj(z) = b`` is at most

    cond(X) * E_j * ||b||,   E_j = min_{p in P_{j-1}(r2)} max_k |kappa p(l_k) + l_k conj(p(l_k)) - 1|,

with nodes ``l_k`` from :func:`~rlkrylov.coneig.transported_nodes`.  For
complex symmetric ``M``, ``X`` can be taken unitary and ``cond(X) = 1``.

``E_j`` is a discrete complex Chebyshev problem, real-affine in the real and
imaginary parts of the coefficients of ``p``; it is solved here with
Lawson's iteratively reweighted least squares.  ``p`` is parameterized in the
orthonormal basis of ``P(r2)`` for the nodes (complex symmetric Lanczos on
``diag(nodes)``), which keeps the least squares problems well conditioned.
"""

from dataclasses import dataclass

import numpy as np

from .coneig import transported_nodes
from .errors import ArgumentError
from .krylov import SYM_TOL, cs_lanczos
from .polyspace import R2Polynomial, orthopoly_eval

__all__ = ["LawsonResult", "BoundTrace", "lawson_minmax", "gmres_bound_trace",
           "LAWSON_TOL", "LAWSON_MAXIT", "WEIGHT_FLOOR"]

LAWSON_TOL = 1e-8
LAWSON_MAXIT = 500
WEIGHT_FLOOR = 1e-300


@dataclass(frozen=True)
class LawsonResult:
    """``E`` is the max residual of ``p`` (an upper bound for the min-max
    value), ``lower`` the weighted rms residual for ``weights`` (a lower
    bound); they meet at convergence."""

    E: float
    p: R2Polynomial
    weights: np.ndarray
    converged: bool
    lower: float
    iterations: int


@dataclass(frozen=True)
class BoundTrace:
    """``B[j-1] = cond_X * E[j-1] * ||b||`` for ``j = 1..steps``."""

    E: np.ndarray
    B: np.ndarray
    converged: np.ndarray
    lower: np.ndarray
    cond_X: float
    bnorm: float
    nodes: np.ndarray
    weights: np.ndarray


def _orthobasis(nodes):
    """Node values (N x s) and coefficient forms of the orthonormal ``p_0..p_{s-1}``
    for uniform weights; ``s < N`` only if the nodes violate genericity."""
    N = len(nodes)
    r = np.full(N, 1.0 / np.sqrt(N), dtype=complex)
    J, Q = cs_lanczos(nodes, r, N)
    s = J.size
    _, polys = orthopoly_eval(J, nodes, s - 1)
    return Q[:, :s] * np.sqrt(N), polys


def _node_solve(kappa, nodes):
    """Per-node solution of ``kappa y + l conj(y) = 1``; max residual of the
    least squares solutions (zero unless ``|kappa| = |l|``)."""
    res = 0.0
    y = np.empty(len(nodes), dtype=complex)
    for k, lam in enumerate(nodes):
        A = np.array([[kappa.real + lam.real, -kappa.imag + lam.imag],
                      [kappa.imag + lam.imag, kappa.real - lam.real]])
        sol, *_ = np.linalg.lstsq(A, np.array([1.0, 0.0]), rcond=None)
        y[k] = sol[0] + 1j * sol[1]
        res = max(res, float(np.linalg.norm(A @ sol - np.array([1.0, 0.0]))))
    return y, res


def lawson_minmax(nodes, kappa, j, tol=LAWSON_TOL, maxit=LAWSON_MAXIT, basis=None):
    """Discrete min-max ``min_{p in P_j(r2)} max_k |kappa p(l_k) + l_k conj(p(l_k)) - 1|``.

    Lawson iteration: solve the weighted least squares problem, then
    ``w_k <- w_k |res_k|`` renormalized (floor 1e-300), until
    ``(max|res| - rms_w) / max|res| <= tol`` or ``maxit`` iterations.  The
    best iterate seen is returned, with ``converged`` false if the cap was
    hit.  When ``P_j(r2)`` spans every vector of node values the problem
    splits into one scalar equation per node and is solved directly.
    """
    nodes = np.atleast_1d(np.asarray(nodes, dtype=complex))
    kappa = complex(kappa)
    N = len(nodes)
    if j < 0:
        raise ArgumentError("degree index must be nonnegative")
    if N == 0:
        raise ArgumentError("need at least one node")
    P, polys = basis if basis is not None else _orthobasis(nodes)
    s = min(j + 1, P.shape[1])
    uniform = np.full(N, 1.0 / N)

    def to_poly(c):
        p = R2Polynomial(np.zeros(j + 1, dtype=complex))
        for i in range(len(c)):
            p = p + polys[i].scale(c[i])
        return p.padded(j)

    if s == N:
        y, res = _node_solve(kappa, nodes)
        c = np.linalg.solve(P, y)
        return LawsonResult(res, to_poly(c), uniform, True, res, 0)

    # real parameters (Re c, Im c); residual kappa P c + l conj(P c) - 1
    Ps = P[:, :s]
    Lc = nodes[:, None] * Ps.conj()
    Ac = np.hstack([kappa * Ps + Lc, 1j * (kappa * Ps - Lc)])
    A = np.vstack([Ac.real, Ac.imag])
    rhs = np.concatenate([np.ones(N), np.zeros(N)])

    w = uniform.copy()
    best = None
    lower = 0.0
    converged = False
    it = 0
    for it in range(1, maxit + 1):
        sw = np.sqrt(np.concatenate([w, w]))
        x, *_ = np.linalg.lstsq(A * sw[:, None], rhs * sw, rcond=None)
        r = A @ x - rhs
        absr = np.hypot(r[:N], r[N:])
        emax = float(np.max(absr))
        rms = float(np.sqrt(np.sum(w * absr ** 2)))
        # each weighted least squares optimum is a lower bound for E
        lower = max(lower, rms)
        if best is None or emax < best[0]:
            best = (emax, x, w.copy(), rms)
        if emax == 0.0 or (emax - rms) / emax <= tol:
            converged = True
            break
        w = np.maximum(w * absr, WEIGHT_FLOOR)
        w /= np.sum(w)
    emax, x, wbest, _ = best
    c = x[:s] + 1j * x[s:]
    return LawsonResult(emax, to_poly(c), wbest, converged, lower, it)


def gmres_bound_trace(M, b, kappa=0.0, steps=None, tol=LAWSON_TOL, maxit=LAWSON_MAXIT):
    """Bounds ``B_j = cond(X) E_j ||b||`` for ``j = 1..steps``.

    ``E_j`` is made non-increasing by carrying the best polynomial forward
    (``P_{j-2}`` is contained in ``P_{j-1}``).  For complex symmetric ``M``
    ``cond(X) = 1``.
    """
    M = np.asarray(M, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = len(b)
    steps = n if steps is None else steps
    if not 1 <= steps <= n:
        raise ArgumentError(f"steps must satisfy 1 <= steps <= n = {n}")
    nodes, weights, cond_X = transported_nodes(M, b)
    if np.linalg.norm(M - M.T) <= SYM_TOL * max(np.linalg.norm(M), np.finfo(float).tiny):
        cond_X = 1.0
    basis = _orthobasis(nodes)
    E, lower, conv = [], [], []
    for j in range(1, steps + 1):
        res = lawson_minmax(nodes, kappa, j - 1, tol=tol, maxit=maxit, basis=basis)
        e = res.E if not E else min(res.E, E[-1])
        E.append(e)
        lower.append(min(res.lower, e))
        conv.append(res.converged)
    E = np.array(E)
    bnorm = float(np.linalg.norm(b))
    return BoundTrace(E, cond_X * E * bnorm, np.array(conv), np.array(lower),
                      float(cond_X), bnorm, nodes, weights)
