"""Minimal residual solvers for ``kappa*z + M conj(z) = b``.

:func:`rgmres` is the R-linear GMRES method: at step ``j`` it returns the
minimizer of ``||kappa*z + M conj(z) - b||`` over the Krylov subspace
``K_j``.  :func:`csym` is its specialization to ``kappa = 0`` and complex
symmetric ``M`` (the CSYM method), driven by the complex symmetric Lanczos
recurrence.  :func:`brute_force_minresidual` solves the same minimization
from an explicit monomial Krylov basis and serves as a test oracle.
"""

from dataclasses import dataclass

import numpy as np

from . import numeric as nm
from .ddarith import DDComplex, DDReal
from .errors import ArgumentError, NumericalError
from .krylov import cs_lanczos, rlinear_arnoldi

__all__ = ["ResidualTrace", "SolveReport", "rgmres", "csym",
           "brute_force_minresidual", "default_tol"]


def default_tol(precision="double"):
    return 1e-25 if precision == "dd" else 1e-10


@dataclass(frozen=True)
class ResidualTrace:
    """Absolute residual norms ``||r_j||`` for ``j = 0, 1, ...`` (``r_0 = b``)."""

    residual_norms: np.ndarray
    rhs_norm: float

    @property
    def relative(self):
        return self.residual_norms / self.rhs_norm

    def __len__(self):
        return len(self.residual_norms)

    def iterations_to(self, rtol):
        """First step whose relative residual is at most ``rtol`` (None if never)."""
        hits = np.nonzero(self.relative <= rtol)[0]
        return int(hits[0]) if len(hits) else None


@dataclass(frozen=True)
class SolveReport:
    solution: object
    trace: ResidualTrace
    iterations: int
    converged: bool


def _check_rhs(M, b, maxit):
    n = len(b)
    if maxit is None:
        maxit = n
    if not 1 <= maxit <= n:
        raise ArgumentError(f"maxit must satisfy 1 <= maxit <= n = {n}")
    return maxit


def _realified_system(kappa, Hj, rows, j, beta, precision):
    """Real least squares equivalent of min_y ||kappa*I~ y + Hj conj(y) - beta e1||."""
    kr, ki = float(np.real(kappa)), float(np.imag(kappa))
    eye = np.eye(rows, j)
    if precision == "dd":
        Hr, Hi = Hj.re, Hj.im
        top = _hcat(Hr + kr * eye, Hi - ki * eye)
        bot = _hcat(Hi + ki * eye, kr * eye - Hr)
        A = _vcat(top, bot)
        rhs = DDReal.zeros(2 * rows)
        rhs[0] = DDReal.coerce(beta)
        return A, rhs
    Hr, Hi = Hj.real, Hj.imag
    A = np.block([[Hr + kr * eye, Hi - ki * eye],
                  [Hi + ki * eye, kr * eye - Hr]])
    rhs = np.zeros(2 * rows)
    rhs[0] = beta
    return A, rhs


def _hcat(a, b):
    return DDReal(np.hstack([a.hi, b.hi]), np.hstack([a.lo, b.lo]))


def _vcat(a, b):
    return DDReal(np.vstack([a.hi, b.hi]), np.vstack([a.lo, b.lo]))


def rgmres(kappa, M, b, tol=None, maxit=None, precision=None, reorth=True):
    """R-linear GMRES for ``kappa*z + M conj(z) = b`` with zero initial guess.

    Writing ``z = Q_j y`` and using ``M conj(Q_j) = Q_{j+1} H`` reduces step
    ``j`` to ``min_y ||kappa*I~ y + H conj(y) - beta e1||``, which is R-linear
    in ``y`` and is solved exactly as a ``2(j+1) x 2j`` real least squares
    problem in ``(Re y, Im y)``.  Iterates until the relative residual is at
    most ``tol`` or ``maxit`` steps have been taken.  An Arnoldi breakdown
    means the solution lies in the current subspace: the projected problem
    is solved on it and the solve ends.
    """
    precision = precision or nm.precision_of(M, b)
    tol = default_tol(precision) if tol is None else tol
    b = nm.asarray(b, precision)
    maxit = _check_rhs(M, b, maxit)
    bnorm = float(nm.norm(b))
    if bnorm == 0.0:
        raise ArgumentError("right-hand side is zero")
    fac = rlinear_arnoldi(M, b, maxit, reorth=reorth, precision=precision)
    ncols = fac.Q.shape[1]

    res = [bnorm]
    z = nm.asarray(np.zeros(len(b)), precision)
    converged = False
    for j in range(1, fac.steps + 1):
        rows = min(j + 1, ncols)
        Hj = fac.H[:rows, :j]
        A, rhs = _realified_system(kappa, Hj, rows, j, fac.beta, precision)
        x = nm.solve_real_ls(A, rhs)
        r = A @ x - rhs if precision == "double" else _real_matvec(A, x) - rhs
        res.append(float(nm.norm(r)))
        y = x[:j] + x[j:] * 1j
        z = fac.Q[:, :j] @ y
        # a breakdown means the projected solve on the invariant subspace is final
        if res[-1] <= tol * bnorm or fac.breakdown_step == j:
            converged = True
            break
    trace = ResidualTrace(np.array(res), bnorm)
    return SolveReport(z, trace, len(res) - 1, converged)


def _real_matvec(A, x):
    return (A * x.reshape(1, -1)).sum(axis=1)


def _givens(x, y, precision):
    # returns (c, s, r) with [[c, s], [-conj(s), c]] (x, y) = (r, 0), c real
    if precision == "dd":
        x, y = DDComplex.coerce(x), DDComplex.coerce(y)
        ax, ay = abs(x), abs(y)
        if float(ay) == 0.0:
            return DDReal(1.0), DDComplex(0.0), x
        if float(ax) == 0.0:
            return DDReal(0.0), y.conj() / ay, DDComplex.coerce(ay)
        r = (ax * ax + ay * ay).sqrt()
        c = ax / r
        s = (x / ax) * y.conj() / r
        return c, s, (x / ax) * r
    x, y = complex(x), complex(y)
    ax, ay = abs(x), abs(y)
    if ay == 0.0:
        return 1.0, 0.0, x
    if ax == 0.0:
        return 0.0, y.conjugate() / ay, complex(ay)
    r = float(np.hypot(ax, ay))
    return ax / r, (x / ax) * y.conjugate() / r, (x / ax) * r


def csym(M, b, tol=None, maxit=None, precision=None, reorth=True):
    """CSYM method for ``M conj(z) = b`` with complex symmetric ``M``.

    The Krylov basis comes from :func:`~rlkrylov.krylov.cs_lanczos`, whose
    tridiagonal Jacobi matrix ``J`` gives ``M conj(Q_j) = Q_{j+1} H_j``.  The
    projected problem ``min ||H_j x - beta e1||`` (``x = conj(y)``) is
    complex linear and is updated with one Givens rotation per step, as in
    MINRES; only the last two rotations touch a new column.
    """
    precision = precision or nm.precision_of(M, b)
    tol = default_tol(precision) if tol is None else tol
    b = nm.asarray(b, precision)
    maxit = _check_rhs(M, b, maxit)
    beta = nm.norm(b)
    bnorm = float(beta)
    if bnorm == 0.0:
        raise ArgumentError("right-hand side is zero")
    J, Q = cs_lanczos(M, b / beta, maxit, reorth=reorth, precision=precision)
    m = J.size
    alphas, betas = J.alphas, J.betas

    def offdiag(k):
        # H[k+1, k] for k = 0..m-1
        if k < m - 1:
            return betas[k]
        return J.tail

    zero = DDComplex(0.0) if precision == "dd" else 0.0
    g = [beta * (DDComplex(1.0) if precision == "dd" else 1.0)]
    rots = []
    Rcols = []
    res = [bnorm]
    converged = False
    steps = 0
    for k in range(m):
        # column k of H: rows k-1, k, k+1
        col = [betas[k - 1] if k >= 1 else zero, alphas[k], offdiag(k)]
        top = zero  # entry in row k-2 created by fill-in
        if k >= 2:
            c, s = rots[k - 2]
            a0, a1 = zero, col[0]
            top = a0 * c + a1 * s
            col[0] = -a0 * (s.conj() if precision == "dd" else np.conj(s)) + a1 * c
        if k >= 1:
            c, s = rots[k - 1]
            a0, a1 = col[0], col[1]
            col[0] = a0 * c + a1 * s
            col[1] = -a0 * (s.conj() if precision == "dd" else np.conj(s)) + a1 * c
        c, s, r = _givens(col[1], col[2], precision)
        rots.append((c, s))
        col[1], col[2] = r, zero
        Rcols.append((top, col[0], col[1]))
        gk = g[k]
        g[k] = gk * c
        g.append(-gk * (s.conj() if precision == "dd" else np.conj(s)))
        steps = k + 1
        resk = float(abs(g[k + 1]))
        res.append(resk)
        if resk <= tol * bnorm or J.breakdown_step == steps:
            converged = True
            break

    # back substitution R x = g[:steps], R upper triangular with bandwidth 3
    x = [None] * steps
    for i in range(steps - 1, -1, -1):
        s = g[i]
        if i + 1 < steps:
            s = s - Rcols[i + 1][1] * x[i + 1]
        if i + 2 < steps:
            s = s - Rcols[i + 2][0] * x[i + 2]
        x[i] = s / Rcols[i][2]
    if precision == "dd":
        from .krylov import _pack_complex
        y = _pack_complex(x).conj()
    else:
        y = np.conj(np.array(x, dtype=complex))
    z = Q[:, :steps] @ y
    return SolveReport(z, ResidualTrace(np.array(res), bnorm), steps, converged)


def brute_force_minresidual(kappa, M, b, j, max_cond=1e12):
    """``min ||kappa*z + M conj(z) - b||`` over ``z`` in ``K_j``, computed
    from the explicit basis ``b, M conj(b), M conj(M) b, ...``.

    The minimization is done on the full ``2n``-dimensional real form of
    the problem; meant for small ``j`` only.  Raises
    :class:`~rlkrylov.errors.NumericalError` when the (column-scaled) basis
    has condition number above ``max_cond``.
    """
    M = np.asarray(M, dtype=complex)
    b = np.asarray(b, dtype=complex)
    n = len(b)
    j = min(j, n)
    if j < 1:
        raise ArgumentError("j must be positive")
    V = np.empty((n, j + 1), dtype=complex)
    V[:, 0] = b
    for k in range(j):
        V[:, k + 1] = M @ V[:, k].conj()
    Vj, W = V[:, :j], V[:, 1:]
    # kappa*V c + W conj(c), c = u + i v
    A = np.block([[(kappa * Vj).real + W.real, -(kappa * Vj).imag + W.imag],
                  [(kappa * Vj).imag + W.imag, (kappa * Vj).real - W.real]])
    basis = np.vstack([Vj.real, Vj.imag])
    basis = np.hstack([basis, np.vstack([-Vj.imag, Vj.real])])
    scale = np.linalg.norm(basis, axis=0)
    cond = np.linalg.cond(basis / scale)
    if not np.isfinite(cond) or cond > max_cond:
        raise NumericalError(
            f"monomial Krylov basis is ill-conditioned (cond {cond:.2e}); use a smaller j")
    rhs = np.concatenate([b.real, b.imag])
    coef, *_ = np.linalg.lstsq(A / scale, rhs, rcond=None)
    return float(np.linalg.norm((A / scale) @ coef - rhs))
