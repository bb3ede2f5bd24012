"""Krylov subspaces of the antilinear operator ``z -> M conj(z)``.

The Krylov subspace generated by ``b`` is

    K_j = span{b, M conj(b), M conj(M) b, M conj(M) M conj(b), ...}

(complex span).  Adding ``kappa*I`` to the operator does not change it, so
everything here is independent of the shift.  :func:`rlinear_arnoldi`
computes an orthonormal basis ``Q`` and an upper Hessenberg ``H`` with

    M conj(Q[:, :m]) = Q[:, :m+1] H,

and for complex symmetric ``M`` :func:`cs_lanczos` obtains the same
factorization from a three-term recurrence, with ``H`` a complex symmetric
tridiagonal (Jacobi) matrix.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import numeric as nm
from .ddarith import DDComplex, DDReal
from .errors import ArgumentError

__all__ = ["KrylovFactorization", "JacobiMatrix", "rlinear_arnoldi",
           "cs_lanczos", "krylov_similarity_check", "breakdown_tol",
           "operator_norm_scale"]

SYM_TOL = 1e-12


def breakdown_tol(precision="double"):
    """Relative breakdown threshold (multiplies ``||M||_F``)."""
    return 1e-28 if precision == "dd" else 1e-13


def operator_norm_scale(M):
    """Frobenius norm of ``M`` (of ``diag(M)`` for a 1-D ``M``)."""
    if isinstance(M, (DDComplex, DDReal)):
        M = nm.to_complex(M)
    return float(np.linalg.norm(np.asarray(M)))


def _pack_complex(values):
    if any(isinstance(v, (DDComplex, DDReal)) for v in values):
        vs = [DDComplex.coerce(v) for v in values]
        return DDComplex(DDReal(np.array([v.re.hi for v in vs], dtype=float),
                                np.array([v.re.lo for v in vs], dtype=float)),
                         DDReal(np.array([v.im.hi for v in vs], dtype=float),
                                np.array([v.im.lo for v in vs], dtype=float)))
    return np.array(values, dtype=complex)


def _pack_real(values):
    if any(isinstance(v, DDReal) for v in values):
        vs = [DDReal.coerce(v) for v in values]
        return DDReal(np.array([v.hi for v in vs], dtype=float),
                      np.array([v.lo for v in vs], dtype=float))
    return np.array([float(v) for v in values], dtype=float)


def _conj_transpose_times(Q, w):
    return Q.conj().T @ w


def _orthogonalize(Q, w, passes):
    """Classical Gram-Schmidt against the columns of ``Q``, ``passes`` times."""
    h = None
    for _ in range(passes):
        c = _conj_transpose_times(Q, w)
        w = w - Q @ c
        h = c if h is None else h + c
    return w, h


@dataclass(frozen=True)
class KrylovFactorization:
    """Result of the R-linear Arnoldi process.

    ``Q`` has ``steps + 1`` orthonormal columns, or ``steps`` columns when the
    process broke down (the Krylov space became invariant); ``H`` is the
    ``(steps+1) x steps`` upper Hessenberg matrix whose subdiagonal is real and
    nonnegative, with a zero last row after a breakdown.  ``beta`` is
    ``||b||``.
    """

    Q: object
    H: object
    steps: int
    beta: object
    breakdown_step: Optional[int] = None
    precision: str = "double"

    @property
    def Qm(self):
        """The first ``steps`` basis vectors."""
        return self.Q[:, :self.steps]

    @property
    def H_square(self):
        """The leading ``steps x steps`` block of ``H``."""
        return self.H[:self.steps, :self.steps]


@dataclass(frozen=True)
class JacobiMatrix:
    """Complex symmetric tridiagonal matrix with diagonal ``alphas`` and
    positive off-diagonal ``betas``.

    ``tail`` is the next off-diagonal entry produced by the recurrence (the
    ``(m+1, m)`` entry of the rectangular Hessenberg form, zero after a
    breakdown).
    """

    alphas: object
    betas: object
    tail: object = 0.0
    breakdown_step: Optional[int] = None

    def __post_init__(self):
        if len(self.betas) != max(len(self.alphas) - 1, 0):
            raise ArgumentError("a Jacobi matrix of size m needs m-1 off-diagonal entries")
        if len(self.betas) and np.min(nm.to_float(self.betas)) <= 0.0:
            raise ArgumentError("Jacobi off-diagonal entries must be positive")

    @property
    def size(self):
        return len(self.alphas)

    def to_dense(self):
        """The ``m x m`` matrix as a complex numpy array."""
        a = nm.to_complex(self.alphas)
        b = nm.to_float(self.betas)
        return np.diag(a) + np.diag(b, 1) + np.diag(b, -1)

    def hessenberg(self):
        """The ``(m+1) x m`` Hessenberg form (double precision)."""
        m = self.size
        H = np.zeros((m + 1, m), dtype=complex)
        H[:m, :m] = self.to_dense()
        if m:
            H[m, m - 1] = float(nm.to_float(self.tail))
        return H


def _check_start(M, b, m):
    shape = np.shape(M) if not hasattr(M, "shape") else M.shape
    n = len(b)
    if len(shape) == 2 and shape != (n, n):
        raise ArgumentError(f"M of shape {shape} does not match b of length {n}")
    if len(shape) == 1 and shape[0] != n:
        raise ArgumentError(f"diagonal of length {shape[0]} does not match b of length {n}")
    if m < 1 or m > n:
        raise ArgumentError(f"number of steps must satisfy 1 <= m <= n = {n}, got {m}")


def rlinear_arnoldi(M, b, m, reorth=True, precision=None):
    """Run ``m`` steps of the R-linear Arnoldi process on ``z -> M conj(z)``.

    The candidate vector at step ``j`` is ``M conj(q_j)``, orthogonalized
    against all previous basis vectors (two passes of classical Gram-Schmidt
    when ``reorth`` is set, one modified Gram-Schmidt pass otherwise).  When
    its norm drops to ``breakdown_tol * ||M||_F`` the space is invariant and
    the process stops, recording ``breakdown_step``.

    ``M`` may be a 1-D array, meaning ``diag(M)``.  ``precision`` defaults to
    the precision of the inputs.
    """
    precision = precision or nm.precision_of(M, b)
    M = nm.asarray(M, precision)
    b = nm.asarray(b, precision)
    _check_start(M, b, m)
    beta = nm.norm(b)
    if float(beta) == 0.0:
        raise ArgumentError("starting vector is zero")
    tol = breakdown_tol(precision) * operator_norm_scale(M)

    Q = [b / beta]
    cols = []
    breakdown = None
    for j in range(m):
        w = nm.apply_antilinear(0, M, Q[j])
        Qj = nm.stack_columns(Q)
        if reorth:
            w, h = _orthogonalize(Qj, w, passes=2)
        else:
            h = []
            for q in Q:
                c = nm.vdot(q, w)
                w = w - q * c
                h.append(c)
            h = _pack_complex(h)
        hn = nm.norm(w)
        cols.append((h, hn))
        if float(hn) <= tol:
            breakdown = j + 1
            break
        Q.append(w / hn)

    steps = len(cols)
    if precision == "dd":
        H = DDComplex.zeros((steps + 1, steps))
    else:
        H = np.zeros((steps + 1, steps), dtype=complex)
    for j, (h, hn) in enumerate(cols):
        H[:j + 1, j] = h
        if breakdown is None or j + 1 < breakdown:
            H[j + 1, j] = hn
    return KrylovFactorization(nm.stack_columns(Q), H, steps, beta, breakdown, precision)


def cs_lanczos(M, b, m, reorth=True, precision=None, sym_tol=SYM_TOL):
    """Complex symmetric Lanczos process for ``z -> M conj(z)``, ``M^T = M``.

    Runs the three-term recurrence

        beta_j q_{j+1} = M conj(q_j) - alpha_j q_j - beta_{j-1} q_{j-1},
        alpha_j = <M conj(q_j), q_j>,  beta_j = ||.|| > 0,

    starting from the unit vector ``b``.  With ``reorth`` the new vector is
    additionally reorthogonalized against all previous ones (two classical
    Gram-Schmidt passes).  Returns ``(J, Q)``; ``Q`` has ``m + 1`` columns
    unless the recurrence broke down, in which case ``J`` is truncated and
    ``J.breakdown_step`` is set.
    """
    precision = precision or nm.precision_of(M, b)
    M = nm.asarray(M, precision)
    b = nm.asarray(b, precision)
    _check_start(M, b, m)
    scale = operator_norm_scale(M)
    if M.ndim == 2:
        Mc = nm.to_complex(M)
        if np.linalg.norm(Mc - Mc.T) > sym_tol * max(scale, np.finfo(float).tiny):
            raise ArgumentError("cs_lanczos needs a complex symmetric matrix (M^T = M)")
    if abs(float(nm.norm(b)) - 1.0) > 1e-10:
        raise ArgumentError("cs_lanczos needs a unit starting vector")
    # exactly unit in the working precision: a residual norm defect shows up
    # as a backward error in J of the same size
    b = b / nm.norm(b)
    tol = breakdown_tol(precision) * scale

    Q = [b]
    alphas, betas = [], []
    tail = 0.0
    breakdown = None
    q_prev, beta_prev = None, None
    for j in range(m):
        q = Q[j]
        w = nm.apply_antilinear(0, M, q)
        alpha = nm.vdot(q, w)
        w = w - q * alpha
        if q_prev is not None:
            w = w - q_prev * beta_prev
        if reorth:
            w, _ = _orthogonalize(nm.stack_columns(Q), w, passes=2)
        beta = nm.norm(w)
        alphas.append(alpha)
        if float(beta) <= tol:
            breakdown = j + 1
            break
        if j + 1 < m:
            betas.append(beta)
        else:
            tail = beta
        q_prev, beta_prev = q, beta
        Q.append(w / beta)

    J = JacobiMatrix(_pack_complex(alphas), _pack_real(betas) if betas else
                     (DDReal.zeros(0) if precision == "dd" else np.zeros(0)),
                     tail, breakdown)
    return J, nm.stack_columns(Q)


def _orth_basis(A):
    Qa, Ra = np.linalg.qr(A)
    return Qa


def krylov_similarity_check(M, b, X, steps=None):
    """Largest principal angle between ``X^{-1} K_j(M; b)`` and ``K_j(N; c)``
    with ``N = X^{-1} M conj(X)``, ``c = X^{-1} b``, for ``j = 1..steps``.

    All angles vanish in exact arithmetic; the returned array measures how
    far the computed subspaces are from coinciding.
    """
    M = np.asarray(M, dtype=complex)
    b = np.asarray(b, dtype=complex)
    X = np.asarray(X, dtype=complex)
    n = len(b)
    if X.shape != (n, n):
        raise ArgumentError(f"X must be {n} x {n}")
    s = np.linalg.svd(X, compute_uv=False)
    if s[-1] <= n * np.finfo(float).eps * s[0]:
        raise ArgumentError("X is numerically singular")
    steps = n if steps is None else steps
    Xinv = np.linalg.inv(X)
    N = Xinv @ M @ X.conj()
    c = Xinv @ b
    fM = rlinear_arnoldi(M, b, steps)
    fN = rlinear_arnoldi(N, c, steps)
    jmax = min(fM.Q.shape[1], fN.Q.shape[1], steps)
    angles = np.empty(jmax)
    for j in range(1, jmax + 1):
        A = _orth_basis(Xinv @ fM.Q[:, :j])
        B = fN.Q[:, :j]
        # sine of the largest principal angle
        sin = np.linalg.norm(A - B @ (B.conj().T @ A), 2)
        angles[j - 1] = np.arcsin(min(sin, 1.0))
    return angles
