"""Consimilarity: coneigenvalues, con-Schur form and condiagonalization.

Two matrices are consimilar when ``N = X^{-1} M conj(X)``.  ``M`` is
contriangularizable (``M = U R U^T``, ``U`` unitary, ``R`` upper
triangular) exactly when every eigenvalue of ``M conj(M)`` is real and
nonnegative; the moduli of the coneigenvalues are then the square roots of
those eigenvalues, and distinct moduli make ``M`` condiagonalizable,
``M = X Lambda conj(X^{-1})``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (ArgumentError, DegenerateConeigenvaluesError,
                     NotContriangularizableError)
from .numeric import cond2, eig_dense, inverse_iteration

__all__ = ["ConSchur", "ConDiagonalization", "coneigenvalue_moduli",
           "is_condiagonalizable", "con_schur", "con_diagonalize", "phase_diag",
           "transported_nodes", "isometry_phase_factor", "random_condiagonalizable",
           "IMAG_TOL", "GAP_TOL"]

IMAG_TOL = 1e-10
GAP_TOL = 1e-8
DEFLATION_TOL = 1e-8


@dataclass(frozen=True)
class ConSchur:
    """``M = U R U^T`` with ``U`` unitary and ``R`` upper triangular with a
    real, nonnegative, ascending diagonal."""

    U: np.ndarray
    R: np.ndarray


@dataclass(frozen=True)
class ConDiagonalization:
    """``M = X diag(Lambda) conj(X^{-1})`` with ``Lambda`` real, nonnegative
    and ascending; ``cond_X`` is the spectral condition number of ``X``."""

    X: np.ndarray
    Lambda: np.ndarray
    cond_X: float


def _square(M):
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ArgumentError(f"expected a square matrix, got shape {M.shape}")
    return M


def _mconjm_spectrum(M, tol):
    A = M @ M.conj()
    ev = eig_dense(A)
    # rounding in forming A is of order eps ||M||^2, which can far exceed eps ||A||
    scale = np.linalg.norm(M) ** 2
    ok = np.all(np.abs(ev.imag) <= tol * scale) and np.all(ev.real >= -tol * scale)
    return ev, scale, ok


def coneigenvalue_moduli(M, tol=IMAG_TOL):
    """Moduli of the coneigenvalues of ``M``, ascending.

    These are the square roots of the eigenvalues of ``M conj(M)``, and the
    radii of the circles making up the spectrum of ``z -> M conj(z)``.
    Raises :class:`NotContriangularizableError` if some eigenvalue of
    ``M conj(M)`` is not real and nonnegative within ``tol * ||M||_F^2``.
    """
    M = _square(M)
    ev, scale, ok = _mconjm_spectrum(M, tol)
    if not ok:
        bad = ev[(np.abs(ev.imag) > tol * scale) | (ev.real < -tol * scale)]
        raise NotContriangularizableError(
            f"M conj(M) has eigenvalues off the nonnegative real axis, e.g. {bad[0]:.6g}; "
            "M is not contriangularizable")
    return np.sort(np.sqrt(np.clip(ev.real, 0.0, None)))


def is_condiagonalizable(M, tol=IMAG_TOL, gap_tol=GAP_TOL):
    """True if the eigenvalues of ``M conj(M)`` are real, nonnegative and
    pairwise distinct (relative gap above ``gap_tol``).

    Distinct moduli are sufficient for condiagonalizability and hold for
    almost every condiagonalizable matrix, so this is the predicate used
    when counting random matrices.
    """
    M = _square(M)
    ev, scale, ok = _mconjm_spectrum(M, tol)
    if not ok:
        return False
    lam = np.sort(ev.real)
    if len(lam) < 2:
        return True
    return bool(np.min(np.diff(lam)) > gap_tol * max(np.max(np.abs(lam)), np.finfo(float).tiny))


def _coneigenvector(B, sigma2, scale):
    """Unit ``v`` with ``B conj(v) = sigma v``, ``sigma = sqrt(sigma2) >= 0``."""
    A = B @ B.conj()
    v = inverse_iteration(A, sigma2)
    w = B @ v.conj()
    mu = np.vdot(v, w)
    sigma = np.sqrt(max(sigma2, 0.0))
    if np.linalg.norm(w - mu * v) <= 1e-8 * max(scale, 1.0):
        # circle freedom: rotate the phase so the coneigenvalue is sigma >= 0
        if abs(mu) > 0.0:
            v = v * np.exp(0.5j * np.angle(mu))
        return _refine_coneigenvector(B, v, sigma)
    # eigenvalue of M conj(M) with a multidimensional eigenspace
    x = v + w / sigma if sigma > 0 else v
    if np.linalg.norm(x) < 0.5:
        v = 1j * v
        x = v + (B @ v.conj()) / sigma
    return x / np.linalg.norm(x)


def _refine_coneigenvector(B, v, sigma):
    """Polish ``B conj(v) = sigma v`` by inverse iteration on the real form
    ``[[Re B, Im B], [Im B, -Re B]]``, whose eigenvector residual scales with
    ``||B||`` rather than with ``||B conj(B)||`` and its conditioning."""
    n = len(v)
    C = np.block([[B.real, B.imag], [B.imag, -B.real]])
    x = inverse_iteration(C, sigma, iters=2, start=np.concatenate([v.real, v.imag])).real
    u = x[:n] + 1j * x[n:]
    u /= np.linalg.norm(u)
    if np.linalg.norm(B @ u.conj() - sigma * u) < np.linalg.norm(B @ v.conj() - sigma * v):
        return u
    return v


def _complete_unitary(v, rng):
    n = len(v)
    if rng is None:
        # Householder reflector P with P v = e^{i theta} e1, so P e1 = e^{-i theta} v
        theta = np.angle(v[0]) if v[0] != 0 else 0.0
        w = v - np.exp(1j * theta) * np.eye(n)[0]
        nw = np.linalg.norm(w)
        P = np.eye(n, dtype=complex)
        if nw > 0:
            w = w / nw
            P -= 2.0 * np.outer(w, w.conj())
        P[:, 0] *= np.exp(1j * theta)
        return P
    G = np.column_stack([v, rng.standard_normal((n, n - 1)) + 1j * rng.standard_normal((n, n - 1))])
    W, _ = np.linalg.qr(G)
    W[:, 0] = v
    # re-orthogonalize the remaining columns against the exact v
    W[:, 1:] -= np.outer(v, v.conj() @ W[:, 1:])
    W[:, 1:], _ = np.linalg.qr(W[:, 1:])
    return W


def con_schur(M, tol=IMAG_TOL, rng=None):
    """Unitary contriangularization ``M = U R U^T``.

    Deflation: at each stage an eigenvector of ``B conj(B)`` (``B`` the
    trailing block) for its smallest eigenvalue ``sigma^2`` is turned into a
    coneigenvector ``B conj(v) = sigma v`` and completed to a unitary matrix.
    The completion is a Householder reflector, or a random unitary drawn from
    ``rng`` when given.  The diagonal of ``R`` comes out real, nonnegative
    and ascending.
    """
    M = _square(M)
    n = M.shape[0]
    coneigenvalue_moduli(M, tol)  # raises when not contriangularizable
    scale = np.linalg.norm(M)
    U = np.eye(n, dtype=complex)
    A = M.copy()
    for k in range(n - 1):
        B = A[k:, k:]
        ev = eig_dense(B @ B.conj())
        sigma2 = float(np.min(ev.real))
        v = _coneigenvector(B, sigma2, scale)
        W = np.eye(n, dtype=complex)
        W[k:, k:] = _complete_unitary(v, rng)
        A = W.conj().T @ A @ W.conj()
        U = U @ W
    # absorb the phases of the diagonal: R_kk -> |R_kk|
    d = np.exp(0.5j * np.angle(np.diag(A)))
    U = U * d
    R = U.conj().T @ M @ U.conj()
    low = np.linalg.norm(np.tril(R, -1))
    if low > DEFLATION_TOL * max(scale, np.finfo(float).tiny):
        raise DegenerateConeigenvaluesError(
            f"con-Schur deflation failed: discarded lower part {low:.3g} relative to ||M|| = "
            f"{scale:.3g}; M conj(M) is defective (degenerate coneigenvalues)")
    R = np.triu(R)
    R[np.diag_indices(n)] = np.diag(R).real
    return ConSchur(U, R)


def con_diagonalize(M, gap_tol=GAP_TOL, tol=IMAG_TOL):
    """Condiagonalization ``M = X Lambda conj(X^{-1})`` for distinct moduli.

    From the con-Schur form ``M = U R U^T`` an upper triangular ``T`` with
    unit diagonal and ``R conj(T) = T Lambda`` is built column by column;
    each entry solves ``a conj(x) - b x = -c`` with real ``a != b``.  Then
    ``X = U T``.
    """
    cs = con_schur(M, tol=tol)
    R = cs.R
    n = R.shape[0]
    lam = np.diag(R).real.copy()
    top = max(np.max(np.abs(lam)), np.finfo(float).tiny)
    if n > 1 and np.min(np.diff(lam)) <= gap_tol * top:
        raise DegenerateConeigenvaluesError(
            "degenerate coneigenvalues: two moduli coincide within relative gap "
            f"{gap_tol:g}; M is not condiagonalized")
    T = np.eye(n, dtype=complex)
    for k in range(1, n):
        for l in range(k - 1, -1, -1):
            c = R[l, l + 1:k + 1] @ T[l + 1:k + 1, k].conj()
            a, b = lam[l], lam[k]
            T[l, k] = -c.real / (a - b) + 1j * c.imag / (a + b)
    X = cs.U @ T
    return ConDiagonalization(X, lam, cond2(X))


def phase_diag(v):
    """Diagonal of the unitary ``D`` with ``D^{-1} v`` real and nonnegative.

    ``d_j = v_j / |v_j|``, and ``d_j = 1`` where ``v_j = 0``.
    """
    v = np.asarray(v, dtype=complex)
    a = np.abs(v)
    d = np.ones_like(v)
    nz = a > 0
    d[nz] = v[nz] / a[nz]
    return d


def transported_nodes(M, b):
    """Nodes, weights and ``cond(X)`` of the scalar problem equivalent to
    ``M conj(z) = b``.

    With ``M = X Lambda conj(X^{-1})`` and ``D = phase_diag(X^{-1} b)``, the
    nodes are the diagonal of ``D^{-1} Lambda conj(D)``, i.e.
    ``Lambda_j e^{-2 i theta_j}``, and the weights are ``r_j^2`` with
    ``r = D^{-1} X^{-1} b`` real.  A diagonal ``M`` is taken as is
    (``X = I``), repeated moduli included.
    """
    M = _square(M)
    b = np.asarray(b, dtype=complex)
    if not np.any(M - np.diag(np.diag(M))):
        X, lam, cond_X = np.eye(len(b)), np.diag(M), 1.0
    else:
        cd = con_diagonalize(M)
        X, lam, cond_X = cd.X, cd.Lambda, cd.cond_X
    c = np.linalg.solve(X, b)
    d = phase_diag(c)
    r = (d.conj() * c).real
    nodes = lam * d.conj() ** 2
    return nodes, r ** 2, cond_X


def isometry_phase_factor(U, V, tol=1e-10):
    """Real orthogonal ``R`` with ``V = U R``, for isometries with ``U U^T = V V^T``.

    ``R = U^* V``.
    """
    U = np.asarray(U, dtype=complex)
    V = np.asarray(V, dtype=complex)
    if U.shape != V.shape:
        raise ArgumentError("U and V must have the same shape")
    m = U.shape[1]
    if (np.linalg.norm(U.conj().T @ U - np.eye(m)) > tol
            or np.linalg.norm(V.conj().T @ V - np.eye(m)) > tol):
        raise ArgumentError("U and V must have orthonormal columns")
    if np.linalg.norm(U @ U.T - V @ V.T) > tol:
        raise ArgumentError("U U^T and V V^T differ; no real orthogonal factor exists")
    R = U.conj().T @ V
    if np.linalg.norm(R.imag) > 1e-8 or np.linalg.norm(V - U @ R.real) > 1e-8:
        raise ArgumentError("U^* V is not real orthogonal within tolerance")
    return R.real


def random_condiagonalizable(n, rng, cond=10.0, moduli=None, symmetric=False):
    """Random ``M = X diag(lam) conj(X^{-1})`` with ``cond(X) = cond``.

    ``lam`` has distinct moduli (``moduli`` if given, otherwise uniform in
    ``[1, 10]``) and random phases.  With ``symmetric`` set, ``X`` is unitary
    and ``M = X diag(lam) X^T`` is complex symmetric.
    Returns ``(M, X, lam)``.
    """
    if moduli is None:
        moduli = np.sort(rng.uniform(1.0, 10.0, n))
    moduli = np.asarray(moduli, dtype=float)
    lam = moduli * np.exp(2j * np.pi * rng.uniform(size=n))

    def haar():
        Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        Qz, Rz = np.linalg.qr(Z)
        return Qz * (np.diag(Rz) / np.abs(np.diag(Rz)))

    if symmetric:
        X = haar()
        return X @ np.diag(lam) @ X.T, X, lam
    s = np.geomspace(1.0, cond, n) if n > 1 else np.ones(1)
    X = haar() @ np.diag(s) @ haar().conj().T
    M = X @ np.diag(lam) @ np.linalg.inv(X).conj()
    return M, X, lam
