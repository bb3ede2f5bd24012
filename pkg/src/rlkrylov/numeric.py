"""Numeric core: precision handling, the antilinear product, real least
squares and a dense complex eigensolver.

Two precisions are supported throughout the Krylov code:

``"double"``
    plain numpy ``complex128`` / ``float64`` arrays;
``"dd"``
    :class:`~rlkrylov.ddarith.DDComplex` / :class:`~rlkrylov.ddarith.DDReal`
    double-double arrays.

Matrices are ordinary 2-D numpy arrays (row-major, numpy's default) or their
double-double counterparts.  Algorithms are written once against the small
set of helpers below (:func:`vdot`, :func:`norm`, :func:`stack_columns`, ...)
so that the same code runs in either precision.
"""

import numpy as np

from .ddarith import DDComplex, DDReal, EPS as DD_EPS
from .errors import ArgumentError, ConvergenceError, NumericalError

__all__ = ["PRECISIONS", "machine_eps", "precision_of", "asarray", "to_complex",
           "to_float", "vdot", "norm", "stack_columns", "apply_antilinear",
           "solve_real_ls", "eig_dense", "hessenberg", "inverse_iteration",
           "singular_values", "cond2"]

PRECISIONS = ("double", "dd")


def machine_eps(precision="double"):
    """Unit roundoff of ``precision``."""
    _check_precision(precision)
    return DD_EPS if precision == "dd" else np.finfo(float).eps


def _check_precision(precision):
    if precision not in PRECISIONS:
        raise ArgumentError(f"unknown precision {precision!r}; expected one of {PRECISIONS}")


def precision_of(*arrays):
    """``"dd"`` if any argument is a double-double array, else ``"double"``."""
    for a in arrays:
        if isinstance(a, (DDComplex, DDReal)):
            return "dd"
    return "double"


def asarray(x, precision="double"):
    """Convert ``x`` to a complex array of the requested precision."""
    _check_precision(precision)
    if precision == "dd":
        return DDComplex.coerce(x)
    if isinstance(x, (DDComplex, DDReal)):
        return np.asarray(x.to_complex() if isinstance(x, DDComplex) else x.to_float(),
                          dtype=complex)
    return np.asarray(x, dtype=complex)


def to_complex(x):
    """Round a scalar or array of either precision to ``complex128``."""
    if isinstance(x, DDComplex):
        return x.to_complex()
    if isinstance(x, DDReal):
        return x.to_float().astype(complex)
    return np.asarray(x, dtype=complex)


def to_float(x):
    """Round a real scalar or array of either precision to ``float64``."""
    if isinstance(x, DDReal):
        return x.to_float()
    if isinstance(x, DDComplex):
        return x.re.to_float()
    return np.asarray(x).real.astype(float)


def vdot(a, b):
    """Euclidean inner product ``a^* b``."""
    if isinstance(a, (DDComplex, DDReal)) or isinstance(b, (DDComplex, DDReal)):
        return (DDComplex.coerce(a).conj() * b).sum()
    return np.vdot(a, b)


def norm(v):
    """Euclidean norm of a vector (a real scalar of the same precision)."""
    if isinstance(v, DDComplex):
        return v.abs2().sum().sqrt()
    if isinstance(v, DDReal):
        return (v * v).sum().sqrt()
    return float(np.linalg.norm(v))


def stack_columns(cols):
    """Stack 1-D vectors as the columns of a matrix."""
    if any(isinstance(c, (DDComplex, DDReal)) for c in cols):
        cols = [DDComplex.coerce(c) for c in cols]
        return DDComplex(
            DDReal(np.stack([c.re.hi for c in cols], axis=1),
                   np.stack([c.re.lo for c in cols], axis=1)),
            DDReal(np.stack([c.im.hi for c in cols], axis=1),
                   np.stack([c.im.lo for c in cols], axis=1)))
    return np.stack(cols, axis=1)


def _shape(x):
    return x.shape if hasattr(x, "shape") else np.shape(x)


def apply_antilinear(kappa, M, z):
    """Return ``kappa*z + M @ conj(z)``.

    ``M`` is a square matrix, or a 1-D array standing for the diagonal
    matrix ``diag(M)``.  The result is double-double if any operand is.
    """
    mshape, zshape = _shape(M), _shape(z)
    if len(zshape) != 1:
        raise ArgumentError("z must be a vector")
    n = zshape[0]
    if len(mshape) == 1:
        if mshape[0] != n:
            raise ArgumentError(f"diagonal of length {mshape[0]} does not match vector of length {n}")
    elif len(mshape) != 2 or mshape != (n, n):
        raise ArgumentError(f"matrix of shape {mshape} does not act on vectors of length {n}")

    if precision_of(M, z) == "dd":
        M, z = DDComplex.coerce(M), DDComplex.coerce(z)
    else:
        M, z = np.asarray(M), np.asarray(z)
    mz = M * z.conj() if len(mshape) == 1 else M @ z.conj()
    if _is_zero(kappa):
        return mz
    return mz + z * kappa


def _is_zero(kappa):
    if isinstance(kappa, (DDComplex, DDReal)):
        return not np.any(to_complex(kappa))
    return kappa == 0


def solve_real_ls(A, b):
    """Minimize ``||A x - b||_2`` for real ``A`` (m-by-n, m >= n) of full
    column rank, by Householder QR.

    Works on float64 arrays or :class:`DDReal` arrays; the result has the
    precision of the input.  Raises :class:`NumericalError` when the
    triangular factor has a diagonal entry below ``n*eps`` times the largest.
    """
    dd = isinstance(A, DDReal) or isinstance(b, DDReal)
    if dd:
        R, y = DDReal.coerce(A).copy(), DDReal.coerce(b).copy()
    else:
        R, y = np.array(A, dtype=float), np.array(b, dtype=float)
    if R.ndim != 2 or y.ndim != 1 or R.shape[0] != y.shape[0]:
        raise ArgumentError(f"incompatible shapes {R.shape} and {y.shape}")
    m, n = R.shape
    if m < n:
        raise ArgumentError(f"underdetermined system ({m} rows < {n} columns)")
    eps = DD_EPS if dd else np.finfo(float).eps

    diag = np.zeros(n)
    for k in range(n):
        x = R[k:, k]
        alpha = norm(x)
        if float(alpha) == 0.0:
            diag[k] = 0.0
            continue
        x0 = float(x[0]) if dd else x[0]
        sign = 1.0 if x0 >= 0 else -1.0
        v = x.copy()
        v[0] = x[0] + alpha * sign
        vv = (v * v).sum()
        block = R[k:, k:]
        w = (v.reshape(-1, 1) * block).sum(axis=0) * (2.0 / vv)
        R[k:, k:] = block - v.reshape(-1, 1) * w.reshape(1, -1)
        coef = (v * y[k:]).sum() * 2.0 / vv
        y[k:] = y[k:] - v * coef
        diag[k] = abs(float(R[k, k]))

    if n and (diag.max() == 0.0 or diag.min() < n * eps * diag.max()):
        raise NumericalError(
            f"least squares matrix is numerically rank deficient "
            f"(|r_kk| ranges over [{diag.min():.3e}, {diag.max():.3e}])")

    x = DDReal.zeros(n) if dd else np.zeros(n)
    for k in range(n - 1, -1, -1):
        s = y[k]
        if k + 1 < n:
            s = s - (R[k, k + 1:] * x[k + 1:]).sum()
        x[k] = s / R[k, k]
    return x


def hessenberg(A):
    """Unitary reduction of ``A`` to upper Hessenberg form (Householder)."""
    H = np.array(A, dtype=complex)
    n = H.shape[0]
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, :])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0.0
    return H


def _givens(x, y):
    # G = [[c, s], [-conj(s), c]] maps (x, y) to (r, 0)
    ax, ay = abs(x), abs(y)
    if ay == 0.0:
        return 1.0, 0.0
    if ax == 0.0:
        return 0.0, np.conj(y) / ay
    r = np.hypot(ax, ay)
    return ax / r, (x / ax) * np.conj(y) / r


def eig_dense(A, maxsweeps=None):
    """Eigenvalues of a dense complex matrix, with multiplicity.

    Householder reduction to Hessenberg form followed by the explicitly
    shifted complex QR iteration with Wilkinson shifts and deflation of
    negligible subdiagonal entries.  Raises :class:`ConvergenceError` after
    ``30 n`` sweeps (or ``maxsweeps``).
    """
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ArgumentError(f"eig_dense needs a nonempty square matrix, got shape {A.shape}")
    n = A.shape[0]
    H = hessenberg(A)
    eps = np.finfo(float).eps
    normH = np.linalg.norm(H)
    cap = 30 * n if maxsweeps is None else maxsweeps
    eigs = np.empty(n, dtype=complex)
    ihi = n - 1
    sweeps = 0
    its = 0
    while ihi >= 0:
        l = ihi
        while l > 0:
            tst = abs(H[l - 1, l - 1]) + abs(H[l, l])
            if tst == 0.0:
                tst = normH
            if abs(H[l, l - 1]) <= eps * tst:
                H[l, l - 1] = 0.0
                break
            l -= 1
        if l == ihi:
            eigs[ihi] = H[ihi, ihi]
            ihi -= 1
            its = 0
            continue
        if sweeps >= cap:
            raise ConvergenceError(
                f"QR iteration did not converge after {sweeps} sweeps; "
                f"unconverged block rows {l}..{ihi}")
        sweeps += 1
        its += 1

        a, b = H[ihi - 1, ihi - 1], H[ihi - 1, ihi]
        c, d = H[ihi, ihi - 1], H[ihi, ihi]
        if its % 10 == 0:
            mu = d + 0.75 * abs(c)
        else:
            half = 0.5 * (a - d)
            disc = np.sqrt(half * half + b * c)
            # eigenvalue of the trailing 2x2 closest to d
            mu1, mu2 = 0.5 * (a + d) + disc, 0.5 * (a + d) - disc
            mu = mu1 if abs(mu1 - d) <= abs(mu2 - d) else mu2

        W = H[l:ihi + 1, l:ihi + 1]
        m = W.shape[0]
        W[np.diag_indices(m)] -= mu
        rots = []
        for k in range(m - 1):
            cs, sn = _givens(W[k, k], W[k + 1, k])
            rk, rk1 = W[k, k:].copy(), W[k + 1, k:].copy()
            W[k, k:] = cs * rk + sn * rk1
            W[k + 1, k:] = -np.conj(sn) * rk + cs * rk1
            W[k + 1, k] = 0.0
            rots.append((cs, sn))
        for k, (cs, sn) in enumerate(rots):
            top = min(k + 2, m - 1) + 1
            ck, ck1 = W[:top, k].copy(), W[:top, k + 1].copy()
            W[:top, k] = cs * ck + np.conj(sn) * ck1
            W[:top, k + 1] = -sn * ck + cs * ck1
        W[np.diag_indices(m)] += mu
        H[l:ihi + 1, l:ihi + 1] = W
    return eigs


def inverse_iteration(A, lam, iters=3, rng=None, start=None):
    """Unit eigenvector of ``A`` for the (approximate) eigenvalue ``lam``,
    from ``start`` or a random vector."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    rng = np.random.default_rng(0) if rng is None else rng
    scale = max(np.linalg.norm(A), 1.0)
    shift = lam + 1e3 * np.finfo(float).eps * scale
    B = A - shift * np.eye(n)
    if start is None:
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    else:
        x = np.asarray(start, dtype=complex)
    x /= np.linalg.norm(x)
    for _ in range(iters):
        try:
            x = np.linalg.solve(B, x)
        except np.linalg.LinAlgError:
            B = B - 1e-8 * scale * np.eye(n)
            x = np.linalg.solve(B, x)
        x /= np.linalg.norm(x)
    return x


def singular_values(X):
    """Singular values of ``X`` (descending), from the eigenvalues of ``X^* X``."""
    X = np.asarray(X, dtype=complex)
    ev = eig_dense(X.conj().T @ X).real
    return np.sqrt(np.clip(np.sort(ev)[::-1], 0.0, None))


def cond2(X):
    """Spectral condition number ``||X|| ||X^-1||``."""
    s = singular_values(X)
    if s[-1] == 0.0:
        return np.inf
    return float(s[0] / s[-1])
