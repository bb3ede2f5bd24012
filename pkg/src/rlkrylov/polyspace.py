"""Polynomials in ``lambda`` and ``|lambda|^2``: the class ``P_j(r2)``.

An element of ``P_j(r2)`` is

    p(lambda) = sum_k (a_{2k} + a_{2k+1} lambda) |lambda|^{2k},

i.e. a combination of the monomials ``1, l, |l|^2, l|l|^2, |l|^4, ...`` up to
index ``j`` (``m_k(l) = l^{k mod 2} |l|^{2 floor(k/2)}``).  The space has
complex dimension ``j + 1`` and its elements can interpolate at most two
points on any origin-centred circle.  These are the polynomials behind the
CSYM / R-linear GMRES residuals: applying the antilinear operator
``l -> l conj(.)`` to ``p`` maps ``P_j`` into ``P_{j+1}``.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from . import numeric as nm
from .ddarith import DDComplex, DDReal
from .errors import ArgumentError, NumericalError
from .krylov import JacobiMatrix, cs_lanczos

__all__ = ["R2Polynomial", "NodeSystem", "CurveSpec", "ZeroModulus",
           "eval_r2", "monomials", "discrete_inner_product", "orthopoly_eval",
           "regenerate_jacobi", "interpolate_r2", "zero_moduli", "exp_r2",
           "approx_on_curve", "approx_from_samples", "DIV_TOL", "COLLAR"]

DIV_TOL = 1e-10   # relative to r2
COLLAR = 0.02     # fraction of [r1, r2] mollified next to a branch-merge point


@dataclass(frozen=True)
class R2Polynomial:
    """``sum_k coeffs[k] * m_k(lambda)``, an element of ``P_j(r2)`` with
    ``j = len(coeffs) - 1``."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or len(c) == 0:
            raise ArgumentError("coefficients must be a nonempty vector")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree_index(self):
        return len(self.coeffs) - 1

    @property
    def u(self):
        """Coefficients (ascending, in ``x = |l|^2``) of the part without ``l``."""
        return self.coeffs[0::2]

    @property
    def v(self):
        """Coefficients of the part multiplying ``l``."""
        return self.coeffs[1::2]

    def __call__(self, lam):
        return eval_r2(self, lam)

    def padded(self, j):
        """The same polynomial viewed in ``P_j(r2)``, ``j >= degree_index``."""
        if j < self.degree_index:
            raise ArgumentError("cannot pad to a smaller index")
        c = np.zeros(j + 1, dtype=complex)
        c[:len(self.coeffs)] = self.coeffs
        return R2Polynomial(c)

    def __add__(self, other):
        j = max(self.degree_index, other.degree_index)
        return R2Polynomial(self.padded(j).coeffs + other.padded(j).coeffs)

    def __sub__(self, other):
        j = max(self.degree_index, other.degree_index)
        return R2Polynomial(self.padded(j).coeffs - other.padded(j).coeffs)

    def scale(self, c):
        return R2Polynomial(c * self.coeffs)

    def lam_conj(self):
        """``l -> l * conj(p(l))``, an element of ``P_{j+1}(r2)``.

        ``l conj(m_k) = m_{k+1}`` for every ``k``, so the coefficients are
        conjugated and shifted up by one.
        """
        c = np.zeros(len(self.coeffs) + 1, dtype=complex)
        c[1:] = self.coeffs.conj()
        return R2Polynomial(c)

    def times_radial(self, m):
        """``p(l) * (|l|^2 - m^2)``, which adds the circle ``|l| = m`` to the zeros."""
        c = np.zeros(len(self.coeffs) + 2, dtype=complex)
        c[2:] += self.coeffs
        c[:-2] -= m * m * self.coeffs
        return R2Polynomial(c)


def monomials(lam, j):
    """Matrix of ``m_k(lam_i)`` for ``k = 0..j`` (generalized Vandermonde)."""
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    x = np.abs(lam) ** 2
    V = np.empty((len(lam), j + 1), dtype=complex)
    for k in range(j + 1):
        V[:, k] = (lam if k % 2 else 1.0) * x ** (k // 2)
    return V


def eval_r2(p, lam):
    """Evaluate ``p`` at ``lam`` (scalar or array), Horner in ``x = |lam|^2``."""
    lam_arr = np.asarray(lam, dtype=complex)
    x = np.abs(lam_arr) ** 2
    out = npoly.polyval(x, p.u)
    if len(p.v):
        out = out + lam_arr * npoly.polyval(x, p.v)
    return out if np.ndim(lam) else complex(out)


@dataclass(frozen=True)
class NodeSystem:
    """Distinct nodes with positive weights, at most two nodes per modulus."""

    nodes: np.ndarray
    weights: Optional[np.ndarray] = None

    def __post_init__(self):
        z = np.atleast_1d(np.asarray(self.nodes, dtype=complex))
        w = (np.full(len(z), 1.0 / len(z)) if self.weights is None
             else np.atleast_1d(np.asarray(self.weights, dtype=float)))
        if len(w) != len(z):
            raise ArgumentError("nodes and weights differ in length")
        if np.any(w <= 0):
            raise ArgumentError("weights must be strictly positive")
        scale = max(np.max(np.abs(z)), 1.0) if len(z) else 1.0
        for i in range(len(z)):
            if np.any(np.abs(z[i + 1:] - z[i]) <= 1e-14 * scale):
                raise ArgumentError(f"duplicate node {z[i]}")
        mod = np.sort(np.abs(z))
        for i in range(len(mod) - 2):
            if mod[i + 2] - mod[i] <= 1e-12 * scale:
                raise ArgumentError(
                    f"three nodes share the modulus {mod[i]:.6g}; P(r2) interpolates "
                    "at most two points per circle")
        object.__setattr__(self, "nodes", z)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return len(self.nodes)


def discrete_inner_product(p, q, nodes):
    """``sum_k p(l_k) conj(q(l_k)) w_k``; ``p`` and ``q`` may be polynomials or
    arrays of node values."""
    pv = p(nodes.nodes) if isinstance(p, R2Polynomial) else np.asarray(p)
    qv = q(nodes.nodes) if isinstance(q, R2Polynomial) else np.asarray(q)
    return complex(np.sum(pv * np.conj(qv) * nodes.weights))


def orthopoly_eval(J, lam, k):
    """Values and coefficients of ``p_0, ..., p_k`` from the recurrence

        p_0 = 1,  beta_j p_j = l conj(p_{j-1}) - alpha_j p_{j-1} - beta_{j-1} p_{j-2}.

    ``lam`` may be a scalar or an array.  Returns ``(values, polys)`` where
    ``values[j]`` holds ``p_j(lam)`` and ``polys[j]`` is ``p_j`` as an element
    of ``P_j(r2)``.  ``p_m`` (``m = J.size``) needs the trailing coefficient
    ``J.tail``, so ``k <= m`` only when it is nonzero.

    Node values of high-index ``p_j`` can be very sensitive to the
    recurrence coefficients.  For a double-double ``J`` the values are
    computed in double-double and rounded at the end; coefficients are
    always propagated in double.
    """
    m = J.size
    alphas = nm.to_complex(J.alphas)
    betas = list(nm.to_float(J.betas)) + [float(nm.to_float(J.tail))]
    kmax = m if betas[m - 1] > 0 else m - 1
    if k < 0 or k > kmax:
        raise ArgumentError(f"k must satisfy 0 <= k <= {kmax} for a Jacobi matrix of size {m}")
    polys = [R2Polynomial([1.0])]
    for j in range(1, k + 1):
        a, b = alphas[j - 1], betas[j - 1]
        poly = polys[-1].lam_conj() - polys[-1].scale(a)
        if j >= 2:
            poly = poly - polys[-2].scale(betas[j - 2])
        polys.append(poly.scale(1.0 / b))
    lam = np.asarray(lam, dtype=complex)
    if nm.precision_of(J.alphas, J.betas) == "dd":
        return _orthopoly_values_dd(J, lam, k), polys
    vals = [np.ones_like(lam)]
    for j in range(1, k + 1):
        val = lam * np.conj(vals[-1]) - alphas[j - 1] * vals[-1]
        if j >= 2:
            val = val - betas[j - 2] * vals[-2]
        vals.append(val / betas[j - 1])
    return np.array(vals), polys


def _orthopoly_values_dd(J, lam, k):
    shape = lam.shape
    z = DDComplex.coerce(lam.reshape(-1))
    A = DDComplex.coerce(J.alphas)
    B = DDReal.coerce(J.betas) if J.size > 1 else None
    tail = DDReal.coerce(J.tail)
    beta = lambda i: B[i] if i < J.size - 1 else tail
    vals = [DDComplex.coerce(np.ones(z.shape, dtype=complex))]
    for j in range(1, k + 1):
        val = z * vals[-1].conj() - vals[-1] * A[j - 1]
        if j >= 2:
            val = val - vals[-2] * beta(j - 2)
        vals.append(val / beta(j - 1))
    return np.array([v.to_complex().reshape(shape) for v in vals])


def regenerate_jacobi(J, nodes):
    """Recompute the recurrence coefficients from the polynomials of ``J``
    with the discrete inner product (Stieltjes procedure).

    ``alpha_j = <l conj(p_{j-1}), p_{j-1}>`` and ``beta_j`` is the norm of
    the remainder.  Agreement with ``J`` certifies that the ``p_j`` are
    orthonormal for ``nodes``.
    """
    m = J.size
    vals, _ = orthopoly_eval(J, nodes.nodes, m - 1)
    lam = nodes.nodes
    alphas, betas = [], []
    for j in range(1, m + 1):
        w = lam * np.conj(vals[j - 1])
        a = discrete_inner_product(w, vals[j - 1], nodes)
        alphas.append(a)
        if j < m:
            rem = w - a * vals[j - 1]
            if j >= 2:
                rem = rem - betas[-1] * vals[j - 2]
            betas.append(np.sqrt(discrete_inner_product(rem, rem, nodes).real))
    return JacobiMatrix(np.array(alphas), np.array(betas))


def interpolate_r2(nodes, values):
    """The element of ``P_{N-1}(r2)`` taking ``values`` at the ``N`` nodes.

    Runs complex symmetric Lanczos on ``diag(nodes)`` with starting vector
    ``sqrt(weights)`` (normalized); the Lanczos vectors are the orthonormal
    polynomials at the nodes, scaled by the starting vector, and the
    interpolant is expanded in them with the discrete inner product.  A
    Vandermonde solve in the monomials is never formed.
    """
    if not isinstance(nodes, NodeSystem):
        nodes = NodeSystem(nodes)
    values = np.asarray(values, dtype=complex)
    N = len(nodes)
    if len(values) != N:
        raise ArgumentError("need one value per node")
    w = nodes.weights / np.sum(nodes.weights)
    ns = NodeSystem(nodes.nodes, w)
    J, Q = cs_lanczos(nodes.nodes, np.sqrt(w).astype(complex), N)
    if J.size < N:
        raise NumericalError(
            f"Lanczos broke down at step {J.size} of {N}: the monomials are "
            "numerically dependent on these nodes")
    _, polys = orthopoly_eval(J, nodes.nodes, N - 1)
    # node values from the Lanczos vectors: q_j = diag(p_j(l)) sqrt(w)
    P = Q[:, :N] / np.sqrt(w)[:, None]
    p = R2Polynomial(np.zeros(N, dtype=complex))
    for j in range(N):
        c = discrete_inner_product(values, P[:, j], ns)
        p = p + polys[j].scale(c)
    return p.padded(N - 1)


@dataclass(frozen=True)
class ZeroModulus:
    """A modulus carrying zeros of ``p``: a whole circle, or a single point."""

    modulus: float
    kind: str            # "circle" or "point"
    point: Optional[complex] = None


def _roots(c):
    """Roots of the polynomial with ascending coefficients ``c`` (trailing
    zeros trimmed), from the companion matrix."""
    c = np.trim_zeros(np.asarray(c, dtype=complex), "b")
    d = len(c) - 1
    if d < 1:
        return np.zeros(0, dtype=complex)
    C = np.zeros((d, d), dtype=complex)
    C[1:, :-1] = np.eye(d - 1)
    C[:, -1] = -c[:-1] / c[-1]
    return nm.eig_dense(C)


def _real_nonneg(roots, scale_imag=1e-8, scale_neg=1e-10):
    out = []
    for x in roots:
        s = max(1.0, abs(x))
        if abs(x.imag) <= scale_imag * s and x.real >= -scale_neg * s:
            out.append(max(x.real, 0.0))
    return sorted(out)


def _small_at(c, x, tol):
    c = np.asarray(c, dtype=complex)
    if not len(c) or not np.any(c):
        return True
    mag = npoly.polyval(abs(x), np.abs(c))
    return abs(npoly.polyval(x, c)) <= tol * mag


def _deflate(c, x0):
    q, _ = npoly.polydiv(np.asarray(c, dtype=complex), np.array([-x0, 1.0], dtype=complex))
    return np.atleast_1d(q)


def zero_moduli(p, tol=1e-8):
    """Moduli carrying zeros of ``p``, ascending.

    Write ``p(l) = u(|l|^2) + l v(|l|^2)``.  A whole circle ``|l| = m`` is
    made of zeros exactly when ``u(m^2) = v(m^2) = 0``; those common roots
    are found first and divided out.  The remaining zeros lie on moduli
    with ``|u(x)|^2 - x |v(x)|^2 = 0``, ``x = m^2``, each carrying the single
    zero ``l = -u(x)/v(x)``.  The zero at the origin counts as a point.
    """
    u = np.trim_zeros(p.u.astype(complex), "b")
    v = np.trim_zeros(p.v.astype(complex), "b")
    if not len(u) and not len(v):
        raise ArgumentError("p is the zero polynomial")
    found = []
    # common roots: circles of zeros
    while len(u) > 1 or len(v) > 1:
        base = u if len(u) > 1 else v
        other = v if base is u else u
        common = [x for x in _real_nonneg(_roots(base))
                  if _small_at(base, x, tol) and _small_at(other, x, tol)]
        if not common:
            break
        x0 = common[0]
        u = np.trim_zeros(_deflate(u, x0), "b") if len(u) else u
        v = np.trim_zeros(_deflate(v, x0), "b") if len(v) else v
        m = float(np.sqrt(x0))
        found.append(ZeroModulus(m, "circle") if m > 0 else ZeroModulus(0.0, "point", 0j))
    # single zeros: roots of |u|^2 - x |v|^2 (real coefficients)
    uu = npoly.polymul(u, u.conj()) if len(u) else np.zeros(1)
    vv = npoly.polymul(np.array([0.0, 1.0]), npoly.polymul(v, v.conj())) if len(v) else np.zeros(1)
    q = npoly.polysub(uu, vv).real
    seen = []
    for x in _real_nonneg(_roots(q)):
        if any(abs(x - y) <= 1e-6 * max(1.0, x) for y in seen):
            continue
        seen.append(x)
        m = float(np.sqrt(x))
        vx = npoly.polyval(x, v) if len(v) else 0.0
        ux = npoly.polyval(x, u) if len(u) else 0.0
        if abs(vx) == 0.0:
            if abs(ux) <= tol and m == 0.0:
                found.append(ZeroModulus(0.0, "point", 0j))
            continue
        lam = -ux / vx
        if abs(abs(lam) - m) <= 1e-6 * max(1.0, m):
            lam = lam if m > 0 else 0j
            if abs(u_v_eval(u, v, lam)) <= 1e-6 * max(1.0, _mag(u, v, lam)):
                if m == 0.0 and any(z.modulus == 0.0 for z in found):
                    continue
                found.append(ZeroModulus(m, "point", complex(lam)))
    return sorted(found, key=lambda z: z.modulus)


def u_v_eval(u, v, lam):
    x = abs(lam) ** 2
    out = npoly.polyval(x, u) if len(u) else 0.0
    if len(v):
        out = out + lam * npoly.polyval(x, v)
    return out


def _mag(u, v, lam):
    x = abs(lam) ** 2
    out = npoly.polyval(x, np.abs(u)) if len(u) else 0.0
    if len(v):
        out = out + abs(lam) * npoly.polyval(x, np.abs(v))
    return out


def exp_r2(lam, terms=25):
    """``sum_{j < terms} (1/(2j)! + lam/(2j+1)!) |lam|^{2j}``.

    For real ``lam`` this is the exponential; on ``|lam| = 1`` it is
    ``cosh(1) + lam sinh(1)``.
    """
    if terms < 1:
        raise ArgumentError("terms must be at least 1")
    lam_arr = np.asarray(lam, dtype=complex)
    x = np.abs(lam_arr) ** 2
    even = np.ones_like(x)          # x^j / (2j)!
    odd = np.ones_like(x)           # x^j / (2j+1)!
    se, so = even.copy(), odd.copy()
    for j in range(1, terms):
        even = even * x / ((2 * j - 1) * (2 * j))
        odd = odd * x / ((2 * j) * (2 * j + 1))
        se = se + even
        so = so + odd
    out = se + lam_arr * so
    return out if np.ndim(lam) else complex(out)


def exp_r2_polynomial(terms=25):
    """The truncated series of :func:`exp_r2` as an element of ``P(r2)``."""
    c = np.zeros(2 * terms, dtype=complex)
    f = 1.0
    for k in range(2 * terms):
        if k:
            f *= k
        c[k] = 1.0 / f
    return R2Polynomial(c)


@dataclass(frozen=True)
class CurveSpec:
    """A curve meeting each circle ``|z| = r``, ``r1 <= r <= r2``, in the
    points ``z1(r)`` and ``z2(r)`` (``|z_i(r)| = r``).

    Leave ``z2`` unset for a curve meeting each circle once (one-branch
    mode, e.g. a real segment).
    """

    r1: float
    r2: float
    z1: Callable
    z2: Optional[Callable] = None

    def __post_init__(self):
        if not (0.0 <= self.r1 < self.r2):
            raise ArgumentError(
                "need 0 <= r1 < r2: a curve on a single circle meets it in more "
                "than two points and is not admissible")


def _cheb_grid(r1, r2, count):
    t = np.cos((2 * np.arange(count) + 1) * np.pi / (2 * count))[::-1]
    return 0.5 * (r1 + r2) + 0.5 * (r2 - r1) * t


def _fit_x(x, y, degree):
    """Least squares fit of ``y`` by a polynomial of ``degree`` in ``x``;
    ascending power-basis coefficients (Chebyshev basis for the solve)."""
    ch = np.polynomial.Chebyshev.fit(x, y.real, degree)
    ci = np.polynomial.Chebyshev.fit(x, y.imag, degree)
    pr = ch.convert(kind=np.polynomial.Polynomial).coef
    pi = ci.convert(kind=np.polynomial.Polynomial).coef
    out = np.zeros(degree + 1, dtype=complex)
    out[:len(pr)] += pr
    out[:len(pi)] += 1j * pi
    return out


def _assemble(p1, p2):
    j = 2 * max(len(p1), len(p2)) - 1
    c = np.zeros(j + 1, dtype=complex)
    c[0:2 * len(p1):2] = p1
    c[1:2 * len(p2):2] = p2
    return R2Polynomial(c)


def approx_from_samples(r, z1, z2, g1, g2, degree, div_tol=DIV_TOL, mollify=True):
    """Fit ``p(z) = p1(|z|^2) + p2(|z|^2) z`` to values ``g_i`` at ``z_i(r)``.

    ``a2 = (g2 - g1)/(z2 - z1)`` and ``a1 = g1 - z1 a2`` are the unique
    coefficients reproducing both values on each circle; each is fitted by
    a polynomial of ``degree`` in ``x = r^2``.  Where the branches are closer
    than ``div_tol * max(r)`` the quotient is meaningless: with ``mollify``
    the samples within the 2% radial collar of each end where this happens
    are replaced by the value at the end sample (``a2 = 0`` there),
    otherwise an error is raised.  If ``z2`` is None (or the branches
    coincide everywhere) only ``a1`` is fitted.
    Returns ``(p, sup_error)`` with the error taken over the samples.
    """
    r = np.asarray(r, dtype=float)
    z1 = np.asarray(z1, dtype=complex)
    g1 = np.asarray(g1, dtype=complex)
    if np.max(np.abs(np.abs(z1) - r)) > 1e-12 * max(1.0, np.max(r)):
        raise ArgumentError("curve points must satisfy |z1(r)| = r")
    x = r ** 2
    tol = div_tol * np.max(r)
    one_branch = z2 is None
    if not one_branch:
        z2 = np.asarray(z2, dtype=complex)
        g2 = np.asarray(g2, dtype=complex)
        if np.max(np.abs(np.abs(z2) - r)) > 1e-12 * max(1.0, np.max(r)):
            raise ArgumentError("curve points must satisfy |z2(r)| = r")
        sep = np.abs(z2 - z1)
        one_branch = bool(np.all(sep <= tol))
    if one_branch:
        p1 = _fit_x(x, g1, degree)
        p = _assemble(p1, np.zeros(0))
        err = np.max(np.abs(p(z1) - g1))
        if z2 is not None:
            err = max(err, np.max(np.abs(p(z2) - g2)))
        return p, float(err)

    a_g1, a_g2 = g1.copy(), g2.copy()
    close = sep <= tol
    if np.any(close):
        lo, hi = np.min(r), np.max(r)
        collar = COLLAR * (hi - lo)
        near_lo, near_hi = r <= lo + collar, r >= hi - collar
        bad = close & ~(near_lo | near_hi)
        if not mollify or np.any(bad):
            raise NumericalError(
                "branches z1(r), z2(r) are closer than div_tol away from the curve "
                "ends; the divided difference is unstable")
        for side in (near_lo, near_hi):
            if np.any(close & side):
                end = np.argmin(r) if side is near_lo else np.argmax(r)
                a_g1[side] = g1[end]
                a_g2[side] = g1[end]
    a2 = np.zeros_like(a_g1)
    ok = sep > tol
    a2[ok] = (a_g2[ok] - a_g1[ok]) / (z2[ok] - z1[ok])
    a1 = a_g1 - z1 * a2
    p = _assemble(_fit_x(x, a1, degree), _fit_x(x, a2, degree))
    err = max(np.max(np.abs(p(z1) - g1)), np.max(np.abs(p(z2) - g2)))
    return p, float(err)


def approx_on_curve(curve, f, degree, div_tol=DIV_TOL, mollify=True, samples=None):
    """Approximate ``f`` on ``curve`` by an element of ``P(r2)``.

    Samples ``4 (degree + 1)`` Chebyshev radii in ``[r1, r2]`` (or
    ``samples``) and calls :func:`approx_from_samples`.  The returned error
    is the largest deviation on a grid four times finer, on both branches.
    """
    count = samples or 4 * (degree + 1)
    r = _cheb_grid(curve.r1, curve.r2, count)
    z1 = curve.z1(r)
    z2 = curve.z2(r) if curve.z2 is not None else None
    p, _ = approx_from_samples(r, z1, z2, f(z1), f(z2) if z2 is not None else None,
                               degree, div_tol=div_tol, mollify=mollify)
    rf = np.linspace(curve.r1, curve.r2, 4 * count)
    pts = [curve.z1(rf)] + ([curve.z2(rf)] if curve.z2 is not None else [])
    err = max(float(np.max(np.abs(p(z) - f(z)))) for z in pts)
    return p, err
