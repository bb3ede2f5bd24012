"""Vectorized double-double arithmetic.

A double-double value is the unevaluated sum ``hi + lo`` of two float64
numbers with ``|lo| <= ulp(hi)/2``, giving roughly 31-32 significant
decimal digits.  :class:`DDReal` holds arrays of such values (``hi`` and
``lo`` are float64 arrays of equal shape) and :class:`DDComplex` pairs two
of them.  All operations broadcast like numpy.

The error-free transforms follow Dekker and Knuth; products use Dekker
splitting since numpy exposes no fused multiply-add.
"""

import numpy as np

__all__ = ["DDReal", "DDComplex", "two_sum", "two_prod", "dd_sum",
           "from_mpmath", "EPS"]

#: unit roundoff of the double-double format
EPS = 2.0 ** -104

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    """Return ``(s, e)`` with ``s = fl(a + b)`` and ``s + e == a + b`` exactly."""
    s = a + b
    bb = s - a
    e = (a - (s - bb)) + (b - bb)
    return s, e


def _quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    e = b - (s - a)
    return s, e


def _split(a):
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def two_prod(a, b):
    """Return ``(p, e)`` with ``p = fl(a * b)`` and ``p + e == a * b`` exactly."""
    p = a * b
    ahi, alo = _split(a)
    bhi, blo = _split(b)
    e = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo
    return p, e


def _add(ahi, alo, bhi, blo):
    s, e = two_sum(ahi, bhi)
    t, f = two_sum(alo, blo)
    e = e + t
    s, e = _quick_two_sum(s, e)
    e = e + f
    return _quick_two_sum(s, e)


def _mul(ahi, alo, bhi, blo):
    p, e = two_prod(ahi, bhi)
    e = e + (ahi * blo + alo * bhi)
    return _quick_two_sum(p, e)


def _div(ahi, alo, bhi, blo):
    # double seed, then one correction step against the exact residual
    with np.errstate(divide="ignore", invalid="ignore"):
        q1 = ahi / bhi
        phi, plo = _mul(q1, 0.0, bhi, blo)
        rhi, rlo = _add(ahi, alo, -phi, -plo)
        q2 = rhi / bhi
        phi, plo = _mul(q2, 0.0, bhi, blo)
        rhi, rlo = _add(rhi, rlo, -phi, -plo)
        q3 = rhi / bhi
    q1, q2 = _quick_two_sum(q1, q2)
    return _add(q1, q2, q3, 0.0)


def _sqrt(ahi, alo):
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.sqrt(ahi)
        phi, plo = two_prod(x, x)
        rhi, _ = _add(ahi, alo, -phi, -plo)
        corr = np.where(x > 0, rhi / (2.0 * x), 0.0)
    return _quick_two_sum(x, corr)


def dd_sum(hi, lo, axis=None):
    """Pairwise double-double sum of ``hi + lo`` along ``axis``."""
    hi = np.asarray(hi, dtype=float)
    lo = np.asarray(lo, dtype=float)
    if axis is None:
        hi, lo = hi.ravel(), lo.ravel()
        axis = 0
    hi = np.moveaxis(hi, axis, 0)
    lo = np.moveaxis(lo, axis, 0)
    if hi.shape[0] == 0:
        z = np.zeros(hi.shape[1:])
        return z, z.copy()
    while hi.shape[0] > 1:
        if hi.shape[0] % 2:
            pad = np.zeros((1,) + hi.shape[1:])
            hi = np.concatenate([hi, pad])
            lo = np.concatenate([lo, pad])
        h = hi.shape[0] // 2
        hi, lo = _add(hi[:h], lo[:h], hi[h:], lo[h:])
    return hi[0], lo[0]


def _is_complex(x):
    # checked by type first: np.iscomplexobj would iterate a DD array elementwise
    if isinstance(x, DDReal):
        return False
    if isinstance(x, DDComplex):
        return True
    return np.iscomplexobj(x)


class DDReal:
    """Array of real double-double numbers."""

    __slots__ = ("hi", "lo")
    __array_ufunc__ = None

    def __init__(self, hi, lo=None):
        self.hi = np.asarray(hi, dtype=float)
        if lo is None:
            self.lo = np.zeros_like(self.hi)
        else:
            self.lo = np.broadcast_to(np.asarray(lo, dtype=float), self.hi.shape).copy()

    @classmethod
    def coerce(cls, x):
        if isinstance(x, DDReal):
            return x
        if isinstance(x, DDComplex):
            raise TypeError("cannot coerce a complex double-double to real")
        x = np.asarray(x)
        if np.iscomplexobj(x):
            raise TypeError("cannot coerce complex input to DDReal")
        return cls(x.astype(float))

    @classmethod
    def zeros(cls, shape):
        return cls(np.zeros(shape))

    # -- array protocol ----------------------------------------------------
    @property
    def shape(self):
        return self.hi.shape

    @property
    def ndim(self):
        return self.hi.ndim

    def __len__(self):
        return len(self.hi)

    def __getitem__(self, idx):
        return DDReal(self.hi[idx], self.lo[idx])

    def __setitem__(self, idx, value):
        value = DDReal.coerce(value)
        self.hi[idx] = value.hi
        self.lo[idx] = value.lo

    def copy(self):
        return DDReal(self.hi.copy(), self.lo.copy())

    @property
    def T(self):
        return DDReal(self.hi.T, self.lo.T)

    def reshape(self, *shape):
        return DDReal(self.hi.reshape(*shape), self.lo.reshape(*shape))

    def to_float(self):
        return self.hi + self.lo

    def __float__(self):
        return float(self.hi + self.lo)

    def __repr__(self):
        return f"DDReal(hi={self.hi!r}, lo={self.lo!r})"

    # -- arithmetic --------------------------------------------------------
    def __neg__(self):
        return DDReal(-self.hi, -self.lo)

    def __add__(self, other):
        if _is_complex(other):
            return DDComplex.coerce(self) + other
        o = DDReal.coerce(other)
        return DDReal(*_add(self.hi, self.lo, o.hi, o.lo))

    __radd__ = __add__

    def __sub__(self, other):
        if _is_complex(other):
            return DDComplex.coerce(self) - other
        o = DDReal.coerce(other)
        return DDReal(*_add(self.hi, self.lo, -o.hi, -o.lo))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_complex(other):
            return DDComplex.coerce(self) * other
        o = DDReal.coerce(other)
        return DDReal(*_mul(self.hi, self.lo, o.hi, o.lo))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_complex(other):
            return DDComplex.coerce(self) / other
        o = DDReal.coerce(other)
        return DDReal(*_div(self.hi, self.lo, o.hi, o.lo))

    def __rtruediv__(self, other):
        if _is_complex(other):
            return DDComplex.coerce(other) / self
        return DDReal.coerce(other) / self

    def __matmul__(self, other):
        return DDComplex.coerce(self) @ other

    def sqrt(self):
        return DDReal(*_sqrt(self.hi, self.lo))

    def __abs__(self):
        s = np.where(self.hi < 0, -1.0, 1.0)
        return DDReal(self.hi * s, self.lo * s)

    def sum(self, axis=None):
        return DDReal(*dd_sum(self.hi, self.lo, axis))

    def conj(self):
        return self

    @property
    def real(self):
        return self

    @property
    def imag(self):
        return DDReal.zeros(self.shape)


class DDComplex:
    """Array of complex double-double numbers stored as real and imaginary parts."""

    __slots__ = ("re", "im")
    __array_ufunc__ = None

    def __init__(self, re, im=None):
        self.re = DDReal.coerce(re)
        if im is None:
            self.im = DDReal.zeros(self.re.shape)
        else:
            self.im = DDReal.coerce(im)
            if self.im.shape != self.re.shape:
                shape = np.broadcast_shapes(self.re.shape, self.im.shape)
                self.re = DDReal(np.broadcast_to(self.re.hi, shape), np.broadcast_to(self.re.lo, shape))
                self.im = DDReal(np.broadcast_to(self.im.hi, shape), np.broadcast_to(self.im.lo, shape))

    @classmethod
    def coerce(cls, x):
        if isinstance(x, DDComplex):
            return x
        if isinstance(x, DDReal):
            return cls(x)
        x = np.asarray(x)
        return cls(DDReal(x.real.astype(float)), DDReal(np.asarray(x.imag, dtype=float)))

    @classmethod
    def zeros(cls, shape):
        return cls(DDReal.zeros(shape), DDReal.zeros(shape))

    @property
    def shape(self):
        return self.re.shape

    @property
    def ndim(self):
        return self.re.ndim

    def __len__(self):
        return len(self.re)

    def __getitem__(self, idx):
        return DDComplex(self.re[idx], self.im[idx])

    def __setitem__(self, idx, value):
        value = DDComplex.coerce(value)
        self.re[idx] = value.re
        self.im[idx] = value.im

    def copy(self):
        return DDComplex(self.re.copy(), self.im.copy())

    @property
    def T(self):
        return DDComplex(self.re.T, self.im.T)

    def reshape(self, *shape):
        return DDComplex(self.re.reshape(*shape), self.im.reshape(*shape))

    @property
    def real(self):
        return self.re

    @property
    def imag(self):
        return self.im

    def to_complex(self):
        return self.re.to_float() + 1j * self.im.to_float()

    def __complex__(self):
        return complex(self.to_complex())

    def __repr__(self):
        return f"DDComplex({self.to_complex()!r})"

    def __neg__(self):
        return DDComplex(-self.re, -self.im)

    def conj(self):
        return DDComplex(self.re, -self.im)

    def __add__(self, other):
        o = DDComplex.coerce(other)
        return DDComplex(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = DDComplex.coerce(other)
        return DDComplex(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DDReal) or (not isinstance(other, DDComplex)
                                         and not np.iscomplexobj(other)):
            o = DDReal.coerce(other)
            return DDComplex(self.re * o, self.im * o)
        o = DDComplex.coerce(other)
        return DDComplex(self.re * o.re - self.im * o.im,
                         self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        return self.abs2().sqrt()

    def __truediv__(self, other):
        if isinstance(other, DDReal) or (not isinstance(other, DDComplex)
                                         and not np.iscomplexobj(other)):
            o = DDReal.coerce(other)
            return DDComplex(self.re / o, self.im / o)
        o = DDComplex.coerce(other)
        return (self * o.conj()) / o.abs2()

    def __rtruediv__(self, other):
        return DDComplex.coerce(other) / self

    def sum(self, axis=None):
        return DDComplex(self.re.sum(axis), self.im.sum(axis))

    def __matmul__(self, other):
        o = DDComplex.coerce(other)
        if self.ndim != 2:
            raise ValueError("left operand of @ must be 2-D")
        if o.ndim == 1:
            return (self * o.reshape(1, -1)).sum(axis=1)
        a = self.reshape(self.shape[0], self.shape[1], 1)
        b = o.reshape(1, o.shape[0], o.shape[1])
        return (a * b).sum(axis=1)

    def __rmatmul__(self, other):
        return DDComplex.coerce(other) @ self


def from_mpmath(values):
    """Convert a sequence of mpmath numbers (mpf or mpc) to :class:`DDComplex`."""
    import mpmath

    vals = [mpmath.mpc(v) for v in values]
    re_hi = np.array([float(v.real) for v in vals])
    re_lo = np.array([float(v.real - mpmath.mpf(h)) for v, h in zip(vals, re_hi)])
    im_hi = np.array([float(v.imag) for v in vals])
    im_lo = np.array([float(v.imag - mpmath.mpf(h)) for v, h in zip(vals, im_hi)])
    return DDComplex(DDReal(re_hi, re_lo), DDReal(im_hi, im_lo))
