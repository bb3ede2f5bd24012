"""CSYM on diagonal test problems ``D conj(x) = r`` with ``r = (1, ..., 1)``.

The diagonal is ``d_j = R_j exp(2 pi i phi_j)`` with ``R_1 = 1``, ``R_n = 10``
and ``R_j`` linear in between; the angle rule distinguishes the examples:

1. constant ``phi_j = 1/10`` (a line through the origin).  Also run after a
   round trip of the diagonal through double precision.
2. spirals: ``phi`` linear from 0 to ``N``, ``N = 1..5``.
3. the ``N = 1`` spiral with angles ``j <= k`` perturbed by up to ``1e-10``.
4. the same with the last ``K`` angles perturbed.
5. uniformly random angles, and two interleaved spirals (odd ``j`` from 0
   to 1, even ``j`` from 0 to 2).

With ``precision="dd"`` the diagonal is generated with mpmath and rounded to
double-double, and the solve runs in double-double arithmetic.
"""

from dataclasses import dataclass, field

import mpmath
import numpy as np

from .ddarith import DDComplex, from_mpmath
from .errors import ArgumentError
from .solver import ResidualTrace, csym

__all__ = ["ExperimentSpec", "ExampleRun", "example_specs", "example_angles",
           "example_diagonal", "run_example", "PERTURB_FRACTIONS"]

RULES = ("constant", "spiral", "perturbed-prefix", "perturbed-suffix", "random", "two-spiral")
PERTURB_FRACTIONS = (0.1, 0.25, 0.5, 1.0)
PERTURB_AMPLITUDE = 1e-10


@dataclass(frozen=True)
class ExperimentSpec:
    n: int
    rule: str
    param: float = 0.0        # phi for "constant", N for "spiral", k or K for perturbed
    amplitude: float = 0.0
    seed: int = 1
    precision: str = "double"
    label: str = ""


@dataclass
class ExampleRun:
    k: int
    specs: list
    traces: dict
    diagonals: dict = field(default_factory=dict)

    def relative(self, label):
        return self.traces[label].relative


def _lin(a, b, n):
    """``a + (b - a)(j-1)/(n-1)``, ``j = 1..n``, as mpmath numbers."""
    if n == 1:
        return [mpmath.mpf(a)]
    return [mpmath.mpf(a) + (mpmath.mpf(b) - mpmath.mpf(a)) * j / (n - 1) for j in range(n)]


def example_angles(spec):
    """Angles ``phi_j`` for ``spec`` as mpmath numbers."""
    n = spec.n
    rng = np.random.default_rng(spec.seed)
    if spec.rule == "constant":
        return [mpmath.mpf(spec.param)] * n
    if spec.rule == "spiral":
        return _lin(0, spec.param, n)
    if spec.rule in ("perturbed-prefix", "perturbed-suffix"):
        phi = _lin(0, 1, n)
        rho = rng.uniform(0.0, spec.amplitude, n)
        k = int(spec.param)
        idx = range(k) if spec.rule == "perturbed-prefix" else range(n - k, n)
        for j in idx:
            phi[j] += mpmath.mpf(float(rho[j]))
        return phi
    if spec.rule == "random":
        return [mpmath.mpf(float(x)) for x in rng.uniform(0.0, 1.0, n)]
    if spec.rule == "two-spiral":
        odd, even = _lin(0, 1, n), _lin(0, 2, n)
        # j = 1, 3, 5, ... (1-based) is index 0, 2, 4, ...
        return [odd[j] if j % 2 == 0 else even[j] for j in range(n)]
    raise ArgumentError(f"unknown angle rule {spec.rule!r}; expected one of {RULES}")


def example_diagonal(spec, precision=None):
    """``d_j = R_j exp(2 pi i phi_j)``, computed with 40 digits and rounded to
    ``precision`` (a complex array, or :class:`DDComplex` for "dd")."""
    precision = precision or spec.precision
    with mpmath.workdps(40):
        R = _lin(1, 10, spec.n)
        phi = example_angles(spec)
        d = [r * mpmath.expjpi(2 * p) for r, p in zip(R, phi)]
        if precision == "dd":
            return from_mpmath(d)
        return np.array([complex(x) for x in d])


def example_specs(k, n=100, precision="double", seed=1):
    if n < 2:
        raise ArgumentError("n must be at least 2")
    base = dict(n=n, seed=seed, precision=precision)
    if k == 1:
        return [ExperimentSpec(rule="constant", param=0.1, label="clean", **base)]
    if k == 2:
        return [ExperimentSpec(rule="spiral", param=N, label=f"N={N}", **base) for N in range(1, 6)]
    if k in (3, 4):
        rule = "perturbed-prefix" if k == 3 else "perturbed-suffix"
        name = "k" if k == 3 else "K"
        sizes = [max(1, int(round(f * n))) for f in PERTURB_FRACTIONS]
        return [ExperimentSpec(rule=rule, param=s, amplitude=PERTURB_AMPLITUDE,
                               label=f"{name}={s}", **base) for s in sizes]
    if k == 5:
        return [ExperimentSpec(rule="random", label="random", **base),
                ExperimentSpec(rule="two-spiral", label="two-spiral", **base)]
    raise ArgumentError(f"example must be 1..5, got {k}")


def _solve(d, n, tol, maxit, precision):
    b = np.ones(n)
    rep = csym(d, b, tol=tol, maxit=maxit or n, precision=precision)
    return rep.trace


def run_example(k, n=100, precision=None, seed=1, tol=None, maxit=None):
    """Run example ``k`` and return one residual trace per parameter set.

    ``precision`` defaults to "dd" for Example 1 (where the point is the
    precision of the input) and "double" otherwise.  Example 1 adds the
    trace "roundtrip": the double-double diagonal rounded to double and
    solved again in double-double.
    """
    precision = precision or ("dd" if k == 1 else "double")
    specs = example_specs(k, n, precision, seed)
    traces, diagonals = {}, {}
    for spec in specs:
        d = example_diagonal(spec)
        traces[spec.label] = _solve(d, n, tol, maxit, precision)
        diagonals[spec.label] = d.to_complex() if isinstance(d, DDComplex) else d
    if k == 1 and precision == "dd":
        d = example_diagonal(specs[0], "double")
        traces["roundtrip"] = _solve(DDComplex.coerce(d), n, tol, maxit, "dd")
        diagonals["roundtrip"] = d
    return ExampleRun(k, specs, traces, diagonals)


__all__ += ["ResidualTrace"]
