"""Monte Carlo estimates of the probability that a Ginibre matrix is
condiagonalizable.

For complex Ginibre matrices (independent standard normal real and
imaginary parts) the probability is ``2^{-n(n-1)/2}``; for real Ginibre
matrices it is ``2^{-n(n-1)/4}``, the probability of a real spectrum.
"""

from dataclasses import dataclass

import numpy as np

from .coneig import is_condiagonalizable
from .errors import ArgumentError

__all__ = ["McEstimate", "sample_ginibre", "estimate_condiag_probability",
           "expected_probability", "trial_rng"]

KINDS = ("complex", "real")


@dataclass(frozen=True)
class McEstimate:
    n: int
    kind: str
    samples: int
    hits: int
    p_hat: float
    stderr: float
    expected: float

    def within(self, sigmas=3.0):
        """True if ``|p_hat - expected| <= sigmas * stderr``."""
        return abs(self.p_hat - self.expected) <= sigmas * self.stderr


def expected_probability(n, kind):
    if kind not in KINDS:
        raise ArgumentError(f"kind must be one of {KINDS}")
    e = n * (n - 1) / (2 if kind == "complex" else 4)
    return 2.0 ** (-e)


def sample_ginibre(n, kind, rng):
    """``n x n`` Ginibre matrix: ``g1 + i g2`` entries (complex) or ``g1`` (real)."""
    if n < 1:
        raise ArgumentError("n must be positive")
    if kind == "complex":
        return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    if kind == "real":
        return rng.standard_normal((n, n))
    raise ArgumentError(f"kind must be one of {KINDS}")


def trial_rng(seed, i):
    """Generator for trial ``i``: Philox keyed by a hash of ``(seed, i)``,
    so trials do not depend on execution order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, i])))


def estimate_condiag_probability(n, kind="complex", samples=10_000, seed=0):
    if samples < 1:
        raise ArgumentError("samples must be positive")
    expected = expected_probability(n, kind)
    hits = 0
    for i in range(samples):
        hits += is_condiagonalizable(sample_ginibre(n, kind, trial_rng(seed, i)))
    p = hits / samples
    return McEstimate(n, kind, samples, hits, p, float(np.sqrt(p * (1 - p) / samples)), expected)
