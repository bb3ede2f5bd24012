"""
How often is a random matrix condiagonalizable?
===============================================

For complex Ginibre matrices the probability is 2^(-n(n-1)/2); for real
ones it equals the probability of a real spectrum, 2^(-n(n-1)/4).  The
test used per sample: the eigenvalues of M conj(M) are real,
nonnegative and distinct.
"""

from rlkrylov import estimate_condiag_probability

for kind, sizes in (("complex", (1, 2, 3, 4)), ("real", (2, 3))):
    for n in sizes:
        est = estimate_condiag_probability(n, kind, samples=20000, seed=1)
        print("%-7s n=%d  estimate %.4f +- %.4f   expected %.4f"
              % (kind, n, est.p_hat, est.stderr, est.expected))
