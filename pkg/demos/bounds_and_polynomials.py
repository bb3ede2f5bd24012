"""
Min-max bounds and the polynomials behind them
==============================================

For a condiagonalizable M the residual after j steps is bounded by
cond(X) times a discrete min-max problem over polynomials
p(l) = sum (a_2k + a_2k+1 l) |l|^2k on the transported nodes.  Here the
bound is computed by Lawson iteration and compared with the actual
residuals, then the same polynomial class is used for interpolation and
its zero sets are inspected.
"""

import numpy as np

from rlkrylov import R2Polynomial, csym, gmres_bound_trace, interpolate_r2, lawson_minmax, rgmres
from rlkrylov.coneig import random_condiagonalizable
from rlkrylov.polyspace import zero_moduli

rng = np.random.default_rng(11)

# a nonsymmetric instance: inequality only
M, X, lam = random_condiagonalizable(10, rng, cond=30)
b = rng.standard_normal(10) + 1j * rng.standard_normal(10)
bt = gmres_bound_trace(M, b, kappa=1.0)
r = rgmres(1.0, M, b, tol=0).trace.residual_norms
print("cond(X) = %.1f" % bt.cond_X)
print(" j   residual     bound")
for j in range(1, len(r)):
    print("%2d   %.3e   %.3e" % (j, r[j], bt.B[j - 1]))

# on a diagonal system the bound is attained when r_k^2 are the extremal weights
d = np.linspace(1, 10, 12) * np.exp(2j * np.pi * np.linspace(0, 1, 12))
res = lawson_minmax(d, 0, 3)
w = np.sqrt(res.weights)
print("\nE_4 = %.6f, CSYM with extremal weights: %.6f"
      % (res.E, csym(np.diag(d), w, tol=0, maxit=4).trace.residual_norms[4] / np.linalg.norm(w)))

# interpolation: two points per circle
z = np.array([1, -1, 2j, 2, 3 * np.exp(0.4j), -3j])
y = np.arange(6.0)
p = interpolate_r2(z, y)
print("\ninterpolant in P_5(r2), error at the nodes %.1e" % np.max(np.abs(p(z) - y)))

# a zero circle can be planted with a radial factor
q = R2Polynomial([2, -1]).times_radial(1.5)
for zm in zero_moduli(q):
    print("zero set: modulus %.3f, %s" % (zm.modulus, zm.kind))
