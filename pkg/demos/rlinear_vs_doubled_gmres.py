"""
R-linear GMRES against GMRES on the doubled real system
=======================================================

z -> kappa z + M conj(z) is linear over R only.  Written out on
(Re z, Im z) it becomes a real 2n x 2n matrix, and ordinary GMRES can be
run on that.  The R-linear method keeps the complex structure: each step
costs one product with M and the basis stays n-dimensional complex.  Both
reach the same solution; the step counts come out close.
"""

import numpy as np
from scipy.sparse.linalg import gmres

from rlkrylov import rgmres

rng = np.random.default_rng(5)
n = 60
M = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2 * n)
kappa = 1.5
b = rng.standard_normal(n) + 1j * rng.standard_normal(n)

rep = rgmres(kappa, M, b, tol=1e-10, maxit=n)
print("R-linear GMRES: %d iterations, relative residual %.2e"
      % (rep.iterations, rep.trace.relative[-1]))

# the same operator on R^{2n}
I = np.eye(n)
A = np.block([[kappa * I + M.real, M.imag],
              [M.imag, kappa * I - M.real]])
rhs = np.concatenate([b.real, b.imag])
hist = []
x, info = gmres(A, rhs, rtol=1e-10, restart=2 * n, maxiter=1,
                callback=hist.append, callback_type="pr_norm")
print("GMRES on the doubled system: %d iterations, relative residual %.2e"
      % (len(hist), np.linalg.norm(A @ x - rhs) / np.linalg.norm(rhs)))

z = x[:n] + 1j * x[n:]
print("solutions agree to %.1e" % (np.linalg.norm(z - rep.solution) / np.linalg.norm(z)))

print("\n  j   R-linear    doubled")
for j in range(4, min(rep.iterations, len(hist)) + 1, 4):
    print("%3d   %.3e   %.3e" % (j, rep.trace.relative[j], hist[j - 1]))
