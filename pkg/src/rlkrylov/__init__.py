"""Krylov subspace methods for R-linear equations ``kappa*z + M conj(z) = b``.

Submodules:

- :mod:`~rlkrylov.ddarith`, :mod:`~rlkrylov.numeric`: double-double
  arithmetic and dense kernels (QR eigensolver, real least squares).
- :mod:`~rlkrylov.krylov`: R-linear Arnoldi and complex symmetric Lanczos.
- :mod:`~rlkrylov.solver`: R-linear GMRES and CSYM.
- :mod:`~rlkrylov.coneig`: coneigenvalues, con-Schur form, condiagonalization.
- :mod:`~rlkrylov.polyspace`: the polynomial class ``P_j(r2)``.
- :mod:`~rlkrylov.bound`: min-max residual bounds (Lawson iteration).
- :mod:`~rlkrylov.randmat`: Monte Carlo over Ginibre matrices.
- :mod:`~rlkrylov.experiments`, :mod:`~rlkrylov.io`: the diagonal test
  problems and CSV/SVG output.
"""

from .bound import BoundTrace, gmres_bound_trace, lawson_minmax
from .coneig import (ConDiagonalization, ConSchur, con_diagonalize, con_schur,
                     coneigenvalue_moduli, is_condiagonalizable, isometry_phase_factor,
                     phase_diag, transported_nodes)
from .ddarith import DDComplex, DDReal
from .errors import (ArgumentError, ConvergenceError, DegenerateConeigenvaluesError,
                     NotContriangularizableError, NumericalError, RLinearError)
from .krylov import JacobiMatrix, KrylovFactorization, cs_lanczos, rlinear_arnoldi
from .polyspace import (CurveSpec, NodeSystem, R2Polynomial, approx_on_curve,
                        discrete_inner_product, eval_r2, exp_r2, interpolate_r2,
                        orthopoly_eval, zero_moduli)
from .randmat import McEstimate, estimate_condiag_probability, sample_ginibre
from .solver import ResidualTrace, SolveReport, brute_force_minresidual, csym, rgmres

__version__ = "0.1.0"
