import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlkrylov.ddarith import DDComplex
from rlkrylov.errors import ArgumentError, NumericalError
from rlkrylov.krylov import rlinear_arnoldi
from rlkrylov.solver import brute_force_minresidual, csym, rgmres

from conftest import crandn
from oracles import minres_trace, realified_min_residual


def test_identity_real_rhs_one_step():
    rep = rgmres(0, np.eye(4), np.array([1.0, 2, 3, 4]))
    assert rep.iterations == 1 and rep.converged
    assert np.allclose(rep.solution, [1, 2, 3, 4])
    assert rep.trace.residual_norms[1] <= 1e-14


def test_diag12_terminates_at_step_two():
    rep = rgmres(0, np.diag([1.0, 2.0]), np.array([1.0, 1.0]))
    assert rep.iterations == 2 and rep.trace.residual_norms[-1] <= 1e-14
    assert np.allclose(np.diag([1.0, 2.0]) @ rep.solution.conj(), [1, 1])


def test_rgmres_matches_brute_force(rng):
    M = crandn(rng, 10, 10)
    b = crandn(rng, 10)
    rep = rgmres(1 + 1j, M, b, tol=0, maxit=8)
    for j in range(1, 7):
        ref = brute_force_minresidual(1 + 1j, M, b, j)
        assert abs(rep.trace.residual_norms[j] - ref) <= 1e-10 * np.linalg.norm(b)


def test_rgmres_matches_projected_oracle(rng):
    # an independent route: least squares over the Arnoldi basis on the 2n real form
    M = crandn(rng, 9, 9)
    b = crandn(rng, 9)
    kappa = -0.4 + 2j
    rep = rgmres(kappa, M, b, tol=0, maxit=9)
    Q = rlinear_arnoldi(M, b, 9).Q
    for j in range(1, rep.iterations + 1):
        ref = realified_min_residual(kappa, M, b, Q[:, :j])
        assert abs(rep.trace.residual_norms[j] - ref) <= 1e-10 * np.linalg.norm(b)


def test_brute_force_examples():
    d = np.array([1.0, 2.0, 3.0])
    assert brute_force_minresidual(0, np.diag(d), np.ones(3), 3) <= 1e-12
    b = np.array([1 + 1j, 0])
    # z = a b, M conj(z) - b = conj(a)(1 - i) e1 - (1 + i) e1: exactly solvable
    assert brute_force_minresidual(0, np.eye(2), b, 1) <= 1e-14
    assert rgmres(0, np.eye(2), b, tol=0, maxit=1).trace.residual_norms[1] <= 1e-14


def test_brute_force_ill_conditioned():
    M = np.diag(np.geomspace(1, 1e6, 10)).astype(complex)
    with pytest.raises(NumericalError):
        brute_force_minresidual(0, M, np.ones(10), 10)


def test_zero_rhs_and_bad_maxit():
    with pytest.raises(ArgumentError):
        rgmres(0, np.eye(2), np.zeros(2))
    with pytest.raises(ArgumentError):
        rgmres(0, np.eye(2), np.ones(2), maxit=3)
    with pytest.raises(ArgumentError):
        csym(np.eye(2), np.zeros(2))


@given(st.integers(2, 10), st.integers(0, 2**32 - 1),
       st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_rgmres_monotone(n, seed, kappa):
    rng = np.random.default_rng(seed)
    rep = rgmres(kappa, crandn(rng, n, n), crandn(rng, n), tol=0)
    r = rep.trace.residual_norms
    assert r[0] == pytest.approx(np.linalg.norm(rep.trace.residual_norms[0]))
    assert np.all(np.diff(r) <= 1e-14 * r[0])


@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_csym_matches_rgmres(n, seed):
    rng = np.random.default_rng(seed)
    A = crandn(rng, n, n)
    M = A + A.T
    b = crandn(rng, n)
    r1 = csym(M, b, tol=0).trace.residual_norms
    r2 = rgmres(0, M, b, tol=0).trace.residual_norms
    k = min(len(r1), len(r2))
    assert np.all(np.abs(r1[:k] - r2[:k]) <= 1e-10 * np.linalg.norm(b))


def test_csym_solution_is_minimizer(rng):
    A = crandn(rng, 8, 8)
    M = A + A.T
    b = crandn(rng, 8)
    rep = csym(M, b, tol=0, maxit=5)
    res = np.linalg.norm(M @ rep.solution.conj() - b)
    assert res == pytest.approx(rep.trace.residual_norms[-1], rel=1e-10)


def test_csym_one_by_one():
    rep = csym(np.array([[2 - 3j]]), np.array([1.0]))
    assert rep.iterations == 1 and rep.trace.residual_norms[-1] <= 1e-15
    assert np.isclose(rep.solution[0], np.conj(1 / (2 - 3j)))


def test_csym_real_diagonal_is_minres():
    d = np.arange(1.0, 21.0)
    b = np.cos(np.arange(20.0)) + 1.5
    r1 = csym(np.diag(d), b, tol=0).trace.residual_norms
    r2 = minres_trace(np.diag(d), b, len(r1) - 1)
    k = min(len(r1), len(r2))
    assert k >= 15
    assert np.all(np.abs(r1[:k] - r2[:k]) <= 1e-10 * np.linalg.norm(b))


def test_unitary_invariance(rng):
    M = crandn(rng, 8, 8)
    b = crandn(rng, 8)
    U, _ = np.linalg.qr(crandn(rng, 8, 8))
    r1 = rgmres(0.5, M, b, tol=0).trace.residual_norms
    r2 = rgmres(0.5, U.conj().T @ M @ U.conj(), U.conj().T @ b, tol=0).trace.residual_norms
    assert np.allclose(r1, r2, atol=1e-10 * np.linalg.norm(b))


def test_dd_paths_agree_with_double(rng):
    A = crandn(rng, 7, 7)
    M = A + A.T
    b = crandn(rng, 7)
    Md, bd = DDComplex.coerce(M), DDComplex.coerce(b)
    rg = rgmres(1j, Md, bd, tol=0)
    cs = csym(Md, bd, tol=0)
    assert np.allclose(rg.trace.residual_norms[:5], rgmres(1j, M, b, tol=0).trace.residual_norms[:5],
                       rtol=1e-8)
    assert np.allclose(cs.trace.residual_norms[:5], csym(M, b, tol=0).trace.residual_norms[:5],
                       rtol=1e-8)
    z = cs.solution.to_complex()
    assert np.linalg.norm(M @ z.conj() - b) <= 1e-12 * np.linalg.norm(b)


def test_dd_reaches_below_double_precision():
    d = np.linspace(1, 10, 30) * np.exp(0.2j * np.pi)
    rep = csym(DDComplex.coerce(d), DDComplex.coerce(np.ones(30)), precision="dd")
    assert rep.converged and rep.trace.relative[-1] <= 1e-25


def test_iterations_to():
    rep = rgmres(0, np.diag([1.0, 2.0, 3.0]), np.ones(3), tol=0)
    assert rep.trace.iterations_to(1e-12) == 3
    assert rep.trace.iterations_to(2.0) == 0
