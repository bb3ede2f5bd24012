import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlkrylov import numeric as nm
from rlkrylov.ddarith import DDComplex
from rlkrylov.errors import ArgumentError
from rlkrylov.krylov import JacobiMatrix, cs_lanczos, krylov_similarity_check, rlinear_arnoldi

from conftest import crandn


def monomial_krylov(M, b, j):
    V = [b]
    for _ in range(j - 1):
        V.append(M @ V[-1].conj())
    return np.column_stack(V)


def test_arnoldi_diagonal_breakdown():
    fac = rlinear_arnoldi(np.diag([3.0, 4.0, 5.0]), np.array([1.0, 0, 0]), 3)
    assert fac.breakdown_step == 1 and fac.steps == 1
    assert np.allclose(fac.Q, [[1], [0], [0]])
    assert np.allclose(fac.H, [[3], [0]])


def test_arnoldi_permutation():
    fac = rlinear_arnoldi(np.array([[0.0, 1], [1, 0]]), np.array([1.0, 0]), 2)
    assert fac.breakdown_step == 2
    assert np.allclose(fac.Q, np.eye(2))
    assert np.allclose(fac.H, [[0, 1], [1, 0], [0, 0]])


def test_arnoldi_relation_and_orthogonality(rng):
    M = crandn(rng, 12, 12)
    b = crandn(rng, 12)
    fac = rlinear_arnoldi(M, b, 8)
    Q, H = fac.Q, fac.H
    assert np.linalg.norm(M @ Q[:, :8].conj() - Q @ H) <= 1e-12 * np.linalg.norm(M)
    assert np.linalg.norm(Q.conj().T @ Q - np.eye(9)) <= 1e-12
    sub = np.diag(H, -1)
    assert np.all(np.abs(sub.imag) == 0) and np.all(sub.real >= 0)
    assert np.allclose(np.tril(H, -2), 0)


def test_arnoldi_spans_monomial_krylov(rng):
    M = crandn(rng, 10, 10)
    b = crandn(rng, 10)
    fac = rlinear_arnoldi(M, b, 5)
    V = monomial_krylov(M, b, 5)
    for j in range(1, 6):
        Qj = fac.Q[:, :j]
        for v in V[:, :j].T:
            assert np.linalg.norm(v - Qj @ (Qj.conj().T @ v)) <= 1e-10 * np.linalg.norm(v)


def test_arnoldi_basis_independent_of_kappa(rng):
    # the process never sees kappa, so the basis is bitwise the same
    M = crandn(rng, 8, 8)
    b = crandn(rng, 8)
    a = rlinear_arnoldi(M, b, 6)
    c = rlinear_arnoldi(M, b, 6)
    assert np.array_equal(a.Q, c.Q) and np.array_equal(a.H, c.H)


def test_arnoldi_errors(rng):
    with pytest.raises(ArgumentError):
        rlinear_arnoldi(np.eye(3), np.zeros(3), 2)
    with pytest.raises(ArgumentError):
        rlinear_arnoldi(np.eye(3), np.ones(3), 4)
    with pytest.raises(ArgumentError):
        rlinear_arnoldi(np.eye(3), np.ones(2), 1)


def test_arnoldi_without_reorth(rng):
    M = crandn(rng, 10, 10)
    b = crandn(rng, 10)
    fac = rlinear_arnoldi(M, b, 6, reorth=False)
    assert np.linalg.norm(M @ fac.Q[:, :6].conj() - fac.Q @ fac.H) <= 1e-12 * np.linalg.norm(M)


def test_lanczos_diag_example():
    J, Q = cs_lanczos(np.diag([1.0, 2.0]), np.array([1, 1]) / np.sqrt(2), 2)
    assert np.allclose(J.alphas, [1.5, 1.5]) and np.allclose(J.betas, [0.5])
    assert np.allclose(J.to_dense(), [[1.5, 0.5], [0.5, 1.5]])


def test_lanczos_one_by_one():
    J, Q = cs_lanczos(np.array([[2 - 1j]]), np.array([1.0 + 0j]), 1)
    assert np.allclose(J.alphas, [2 - 1j]) and len(J.betas) == 0


def test_lanczos_matches_arnoldi(rng):
    A = crandn(rng, 10, 10)
    M = (A + A.T) / 2
    b = crandn(rng, 10)
    b /= np.linalg.norm(b)
    J, Q = cs_lanczos(M, b, 9)
    fac = rlinear_arnoldi(M, b, 9)
    H = fac.H
    assert np.allclose(J.alphas, np.diag(H), atol=1e-10)
    assert np.allclose(J.betas, np.diag(H, -1)[:8], atol=1e-10)
    assert np.allclose(J.betas, np.diag(H, 1)[:8], atol=1e-10)
    assert np.allclose(np.triu(H[:9], 2), 0, atol=1e-10)
    assert np.linalg.norm(Q.conj().T @ Q - np.eye(Q.shape[1])) <= 1e-12


def test_lanczos_rejects_nonsymmetric_and_nonunit(rng):
    with pytest.raises(ArgumentError):
        cs_lanczos(crandn(rng, 4, 4), np.eye(4)[0], 2)
    with pytest.raises(ArgumentError):
        cs_lanczos(np.eye(4), np.ones(4), 2)


def test_lanczos_dd_agrees_with_double(rng):
    A = crandn(rng, 8, 8)
    M = A + A.T
    b = crandn(rng, 8)
    b /= np.linalg.norm(b)
    J, _ = cs_lanczos(M, b, 6)
    Jd, Qd = cs_lanczos(DDComplex.coerce(M), DDComplex.coerce(b), 6, precision="dd")
    assert np.allclose(nm.to_complex(Jd.alphas), J.alphas, rtol=1e-10)
    assert np.allclose(nm.to_float(Jd.betas), J.betas, rtol=1e-10)


def test_jacobi_matrix_rejects_nonpositive_beta():
    with pytest.raises(ArgumentError):
        JacobiMatrix(np.array([1.0, 2.0]), np.array([0.0]))
    with pytest.raises(ArgumentError):
        JacobiMatrix(np.array([1.0, 2.0]), np.array([1.0, 1.0]))


def test_similarity_check_identity_unitary_diagonal(rng):
    M = crandn(rng, 6, 6)
    b = crandn(rng, 6)
    assert np.all(krylov_similarity_check(M, b, np.eye(6)) <= 1e-12)
    U, _ = np.linalg.qr(crandn(rng, 6, 6))
    assert np.all(krylov_similarity_check(M, b, U, steps=5) <= 1e-10)
    M3 = crandn(rng, 3, 3)
    b3 = crandn(rng, 3)
    assert np.all(krylov_similarity_check(M3, b3, np.diag([1.0, 10, 100])) <= 1e-8)


def test_similarity_check_singular_x():
    with pytest.raises(ArgumentError):
        krylov_similarity_check(np.eye(2), np.ones(2), np.zeros((2, 2)))


@given(st.floats(min_value=-np.pi, max_value=np.pi), st.integers(0, 2**32 - 1))
def test_coneigenpair_circle(phi, seed):
    # M conj(z) = lam z  implies  M conj(e^{i phi} z) = e^{-2 i phi} lam (e^{i phi} z)
    rng = np.random.default_rng(seed)
    A = crandn(rng, 5, 5)
    M = A + A.T
    w, V = np.linalg.eigh(M @ M.conj())
    # eigenvector of M conj(M), phase-rotated into a coneigenvector
    v = V[:, -1]
    mu = np.vdot(v, M @ v.conj())
    z = v * np.exp(0.5j * np.angle(mu))
    lam = np.vdot(z, M @ z.conj())
    assert np.linalg.norm(M @ z.conj() - lam * z) <= 1e-10 * np.linalg.norm(M)
    zr = np.exp(1j * phi) * z
    lr = np.exp(-2j * phi) * lam
    assert np.linalg.norm(M @ zr.conj() - lr * zr) <= 1e-10 * np.linalg.norm(M)
