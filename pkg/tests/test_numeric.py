from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from rlkrylov import numeric as nm
from rlkrylov.ddarith import DDComplex, DDReal, EPS, from_mpmath, two_prod, two_sum
from rlkrylov.errors import ArgumentError, NumericalError

from conftest import crandn

finite = st.floats(min_value=-1e300, max_value=1e300, allow_nan=False, allow_infinity=False)
moderate = st.floats(min_value=-1e150, max_value=1e150, allow_nan=False, allow_infinity=False)


@given(finite, finite)
def test_two_sum_is_error_free(a, b):
    s, e = two_sum(np.float64(a), np.float64(b))
    assert Fraction(float(s)) + Fraction(float(e)) == Fraction(a) + Fraction(b)


@given(moderate, moderate)
def test_two_prod_is_error_free(a, b):
    assume(a == 0 or b == 0 or 1e-290 < abs(a * b) < 1e300)
    p, e = two_prod(np.float64(a), np.float64(b))
    if p != 0:
        assert Fraction(float(p)) + Fraction(float(e)) == Fraction(a) * Fraction(b)


def _mp(x):
    return mpmath.mpf(float(x.hi)) + mpmath.mpf(float(x.lo))


@pytest.mark.parametrize("op", ["add", "sub", "mul", "div", "sqrt"])
def test_dd_ops_against_mpmath(op, rng):
    with mpmath.workdps(60):
        a_mp = [mpmath.mpf(1) / 3 * (1 + k) ** 0.7 * (-1) ** k for k in range(1, 40)]
        b_mp = [mpmath.sqrt(2 + k) * mpmath.pi / 7 for k in range(1, 40)]
        a = from_mpmath(a_mp).re
        b = from_mpmath(b_mp).re
        ref = {"add": lambda x, y: x + y, "sub": lambda x, y: x - y,
               "mul": lambda x, y: x * y, "div": lambda x, y: x / y,
               "sqrt": lambda x, y: mpmath.sqrt(y)}[op]
        got = {"add": a + b, "sub": a - b, "mul": a * b, "div": a / b, "sqrt": b.sqrt()}[op]
        for i in range(len(a)):
            exact = ref(_mp(a[i]), _mp(b[i]))
            err = abs(_mp(got[i]) - exact) / abs(exact)
            assert err <= 2.0 ** -100


def test_dd_roundtrip_through_double_drops_low_part():
    with mpmath.workdps(40):
        x = from_mpmath([mpmath.mpf(1) / 3, mpmath.pi])
    d = x.to_complex()
    back = DDComplex.coerce(d)
    assert np.all(back.re.lo == 0) and np.all(back.re.hi == x.re.hi)
    assert np.all(DDComplex.coerce(back.to_complex()).re.hi == back.re.hi)


def test_apply_antilinear_examples():
    M = np.array([[0, 1], [1, 0]], dtype=complex)
    assert np.allclose(nm.apply_antilinear(2, M, np.array([1j, 0])), [2j, -1j])
    z = np.array([1 + 2j, -3j, 0.5])
    assert np.array_equal(nm.apply_antilinear(0, np.eye(3), z), z.conj())


def test_apply_antilinear_naive_loop(rng):
    M = crandn(rng, 5, 5)
    z = crandn(rng, 5)
    kappa = 0.3 - 1.1j
    ref = np.array([kappa * z[i] + sum(M[i, k] * z[k].conjugate() for k in range(5))
                    for i in range(5)])
    assert np.linalg.norm(nm.apply_antilinear(kappa, M, z) - ref) <= 1e-14 * np.linalg.norm(ref)


def test_apply_antilinear_dimension_mismatch():
    with pytest.raises(ArgumentError):
        nm.apply_antilinear(0, np.eye(3), np.ones(2))


def test_apply_antilinear_dd_matches_double(rng):
    M = crandn(rng, 6, 6)
    z = crandn(rng, 6)
    out = nm.apply_antilinear(1j, DDComplex.coerce(M), DDComplex.coerce(z))
    assert np.allclose(out.to_complex(), 1j * z + M @ z.conj(), rtol=1e-15)


def test_solve_real_ls_examples():
    assert np.allclose(nm.solve_real_ls(np.eye(3), np.array([1.0, 2, 3])), [1, 2, 3])
    assert np.allclose(nm.solve_real_ls(np.ones((2, 1)), np.array([0.0, 2])), [1])


def test_solve_real_ls_normal_equations(rng):
    A = rng.standard_normal((8, 3))
    b = rng.standard_normal(8)
    x = nm.solve_real_ls(A, b)
    assert np.linalg.norm(A.T @ (A @ x - b)) <= 1e-12 * np.linalg.norm(b)
    assert np.allclose(x, np.linalg.lstsq(A, b, rcond=None)[0], rtol=1e-12)


def test_solve_real_ls_row_permutation_invariant(rng):
    A = rng.standard_normal((9, 4))
    b = rng.standard_normal(9)
    p = rng.permutation(9)
    assert np.allclose(nm.solve_real_ls(A, b), nm.solve_real_ls(A[p], b[p]), rtol=1e-12)


def test_solve_real_ls_rank_deficient():
    for A in (np.array([[1.0, 0.0], [2.0, 0.0], [3.0, 0.0]]),
              np.array([[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]])):
        with pytest.raises(NumericalError):
            nm.solve_real_ls(A, np.ones(3))


def test_solve_real_ls_dd(rng):
    A = rng.standard_normal((7, 3))
    b = rng.standard_normal(7)
    x = nm.solve_real_ls(DDReal(A), DDReal(b))
    assert np.allclose(x.to_float(), np.linalg.lstsq(A, b, rcond=None)[0], rtol=1e-13)


def test_eig_dense_examples():
    assert np.allclose(np.sort(nm.eig_dense(np.diag([1.0, 2, 3])).real), [1, 2, 3])
    assert np.allclose(nm.eig_dense(np.array([[0.0, 1], [0, 0]])), [0, 0])


def test_eig_dense_trace_det(rng):
    A = crandn(rng, 10, 10)
    ev = nm.eig_dense(A)
    assert abs(ev.sum() - np.trace(A)) <= 1e-10 * np.linalg.norm(A)
    det = np.linalg.det(A)
    assert abs(np.prod(ev) - det) <= 1e-8 * abs(det)


def test_eig_dense_residual_and_oracle(rng):
    A = crandn(rng, 12, 12)
    ev = nm.eig_dense(A)
    ref = np.linalg.eigvals(A)
    for lam in ev:
        assert np.min(np.abs(ref - lam)) <= 1e-10 * np.linalg.norm(A)
        v = nm.inverse_iteration(A, lam)
        assert np.linalg.norm(A @ v - lam * v) <= 12 * 1e-13 * np.linalg.norm(A)


@given(st.integers(min_value=1, max_value=9), st.integers(min_value=0, max_value=2**32 - 1))
def test_eig_dense_permutation_invariant(n, seed):
    rng = np.random.default_rng(seed)
    A = crandn(rng, n, n)
    P = np.eye(n)[rng.permutation(n)]
    e1 = np.sort_complex(nm.eig_dense(A))
    e2 = nm.eig_dense(P.T @ A @ P)
    for lam in e1:
        assert np.min(np.abs(e2 - lam)) <= 1e-10 * max(np.linalg.norm(A), 1)


def test_eig_dense_defective_and_real_input():
    J = np.array([[2.0, 1, 0], [0, 2, 1], [0, 0, 2]])
    assert np.allclose(nm.eig_dense(J), 2, atol=1e-5)
    R = np.array([[0.0, -1], [1, 0]])
    assert np.allclose(np.sort(nm.eig_dense(R).imag), [-1, 1])


def test_cond2_matches_svd(rng):
    X = crandn(rng, 8, 8) @ np.diag(np.geomspace(1, 1e3, 8))
    s = np.linalg.svd(X, compute_uv=False)
    assert np.isclose(nm.cond2(X), s[0] / s[-1], rtol=1e-8)


def test_machine_eps():
    assert nm.machine_eps("double") == np.finfo(float).eps
    assert nm.machine_eps("dd") <= 2.0 ** -100
    assert EPS == 2.0 ** -104
