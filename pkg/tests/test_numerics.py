import math

import numpy as np
import pytest
import scipy.sparse as sparse

from annulab import numerics


def dirichlet_tridiag(N, length=1.0):
    h = length / N
    return numerics.TridiagonalOperator(
        diag=np.full(N - 1, 2.0 / h**2), offdiag=np.full(N - 2, -1.0 / h**2)
    ), h


def discrete_interval_eigenvalue(k, N, length=1.0):
    # closed-form spectrum of the discrete Dirichlet Laplacian
    h = length / N
    return (2.0 - 2.0 * math.cos(k * math.pi / N)) / h**2


def test_tridiag_three_point_interval():
    op, _ = dirichlet_tridiag(4)
    vals, vecs = numerics.tridiag_smallest_eigenpairs(op, 1)
    assert vals[0] == pytest.approx((2.0 - math.sqrt(2.0)) * 16.0, rel=1e-12)
    assert np.linalg.norm(vecs[:, 0]) == pytest.approx(1.0, rel=1e-12)


def test_tridiag_diagonal_case():
    op = numerics.TridiagonalOperator(diag=np.array([5.0, 5.0]), offdiag=np.array([0.0]))
    vals, vecs = numerics.tridiag_smallest_eigenpairs(op, 2)
    assert vals == pytest.approx([5.0, 5.0])
    gram = vecs.T @ vecs
    assert np.allclose(gram, np.eye(2), atol=1e-12)


def test_tridiag_matches_closed_form_discrete_spectrum():
    op, _ = dirichlet_tridiag(200)
    vals, _ = numerics.tridiag_smallest_eigenpairs(op, 5)
    for k in range(1, 6):
        assert vals[k - 1] == pytest.approx(discrete_interval_eigenvalue(k, 200), rel=1e-12)


def test_tridiag_richardson_hits_continuum():
    v1, _ = numerics.tridiag_smallest_eigenpairs(dirichlet_tridiag(200)[0], 1)
    v2, _ = numerics.tridiag_smallest_eigenpairs(dirichlet_tridiag(400)[0], 1)
    lam = numerics.richardson(v1[0], v2[0])
    assert lam == pytest.approx(math.pi**2, rel=1e-8)


def test_tridiag_refinement_is_second_order():
    exact = math.pi**2
    e1 = abs(numerics.tridiag_smallest_eigenpairs(dirichlet_tridiag(100)[0], 1)[0][0] - exact)
    e2 = abs(numerics.tridiag_smallest_eigenpairs(dirichlet_tridiag(200)[0], 1)[0][0] - exact)
    assert e1 / e2 == pytest.approx(4.0, rel=0.05)


def test_tridiag_eigenvector_conventions():
    op, _ = dirichlet_tridiag(64)
    vals, vecs = numerics.tridiag_smallest_eigenpairs(op, 4)
    assert np.all(np.diff(vals) >= 0)
    gram = vecs.T @ vecs
    assert np.allclose(gram, np.eye(4), atol=1e-8)
    for j in range(4):
        i = np.argmax(np.abs(vecs[:, j]))
        assert vecs[i, j] > 0


def laplacian_2d(n):
    I = sparse.identity(n - 1)
    op1, _ = dirichlet_tridiag(n)
    T = op1.to_sparse()
    return sparse.kron(T, I) + sparse.kron(I, T)


def test_sparse_matches_tridiag():
    op1, _ = dirichlet_tridiag(128)
    vals_t, _ = numerics.tridiag_smallest_eigenpairs(op1, 3)
    op = numerics.SparseSymmetricOperator.from_matrix(op1.to_sparse())
    vals_s, _ = numerics.sparse_smallest_eigenpairs(op, 3, shift=0.0)
    assert vals_s == pytest.approx(vals_t, rel=1e-10)


def test_sparse_2d_unit_square():
    A = laplacian_2d(64)
    op = numerics.SparseSymmetricOperator.from_matrix(A)
    vals, _ = numerics.sparse_smallest_eigenpairs(op, 1, shift=0.0)
    # O(h^2) discretization error at h = 1/64
    assert vals[0] == pytest.approx(2.0 * math.pi**2, rel=1e-3)


def test_sparse_kronecker_sum_additivity():
    opa, _ = dirichlet_tridiag(48, length=1.0)
    opb, _ = dirichlet_tridiag(48, length=2.0)
    A, B = opa.to_sparse(), opb.to_sparse()
    Ia = sparse.identity(A.shape[0])
    Ib = sparse.identity(B.shape[0])
    ksum = sparse.kron(A, Ib) + sparse.kron(Ia, B)
    lam_sum = numerics.sparse_smallest_eigenpairs(
        numerics.SparseSymmetricOperator.from_matrix(ksum), 1)[0][0]
    lam_a = numerics.tridiag_smallest_eigenpairs(opa, 1)[0][0]
    lam_b = numerics.tridiag_smallest_eigenpairs(opb, 1)[0][0]
    assert lam_sum == pytest.approx(lam_a + lam_b, rel=1e-8)


def test_sparse_apply_only_path_uses_cg():
    op1, _ = dirichlet_tridiag(64)
    mat = op1.to_sparse()
    op = numerics.SparseSymmetricOperator(dimension=mat.shape[0], apply=lambda v: mat @ v)
    vals, _ = numerics.sparse_smallest_eigenpairs(op, 2, shift=0.0)
    ref, _ = numerics.tridiag_smallest_eigenpairs(op1, 2)
    assert vals == pytest.approx(ref, rel=1e-8)


def test_sparse_rejects_nonsymmetric():
    mat = sparse.csr_matrix(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        numerics.SparseSymmetricOperator(dimension=2, apply=lambda v: mat @ v)


def test_integrate_samples_rules():
    x = np.linspace(0.0, 1.0, 1001)
    w = numerics.trapezoid_weights(x)
    assert numerics.integrate_samples(x, w) == pytest.approx(0.5, abs=1e-6)

    x = np.linspace(0.0, math.pi, 1001)
    w = numerics.trapezoid_weights(x)
    assert numerics.integrate_samples(np.sin(x), w) == pytest.approx(2.0, abs=1e-5)

    x = np.linspace(1.0, 2.0, 11)
    w = numerics.simpson_weights(x)
    assert numerics.integrate_samples(x**3, w) == pytest.approx(3.75, rel=1e-14)


def test_integrate_samples_length_mismatch():
    with pytest.raises(ValueError):
        numerics.integrate_samples(np.ones(3), np.ones(4))


def test_sparse_residual_target_enforced():
    op1, _ = dirichlet_tridiag(64)
    op = numerics.SparseSymmetricOperator.from_matrix(op1.to_sparse())
    with pytest.raises(numerics.NonConvergenceError):
        numerics.sparse_smallest_eigenpairs(op, 2, shift=0.0, residual_tol=1e-30)
