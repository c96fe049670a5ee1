import numpy as np
import pytest

from oracles import hermitian_eigs_bisection, power_iteration_norm, singular_values_bisection
from ucorr import linalg


def test_svd_identity():
    U, s, V = linalg.svd(np.eye(2))
    assert np.allclose(s, [1.0, 1.0])


def test_svd_already_diagonal():
    U, s, V = linalg.svd(np.diag([3.0, 0.0]))
    assert np.allclose(s, [3.0, 0.0])


def test_svd_reconstruction_and_bisection_oracle():
    rng = np.random.default_rng(42)
    M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    U, s, V = linalg.svd(M)
    assert np.max(np.abs(U.conj().T @ U - np.eye(4))) < 1e-10
    assert np.max(np.abs(V.conj().T @ V - np.eye(4))) < 1e-10
    rec = U @ np.diag(s) @ V.conj().T
    assert np.max(np.abs(rec - M)) / np.max(np.abs(M)) < 1e-10
    oracle = singular_values_bisection(M)
    assert np.max(np.abs(np.sort(s) - np.sort(oracle))) < 1e-8


def test_svd_rejects_nonfinite():
    M = np.array([[1.0, np.nan], [0.0, 1.0]])
    with pytest.raises(ValueError):
        linalg.svd(M)


def test_operator_norm_identity_and_unitary_products():
    assert linalg.operator_norm(np.eye(4)) == pytest.approx(1.0, abs=1e-12)
    rng = np.random.default_rng(0)
    W1 = linalg.haar_unitary(2, rng)
    W2 = linalg.haar_unitary(3, rng)
    assert linalg.operator_norm(linalg.kron(W1, W2)) == pytest.approx(1.0, abs=1e-10)


def test_operator_norm_power_iteration_oracle():
    rng = np.random.default_rng(7)
    M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    assert abs(linalg.operator_norm(M) - power_iteration_norm(M)) < 1e-9


def test_operator_norm_adjoint_and_unitary_invariance():
    rng = np.random.default_rng(3)
    for _ in range(20):
        M = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        assert abs(linalg.operator_norm(M) - linalg.operator_norm(M.conj().T)) < 1e-10
        W1 = linalg.haar_unitary(4, rng)
        W2 = linalg.haar_unitary(4, rng)
        assert abs(linalg.operator_norm(W1 @ M @ W2) - linalg.operator_norm(M)) < 1e-9


def test_kron_convention():
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    E12 = np.zeros((2, 2))
    E12[0, 1] = 1.0
    E21 = E12.T
    K = linalg.kron(E12, E21)
    expected = np.zeros((4, 4))
    expected[1, 2] = 1.0  # row 0*2+1, col 1*2+0
    assert np.array_equal(K, expected)


def test_kron_mixed_product_identity():
    rng = np.random.default_rng(11)
    for _ in range(100):
        A, B, C, D = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)) for _ in range(4))
        lhs = linalg.kron(A, B) @ linalg.kron(C, D)
        rhs = linalg.kron(A @ C, B @ D)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_schmidt_simple_tensor():
    v = np.zeros(4, dtype=complex)
    v[1] = 1.0  # e_1 (x) e_2
    sd = linalg.schmidt(v, 2, 2)
    assert sd.rank == 1
    assert sd.coefficients[0] == pytest.approx(1.0, abs=1e-12)


def test_schmidt_balanced_pair():
    v = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2)
    sd = linalg.schmidt(v, 2, 2)
    assert np.allclose(sd.coefficients, [1 / np.sqrt(2)] * 2, atol=1e-12)


def test_schmidt_matches_bisection_oracle():
    rng = np.random.default_rng(5)
    v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    v /= np.linalg.norm(v)
    sd = linalg.schmidt(v, 2, 3)
    oracle = singular_values_bisection(v.reshape(2, 3))
    oracle = oracle[oracle > 1e-12]
    assert np.max(np.abs(np.sort(sd.coefficients) - np.sort(oracle))) < 1e-8


def test_schmidt_reconstruction_sweep():
    rng = np.random.default_rng(9)
    count = 0
    for _ in range(100):
        n = int(rng.integers(2, 5))
        m = int(rng.integers(2, 5))
        v = rng.standard_normal(n * m) + 1j * rng.standard_normal(n * m)
        v /= np.linalg.norm(v)
        sd = linalg.schmidt(v, n, m)
        assert np.max(np.abs(sd.reconstruct() - v)) < 1e-10
        assert np.sum(sd.coefficients**2) == pytest.approx(1.0, abs=1e-10)
        G = sd.left_vectors @ sd.left_vectors.conj().T
        assert np.max(np.abs(G - np.eye(sd.rank))) < 1e-10
        G = sd.right_vectors @ sd.right_vectors.conj().T
        assert np.max(np.abs(G - np.eye(sd.rank))) < 1e-10
        count += 1
    assert count == 100


def test_schmidt_rejects_zero():
    with pytest.raises(ValueError):
        linalg.schmidt(np.zeros(4), 2, 2)


def test_min_eigenvalue_basics():
    assert linalg.min_eigenvalue_hermitian(np.eye(3)) == pytest.approx(1.0, abs=1e-12)
    assert linalg.min_eigenvalue_hermitian(np.diag([2.0, -1.0])) == pytest.approx(-1.0, abs=1e-12)


def test_min_eigenvalue_corner_contraction():
    # I + chi + chi* for a corner-embedded contraction chi is positive
    rng = np.random.default_rng(13)
    X = linalg.random_contraction(2, rng)
    chi = np.zeros((4, 4), dtype=complex)
    chi[:2, 2:] = X
    P = np.eye(4) + chi + chi.conj().T
    val = linalg.min_eigenvalue_hermitian(P)
    assert val >= -1e-9
    oracle = hermitian_eigs_bisection(P)
    assert abs(val - oracle[0]) < 1e-9


def test_min_eigenvalue_rejects_non_hermitian():
    M = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        linalg.min_eigenvalue_hermitian(M)
