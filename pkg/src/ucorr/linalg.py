"""Dense complex linear algebra shared by every other module.

All matrices are numpy arrays of complex128.  The fixed index convention
for tensor products of matrix spaces: ``E_ij (x) E_kl`` sits at row
``(i-1)*m + k``, column ``(j-1)*m + l`` (1-based), i.e. ``numpy.kron``
ordering.  Vectors ``e_i (x) e_j`` in C^n (x) C^m sit at flat index
``(i-1)*m + (j-1)`` (0-based), so a bipartite vector reshapes to its
coefficient matrix with ``vec.reshape(n, m)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SCHMIDT_CUTOFF = 1e-12
HERMITIAN_TOL = 1e-10


class LinAlgFailure(RuntimeError):
    """An iterative factorization failed to converge; no partial result is returned."""


def as_matrix(M: np.ndarray) -> np.ndarray:
    """Coerce to a finite 2-D complex array, rejecting NaN/Inf entries."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={A.ndim}")
    if not np.isfinite(A).all():
        raise ValueError("matrix has non-finite entries")
    return A


def as_vector(v: np.ndarray) -> np.ndarray:
    A = np.asarray(v, dtype=complex).reshape(-1)
    if not np.isfinite(A).all():
        raise ValueError("vector has non-finite entries")
    return A


def svd(M: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full SVD with M = U @ diag(S) @ V.conj().T, S decreasing.

    Raises LinAlgFailure if the underlying iteration does not converge;
    never returns unconverged factors.
    """
    A = as_matrix(M)
    try:
        U, s, Vh = np.linalg.svd(A, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise LinAlgFailure(f"SVD did not converge: {exc}") from exc
    return U, s, Vh.conj().T


def singular_values(M: np.ndarray) -> np.ndarray:
    A = as_matrix(M)
    try:
        return np.linalg.svd(A, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise LinAlgFailure(f"SVD did not converge: {exc}") from exc


def operator_norm(M: np.ndarray) -> float:
    """Largest singular value."""
    s = singular_values(M)
    return float(s[0]) if s.size else 0.0


def kron(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Tensor product with entry (a*rows_B + c, b*cols_B + d) = A[a,b] * B[c,d]."""
    return np.kron(as_matrix(A), as_matrix(B))


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt data of a bipartite vector: alpha = sum_k d_k u_k (x) v_k.

    coefficients: strictly positive, decreasing.
    left_vectors / right_vectors: orthonormal rows (one vector per row).
    """

    coefficients: np.ndarray
    left_vectors: np.ndarray
    right_vectors: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.coefficients.size)

    def reconstruct(self) -> np.ndarray:
        """Flat vector sum_k d_k u_k (x) v_k."""
        terms = self.coefficients[:, None, None] * np.einsum(
            "ki,kj->kij", self.left_vectors, self.right_vectors
        )
        return terms.sum(axis=0).reshape(-1)


def schmidt(alpha: np.ndarray, n: int, m: int, cutoff: float = SCHMIDT_CUTOFF) -> SchmidtDecomposition:
    """Schmidt decomposition of alpha in C^n (x) C^m.

    Reshapes alpha to its n x m coefficient matrix, takes the SVD and keeps
    singular values above `cutoff`.  Rejects the zero vector.
    """
    v = as_vector(alpha)
    if v.size != n * m:
        raise ValueError(f"vector of length {v.size} cannot live in C^{n} (x) C^{m}")
    if np.linalg.norm(v) <= cutoff:
        raise ValueError("cannot decompose the zero vector")
    T = v.reshape(n, m)
    try:
        U, s, Vh = np.linalg.svd(T, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise LinAlgFailure(f"SVD did not converge: {exc}") from exc
    keep = s > cutoff
    # alpha_ij = sum_k s_k U[i,k] Vh[k,j]: right vectors are the rows of Vh.
    return SchmidtDecomposition(
        coefficients=s[keep].copy(),
        left_vectors=U[:, keep].T.copy(),
        right_vectors=Vh[keep, :].copy(),
    )


def min_eigenvalue_hermitian(M: np.ndarray, tol: float = HERMITIAN_TOL) -> float:
    """Smallest eigenvalue of a Hermitian matrix; rejects non-Hermitian input."""
    A = as_matrix(M)
    defect = float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0
    if defect > tol:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e} > {tol:.1e})")
    try:
        w = np.linalg.eigvalsh(A)
    except np.linalg.LinAlgError as exc:
        raise LinAlgFailure(f"eigendecomposition did not converge: {exc}") from exc
    return float(w[0])


def is_unitary(M: np.ndarray, tol: float = 1e-10) -> bool:
    A = as_matrix(M)
    if A.shape[0] != A.shape[1]:
        return False
    d = A.shape[0]
    return float(np.max(np.abs(A.conj().T @ A - np.eye(d)))) <= tol


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    Z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    Q, R = np.linalg.qr(Z)
    # fix the phase ambiguity so the distribution is exactly Haar
    ph = np.diag(R).copy()
    ph /= np.abs(ph)
    return Q * ph


def random_contraction(dim: int, rng: np.random.Generator, norm: float = 1.0) -> np.ndarray:
    """Random matrix with operator norm exactly `norm`, built by clipping singular values."""
    Z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    U, s, Vh = np.linalg.svd(Z)
    s = np.minimum(s, 1.0)
    s[0] = 1.0
    return (U * (norm * s)) @ Vh


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
