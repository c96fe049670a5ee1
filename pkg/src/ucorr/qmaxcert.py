"""Constructive membership certificates for the operator-norm correlation ball.

Any nm x nm matrix X with operator norm at most 1 is realized by a state
whose generator-pair coordinates are exactly the entries of X.  The
certificate materializes that construction: embed the coefficients of X
into the corner block

    chi = sum_{ijkl} x_ijkl E_12 (x) E_ij (x) E_12 (x) E_kl

of M_2 (x) M_n (x) M_2 (x) M_m, form P = I + chi + chi*, and check three
facts that are jointly equivalent to validity:

* P is positive semidefinite (holds iff ||X|| <= 1; the block
  anti-diagonal structure makes the smallest eigenvalue exactly
  1 - ||X||),
* the entrywise pairing gamma_P(C) = sum_uv P_uv C_uv annihilates the
  kernel of the quotient map onto the generator span, tensored against
  everything on the other side,
* gamma_P recovers every coefficient: gamma_P(E_12 (x) E_ij (x) E_12
  (x) E_kl) = x_ijkl.

The quotient-map data itself (coefficient table on matrix units of M_2n
and an explicit kernel basis) is exposed for independent checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg


def quotient_coefficient(n: int, i: int, j: int):
    """Image of the matrix unit E_ij of M_2n under the quotient map, 1-based.

    Returns (symbol, weight) where symbol is "1", ("u", a, b) or
    ("u*", a, b); weight is 1/(2n), or (None, 0.0) when the unit is killed.
    """
    if not (1 <= i <= 2 * n and 1 <= j <= 2 * n):
        raise ValueError(f"matrix unit ({i},{j}) out of range for size {2 * n}")
    w = 1.0 / (2 * n)
    if i == j:
        return "1", w
    if i <= n < j:
        return ("u", i, j - n), w
    if j <= n < i:
        return ("u*", j, i - n), w
    return None, 0.0


@dataclass
class QuotientMapRep:
    """Concrete data of the quotient map M_2n -> span{1, u_ab, u_ab*}.

    coefficient_matrix has one row per matrix unit E_ij (row-major) and one
    column per basis element of the image, ordered unit first, then the
    generators row-major, then the adjoints row-major.
    kernel_basis spans the kernel: trace-balancing diagonal differences
    plus every off-diagonal unit inside the two diagonal blocks.
    """

    n: int
    coefficient_matrix: np.ndarray
    kernel_basis: list[np.ndarray]

    @property
    def image_dimension(self) -> int:
        return 2 * self.n * self.n + 1

    def kernel_dimension(self) -> int:
        return (2 * self.n) ** 2 - self.image_dimension


def build_quotient_rep(n: int) -> QuotientMapRep:
    if n < 2:
        raise ValueError("quotient data needs n >= 2")
    d = 2 * n
    dim_img = 2 * n * n + 1

    def column(symbol) -> int:
        if symbol == "1":
            return 0
        kind, a, b = symbol
        base = 1 if kind == "u" else 1 + n * n
        return base + (a - 1) * n + (b - 1)

    C = np.zeros((d * d, dim_img))
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            symbol, w = quotient_coefficient(n, i, j)
            if symbol is not None:
                C[(i - 1) * d + (j - 1), column(symbol)] = w

    basis: list[np.ndarray] = []
    for i in range(d - 1):
        K = np.zeros((d, d), dtype=complex)
        K[i, i] = 1.0
        K[i + 1, i + 1] = -1.0
        basis.append(K)
    for block in (0, n):
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                K = np.zeros((d, d), dtype=complex)
                K[block + i, block + j] = 1.0
                basis.append(K)
    return QuotientMapRep(n=n, coefficient_matrix=C, kernel_basis=basis)


@dataclass
class QmaxCertificate:
    X: np.ndarray
    n: int
    m: int
    chi: np.ndarray
    P: np.ndarray
    min_eig: float
    kernel_residual: float
    recovery_residual: float

    @property
    def valid(self) -> bool:
        return self.min_eig >= -1e-9 and self.kernel_residual <= 1e-10 and self.recovery_residual <= 1e-10


def _corner_embedding(X: np.ndarray, n: int, m: int) -> np.ndarray:
    """chi in M_2 (x) M_n (x) M_2 (x) M_m with the coefficients of X in its corner."""
    X4 = X.reshape(n, m, n, m)  # rows (i, k), cols (j, l)
    dim = 4 * n * m
    chi = np.zeros((dim, dim), dtype=complex)
    chi8 = chi.reshape(2, n, 2, m, 2, n, 2, m)
    chi8[0, :, 0, :, 1, :, 1, :] = X4
    return chi


def _pairing_with_left_kernel(P8: np.ndarray, kernel_basis) -> float:
    """max |gamma_P(K (x) E_uv)| over kernel elements K and all matrix units E_uv."""
    worst = 0.0
    for K in kernel_basis:
        d = K.shape[0]
        K4 = K.reshape(2, d // 2, 2, d // 2)
        G = np.einsum("abcdefgh,abef->cdgh", P8, K4)
        worst = max(worst, float(np.max(np.abs(G))))
    return worst


def _pairing_with_right_kernel(P8: np.ndarray, kernel_basis) -> float:
    worst = 0.0
    for K in kernel_basis:
        d = K.shape[0]
        K4 = K.reshape(2, d // 2, 2, d // 2)
        G = np.einsum("abcdefgh,cdgh->abef", P8, K4)
        worst = max(worst, float(np.max(np.abs(G))))
    return worst


def certify(X: np.ndarray, n: int, m: int) -> QmaxCertificate:
    """Build the positivity certificate for X; residuals report its validity.

    Works for any X.  When ||X|| <= 1 the certificate is clean: min_eig is
    (up to eigensolver error) max(1 - ||X||, ...) >= 0 and both residuals
    vanish.  When ||X|| > 1 the smallest eigenvalue is exactly 1 - ||X||,
    so the failure is sharp.
    """
    A = linalg.as_matrix(X)
    if A.shape != (n * m, n * m):
        raise ValueError(f"matrix must be {n * m} x {n * m} for the declared split")
    chi = _corner_embedding(A, n, m)
    dim = 4 * n * m
    P = np.eye(dim, dtype=complex) + chi + chi.conj().T
    min_eig = linalg.min_eigenvalue_hermitian(P)

    P8 = P.reshape(2, n, 2, m, 2, n, 2, m)
    rep_n = build_quotient_rep(n)
    rep_m = build_quotient_rep(m)
    kernel_residual = max(
        _pairing_with_left_kernel(P8, rep_n.kernel_basis),
        _pairing_with_right_kernel(P8, rep_m.kernel_basis),
    )

    recovered = P8[0, :, 0, :, 1, :, 1, :]
    recovery_residual = float(np.max(np.abs(recovered - A.reshape(n, m, n, m))))

    return QmaxCertificate(
        X=A,
        n=n,
        m=m,
        chi=chi,
        P=P,
        min_eig=min_eig,
        kernel_residual=kernel_residual,
        recovery_residual=recovery_residual,
    )


def kernel_annihilation_check(cert: QmaxCertificate, rep_n: QuotientMapRep, rep_m: QuotientMapRep) -> float:
    """Re-evaluate the pairing on kernel (x) units and units (x) kernel; max modulus."""
    if rep_n.n != cert.n or rep_m.n != cert.m:
        raise ValueError("quotient data dimensions do not match the certificate")
    P8 = cert.P.reshape(2, cert.n, 2, cert.m, 2, cert.n, 2, cert.m)
    return max(
        _pairing_with_left_kernel(P8, rep_n.kernel_basis),
        _pairing_with_right_kernel(P8, rep_m.kernel_basis),
    )


def pairing(P: np.ndarray, C: np.ndarray) -> complex:
    """The entrywise (unconjugated) pairing gamma_P(C) = sum_uv P_uv C_uv."""
    return complex(np.sum(P * C))
