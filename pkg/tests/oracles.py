"""Independent oracles used by the test suite.

Everything here is deliberately written from scratch (inertia bisection,
power iteration, grid search, explicit permutation matrices) so that the
library paths under test are checked against arithmetic that shares no
code with them.
"""

from __future__ import annotations

import itertools

import numpy as np


def _negative_pivots(A: np.ndarray) -> int | None:
    """Count negative pivots of a Hermitian matrix via symmetric elimination.

    Returns None when a pivot is too small to trust (caller retries at a
    nudged shift).  By Sylvester's law the count equals the number of
    eigenvalues below the shift that produced A.
    """
    B = A.astype(complex).copy()
    d = B.shape[0]
    neg = 0
    for k in range(d):
        piv = B[k, k].real
        if abs(piv) < 1e-12:
            return None
        if piv < 0:
            neg += 1
        if k + 1 < d:
            col = B[k + 1 :, k]
            B[k + 1 :, k + 1 :] -= np.outer(col, col.conj()) / piv
    return neg


def _count_below(M: np.ndarray, x: float) -> int:
    shift = x
    for _ in range(60):
        count = _negative_pivots(M - shift * np.eye(M.shape[0]))
        if count is not None:
            return count
        shift += 1e-11 * max(1.0, abs(x))
    raise RuntimeError("bisection oracle could not find a usable pivot shift")


def hermitian_eigs_bisection(M: np.ndarray, tol: float = 1e-11) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix by bisection on the inertia count."""
    d = M.shape[0]
    radius = float(np.max(np.sum(np.abs(M), axis=1))) + 1.0
    eigs = []
    for k in range(1, d + 1):
        lo, hi = -radius, radius
        for _ in range(120):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if _count_below(M, mid) >= k:
                hi = mid
            else:
                lo = mid
            if hi - lo <= tol:
                break
        eigs.append(0.5 * (lo + hi))
    return np.array(eigs)


def singular_values_bisection(M: np.ndarray) -> np.ndarray:
    """Singular values as square roots of the Gram-matrix eigenvalues, decreasing."""
    G = M.conj().T @ M
    eigs = hermitian_eigs_bisection(G, tol=1e-13)
    return np.sqrt(np.maximum(eigs, 0.0))[::-1]


def power_iteration_norm(M: np.ndarray, seed: int = 0, iters: int = 20000, tol: float = 1e-14) -> float:
    """Operator norm from power iteration on the Gram matrix."""
    rng = np.random.default_rng(seed)
    G = M.conj().T @ M
    v = rng.standard_normal(G.shape[0]) + 1j * rng.standard_normal(G.shape[0])
    v /= np.linalg.norm(v)
    prev = 0.0
    for _ in range(iters):
        w = G @ v
        lam = float(np.real(np.vdot(v, w)))
        nrm = np.linalg.norm(w)
        if nrm == 0.0:
            return 0.0
        v = w / nrm
        if abs(lam - prev) <= tol * max(1.0, lam):
            break
        prev = lam
    return float(np.sqrt(max(lam, 0.0)))


def _sphere_grid(steps_polar: int, steps_phase: int) -> np.ndarray:
    """Unit vectors in C^2, covering the sphere modulo global phase."""
    ts = np.linspace(0.0, np.pi / 2, steps_polar)
    phis = np.linspace(0.0, 2 * np.pi, steps_phase, endpoint=False)
    T, P = np.meshgrid(ts, phis, indexing="ij")
    out = np.stack([np.cos(T), np.sin(T) * np.exp(1j * P)], axis=-1)
    return out.reshape(-1, 2)


def grid_injective_lower(X: np.ndarray, steps_polar: int = 100, steps_phase: int = 100) -> float:
    """Exhaustive grid search for the injective norm at n = m = 2.

    Grids the two input spheres (10^4 points each by default); for each
    input pair the optimal output pair is the exact top singular pair of
    the contracted 2 x 2 matrix, whose largest singular value has a closed
    form.  The inner product-vector sweep is a single matrix product per
    chunk, so the full 10^8-pair search stays fast.
    """
    # single precision is ample for a 1e-2-resolution search and halves the sweep time
    A = _sphere_grid(steps_polar, steps_phase).astype(np.complex64)
    C = _sphere_grid(steps_polar, steps_phase)
    X4 = X.reshape(2, 2, 2, 2)
    # contract the second input once: Y[q, i, k, j] = sum_l X4[i,k,j,l] C[q,l]
    Y = np.einsum("ikjl,ql->qikj", X4, C).astype(np.complex64)
    best = 0.0
    chunk = 256
    for start in range(0, Y.shape[0], chunk):
        Z = Y[start : start + chunk].transpose(3, 0, 1, 2).reshape(2, -1)
        W = (A @ Z).reshape(A.shape[0], -1, 2, 2)
        fro2 = np.abs(W[..., 0, 0]) ** 2 + np.abs(W[..., 0, 1]) ** 2 + np.abs(W[..., 1, 0]) ** 2 + np.abs(W[..., 1, 1]) ** 2
        det = W[..., 0, 0] * W[..., 1, 1] - W[..., 0, 1] * W[..., 1, 0]
        disc = np.sqrt(np.maximum(fro2 * fro2 - 4.0 * np.abs(det) ** 2, 0.0))
        smax2 = (fro2 + disc) / 2.0
        best = max(best, float(smax2.max()))
    return float(np.sqrt(best))


def sampled_bilinear_lower(alpha: np.ndarray, n: int, m: int, count: int = 10000, seed: int = 0) -> float:
    """Best value of |form(alpha)| over random contractive bilinear forms.

    Each form x, y -> x^T C y has norm equal to the top singular value of
    C, so C is normalized by it; the supremum over all contractive forms
    is the projective norm of alpha, hence the sampled maximum is a lower
    bound on it.
    """
    rng = np.random.default_rng(seed)
    T = alpha.reshape(n, m)
    best = 0.0
    for _ in range(count):
        C = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        C /= np.linalg.svd(C, compute_uv=False)[0]
        best = max(best, float(abs(np.sum(T * C))))
    return best


def chsh_value(p: np.ndarray) -> float:
    """The standard two-input two-output correlation functional of a box array."""
    E = np.zeros((2, 2))
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    E[x, y] += (1.0 if a == b else -1.0) * p[a, b, x, y]
    return E[0, 0] + E[0, 1] + E[1, 0] - E[1, 1]


def cyclic_shift_matrix(local_dim: int, registers: int) -> np.ndarray:
    """Explicit permutation matrix sending x_0 (x) ... (x) x_r to x_r (x) x_0 (x) ... (x) x_{r-1}."""
    dim = local_dim**registers
    U = np.zeros((dim, dim))
    for idx in range(dim):
        digits = []
        rem = idx
        for _ in range(registers):
            digits.append(rem % local_dim)
            rem //= local_dim
        digits.reverse()  # digits[0] is the leftmost register
        shifted = [digits[-1]] + digits[:-1]
        out = 0
        for dgt in shifted:
            out = out * local_dim + dgt
        U[out, idx] = 1.0
    return U


def matrix_dense_generator_block(proto, right_factor: np.ndarray | None = None) -> np.ndarray:
    """Generator-pair correlation via explicit block matrices; test-side oracle.

    Builds the full shift permutation matrices, slices out the blocks
    U_ij and V_kl, optionally replaces U by its right product with a
    scalar unitary factor (U_ij -> sum_p U_ip factor[p, j]), and contracts
    against the product resource state.  Returns the nm x nm matrix with
    the library's row/column layout, including the phase unwinding.
    """
    n, m, r = proto.n, proto.m, proto.r
    zbar = np.conj(proto.target.z)
    U = cyclic_shift_matrix(n, r + 1)
    V = cyclic_shift_matrix(m, r + 1)
    dA, dB = n**r, m**r

    Hs = [proto.interpolant_matrix(t) for t in range(r + 1)]
    psi = np.zeros((dA, dB), dtype=complex)
    for a_digits in itertools.product(range(n), repeat=r):
        ai = 0
        for dgt in a_digits:
            ai = ai * n + dgt
        for b_digits in itertools.product(range(m), repeat=r):
            bi = 0
            for dgt in b_digits:
                bi = bi * m + dgt
            val = 1.0 + 0.0j
            for t in range(r):
                val *= Hs[t + 1][a_digits[t], b_digits[t]]
            psi[ai, bi] = val
    psi_vec = psi.reshape(-1)

    def block(W: np.ndarray, d: int, i: int, j: int) -> np.ndarray:
        return W[i * d : (i + 1) * d, j * d : (j + 1) * d]

    X = np.zeros((n * m, n * m), dtype=complex)
    for i in range(n):
        for j in range(n):
            if right_factor is None:
                Uij = block(U, dA, i, j)
            else:
                Uij = sum(block(U, dA, i, p) * right_factor[p, j] for p in range(n))
            for k in range(m):
                for l in range(m):
                    Vkl = block(V, dB, k, l)
                    op = np.kron(Uij, Vkl)
                    # <Op psi, psi> with the inner product linear in its first slot
                    val = np.vdot(psi_vec, op @ psi_vec)
                    X[i * m + k, j * m + l] = zbar * val
    return X
