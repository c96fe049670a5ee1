"""Finite-dimensional embezzlement protocols and their correlations.

A protocol for a unit target vector alpha in C^n (x) C^m carries a chain of
unit interpolants h_0, ..., h_r that rotates in r equal angular steps from
the anchor e_1 (x) e_1 to a phase-normalized copy of the target.  The
resource state is the product h_1 (x) ... (x) h_r, and both parties act by
cyclically shifting their registers one slot to the right.  Every
correlation coordinate is an inner product of the shifted product state
against the original one, so each coordinate reduces to a chain of small
matrix contractions.  This module provides that closed form, an
independent dense oracle that materializes the shift operators, the
r -> infinity limit matrix, and the non-uniqueness construction for
targets of deficient Schmidt rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg
from .correlation import (
    CorrelationMatrix,
    FullCorrelation,
    adj_index,
    gen_index,
    side_size,
    unit_index,
)

DEGENERATE_SIN = 1e-9
DENSE_CAP = 2**20


@dataclass(frozen=True)
class TargetVector:
    """A unit vector alpha in C^n (x) C^m with its phase normalization.

    z is the unimodular scalar making z * alpha_11 real and nonnegative
    (z = 1 when alpha_11 = 0), and theta = arccos(z * alpha_11) is the
    angle between the anchor e_1 (x) e_1 and z * alpha.
    """

    n: int
    m: int
    alpha: np.ndarray
    z: complex
    theta: float


def make_target(alpha: np.ndarray, n: int, m: int, tol: float = 1e-10) -> TargetVector:
    v = linalg.as_vector(alpha)
    if v.size != n * m:
        raise ValueError(f"vector of length {v.size} does not live in C^{n} (x) C^{m}")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > tol:
        raise ValueError(f"target must be a unit vector (norm {nrm:.12g})")
    a11 = complex(v[0])
    z = complex(np.conj(a11) / abs(a11)) if abs(a11) > 0 else 1.0 + 0.0j
    cos_theta = float(np.real(z * a11))
    cos_theta = min(1.0, max(0.0, cos_theta))
    theta = math.acos(cos_theta)
    return TargetVector(n=n, m=m, alpha=v.copy(), z=z, theta=theta)


@dataclass(frozen=True)
class EmbezzlementProtocol:
    """Interpolant chain data for a target at step count r.

    Interpolants are never stored as a list; h_j = cos(j theta / r) h_0 +
    sin(j theta / r) g with g the unit complement of h_0 toward the
    phase-normalized target (g = 0 in the degenerate theta = 0 case, where
    every h_j equals h_0).  Consecutive interpolants overlap in exactly
    cos(theta / r).
    """

    target: TargetVector
    r: int
    cos_step: float
    _g: np.ndarray

    @property
    def n(self) -> int:
        return self.target.n

    @property
    def m(self) -> int:
        return self.target.m

    def interpolant(self, j: int) -> np.ndarray:
        """Unit vector h_j, 0 <= j <= r (flat, length n*m)."""
        if not 0 <= j <= self.r:
            raise ValueError(f"interpolant index {j} outside 0..{self.r}")
        ang = j * self.target.theta / self.r
        h = math.cos(ang) * _anchor(self.n, self.m) + math.sin(ang) * self._g
        return h

    @property
    def interpolants(self) -> list[np.ndarray]:
        """The full chain h_0, ..., h_r (materialized; meant for small r)."""
        return [self.interpolant(j) for j in range(self.r + 1)]

    def interpolant_matrix(self, j: int) -> np.ndarray:
        """h_j reshaped to its n x m coefficient matrix."""
        return self.interpolant(j).reshape(self.n, self.m)


def _anchor(n: int, m: int) -> np.ndarray:
    h0 = np.zeros(n * m, dtype=complex)
    h0[0] = 1.0
    return h0


def build_protocol(alpha: np.ndarray, r: int, n: int | None = None, m: int | None = None) -> EmbezzlementProtocol:
    """Construct the r-step protocol for a unit target vector.

    `alpha` may be a TargetVector or a flat vector (then n, m are required).
    Degenerate targets (sin theta <= 1e-9, i.e. alpha = e_1 (x) e_1 up to
    phase) collapse to the constant chain h_j = h_0 with theta = 0.
    """
    if r < 1:
        raise ValueError("step count r must be >= 1")
    if isinstance(alpha, TargetVector):
        tgt = alpha
    else:
        if n is None or m is None:
            raise ValueError("n and m are required when alpha is a raw vector")
        tgt = make_target(alpha, n, m)
    h0 = _anchor(tgt.n, tgt.m)
    hr = tgt.z * tgt.alpha
    sin_theta = math.sin(tgt.theta)
    if sin_theta <= DEGENERATE_SIN:
        tgt = TargetVector(n=tgt.n, m=tgt.m, alpha=tgt.alpha, z=tgt.z, theta=0.0)
        g = np.zeros_like(h0)
    else:
        g = (hr - math.cos(tgt.theta) * h0) / sin_theta
    return EmbezzlementProtocol(target=tgt, r=r, cos_step=math.cos(tgt.theta / r), _g=g)


def overlap(proto: EmbezzlementProtocol) -> float:
    """Overlap cos(theta/r)^r between the shifted and original resource states."""
    return 1.0 - overlap_deficit(proto)


def overlap_deficit(proto: EmbezzlementProtocol) -> float:
    """1 - cos(theta/r)^r, evaluated in the log domain so it never rounds to 0.

    Strictly positive for every finite r whenever theta > 0.
    """
    if proto.target.theta == 0.0:
        return 0.0
    c = math.cos(proto.target.theta / proto.r)
    if c <= 0.0:
        return 1.0
    return -math.expm1(proto.r * math.log(c))


def _chain_factor(proto: EmbezzlementProtocol) -> float:
    """Product of the r-1 consecutive interpolant overlaps, cos(theta/r)^(r-1)."""
    if proto.r == 1 or proto.target.theta == 0.0:
        return 1.0
    c = proto.cos_step
    if c <= 0.0:
        return 0.0
    return math.exp((proto.r - 1) * math.log(c))


def _transfer_products(proto: EmbezzlementProtocol) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """One pass over the chain, accumulating the transfer-matrix products.

    With H_t the coefficient matrix of h_t and M_t = H_t^T conj(H_{t+1}),
    N_t = H_t^dag H_t (both m x m), returns

      prod_all  = M_1 M_2 ... M_{r-1}
      prod_odd  = product of M_t over odd t, increasing
      prod_even = product of M_t over even t, increasing
      prod_n    = N_1 N_2 ... N_r
    """
    m = proto.m
    eye = np.eye(m, dtype=complex)
    prod_all = eye.copy()
    prod_odd = eye.copy()
    prod_even = eye.copy()
    Ht = proto.interpolant_matrix(1)
    prod_n = Ht.conj().T @ Ht
    for t in range(1, proto.r):
        Hnext = proto.interpolant_matrix(t + 1)
        Mt = Ht.T @ Hnext.conj()
        prod_all = prod_all @ Mt
        if t % 2 == 1:
            prod_odd = prod_odd @ Mt
        else:
            prod_even = prod_even @ Mt
        prod_n = prod_n @ (Hnext.conj().T @ Hnext)
        Ht = Hnext
    return prod_all, prod_odd, prod_even, prod_n


def closed_form_correlation(proto: EmbezzlementProtocol) -> FullCorrelation:
    """Every coordinate of the protocol state, in closed form.

    The generator-pair block is the scalar product
    H_r[i,k] * conj(H_1[j,l]) * cos(theta/r)^(r-1); the marginal and mixed
    adjoint blocks are chains of m x m transfer matrices obtained by
    contracting the shifted product state against the original register by
    register.  The inherited phase is unwound (each plain left generator
    carries conj(z), each left adjoint carries z) so that the (i,1),(j,1)
    coordinates converge to alpha_ij itself.
    """
    n, m, r = proto.n, proto.m, proto.r
    zbar = np.conj(proto.target.z)
    H1 = proto.interpolant_matrix(1)
    Hr = proto.interpolant_matrix(r)
    cf = _chain_factor(proto)

    coords = np.zeros((side_size(n), side_size(m)), dtype=complex)
    coords[unit_index(), unit_index()] = 1.0

    # generator-pair block, value[i,j,k,l]
    uv = zbar * cf * np.einsum("ik,jl->ijkl", Hr, H1.conj())

    prod_all, prod_odd, prod_even, prod_n = _transfer_products(proto)

    # left marginal: value[j, i] = (conj(H_1) prod_all H_r^T)[j, i]
    u1 = zbar * (H1.conj() @ prod_all @ Hr.T)

    # right marginal: value[l, k] = (N_1 ... N_r)[l, k]
    v1 = prod_n

    # mixed block (u_ij, v_kl*): the shifted contraction splits into two
    # alternating chains whose endpoints depend on the parity of r.
    if r % 2 == 0:
        left = H1.conj() @ prod_even @ Hr.T  # [j, i]
        right = prod_odd                     # [l, k]
        uvstar = zbar * np.einsum("ji,lk->ijkl", left, right)
    else:
        left = prod_odd @ Hr.T               # [l, i]
        right = H1.conj() @ prod_even        # [j, k]
        uvstar = zbar * np.einsum("li,jk->ijkl", left, right)

    for i in range(1, n + 1):
        for j in range(1, n + 1):
            ui = gen_index(n, i, j)
            us = adj_index(n, i, j)
            coords[ui, unit_index()] = u1[j - 1, i - 1]
            coords[us, unit_index()] = np.conj(u1[j - 1, i - 1])
            for k in range(1, m + 1):
                for l in range(1, m + 1):
                    vk = gen_index(m, k, l)
                    vs = adj_index(m, k, l)
                    val = uv[i - 1, j - 1, k - 1, l - 1]
                    mixed = uvstar[i - 1, j - 1, k - 1, l - 1]
                    coords[ui, vk] = val
                    coords[us, vs] = np.conj(val)
                    coords[ui, vs] = mixed
                    coords[us, vk] = np.conj(mixed)
    for k in range(1, m + 1):
        for l in range(1, m + 1):
            coords[unit_index(), gen_index(m, k, l)] = v1[l - 1, k - 1]
            coords[unit_index(), adj_index(m, k, l)] = np.conj(v1[l - 1, k - 1])

    return FullCorrelation(n=n, m=m, coords=coords, claimed_class="qa_approx")


def compressed_correlation(proto: EmbezzlementProtocol) -> CorrelationMatrix:
    """The generator-pair block alone, skipping the transfer chains.

    Equals compress(closed_form_correlation(proto)) but costs O(n^2 m^2)
    regardless of r, which keeps large-r convergence sweeps cheap.
    """
    n, m = proto.n, proto.m
    zbar = np.conj(proto.target.z)
    H1 = proto.interpolant_matrix(1)
    Hr = proto.interpolant_matrix(proto.r)
    uv = zbar * _chain_factor(proto) * np.einsum("ik,jl->ijkl", Hr, H1.conj())
    X = uv.transpose(0, 2, 1, 3).reshape(n * m, n * m)
    return CorrelationMatrix(n=n, m=m, X=X, claimed_class="qa_approx")


def dense_correlation(proto: EmbezzlementProtocol, cap: int = DENSE_CAP) -> FullCorrelation:
    """Dense oracle: materialize the resource state and the shift operators.

    Builds the product state on the full (r+1)-register space, applies the
    cyclic register shifts as explicit axis permutations, and evaluates
    every coordinate by direct contraction.  Exponential in r; guarded by
    a dimension cap on (n*m)^(r+1).
    """
    n, m, r = proto.n, proto.m, proto.r
    dim = (n * m) ** (r + 1)
    if dim > cap:
        raise ValueError(
            f"dense evaluation needs (n*m)^(r+1) = {dim} amplitudes, over the cap {cap}; "
            "raise the cap explicitly or reduce r"
        )
    z = proto.target.z
    zbar = np.conj(z)

    Hs = [proto.interpolant_matrix(t) for t in range(r + 1)]
    psi = np.ones((), dtype=complex)
    for t in range(1, r + 1):
        psi = np.multiply.outer(psi, Hs[t])
    # axes currently (a_1, b_1, ..., a_r, b_r); regroup to (a_1..a_r, b_1..b_r)
    psi = np.transpose(psi, list(range(0, 2 * r, 2)) + list(range(1, 2 * r, 2)))
    psi_conj = psi.conj()

    # tensor axes of the full space: [A_0, A_1..A_r, B_1..B_r, B_0]
    a_regs = [0] + list(range(1, r + 1))
    b_regs = [2 * r + 1] + list(range(r + 1, 2 * r + 1))
    middle_axes = list(range(1, 2 * r + 1))

    def embed(p: int, q: int) -> np.ndarray:
        T = np.zeros((n,) + psi.shape + (m,), dtype=complex)
        T[(p,) + (slice(None),) * (2 * r) + (q,)] = psi
        return T

    def shift(T: np.ndarray, regs: list[int], direction: str) -> np.ndarray:
        k = len(regs)
        perm = list(range(T.ndim))
        for pos in range(k):
            src = regs[(pos - 1) % k] if direction == "right" else regs[(pos + 1) % k]
            perm[regs[pos]] = src
        return np.transpose(T, perm)

    def boundary(a_dir: str | None, b_dir: str | None, p: int, q: int) -> np.ndarray:
        """<(shifted embed(p, q)), e_a (x) psi (x) e_b> as an (n, m) array over (a, b)."""
        T = embed(p, q)
        if a_dir is not None:
            T = shift(T, a_regs, a_dir)
        if b_dir is not None:
            T = shift(T, b_regs, b_dir)
        return np.tensordot(T, psi_conj, axes=(middle_axes, list(range(2 * r))))

    coords = np.zeros((side_size(n), side_size(m)), dtype=complex)
    coords[unit_index(), unit_index()] = complex(boundary(None, None, 0, 0)[0, 0])

    # left marginals
    for j in range(n):
        R = boundary("right", None, j, 0)
        for i in range(n):
            coords[gen_index(n, i + 1, j + 1), unit_index()] = zbar * R[i, 0]
    for i in range(n):
        R = boundary("left", None, i, 0)
        for j in range(n):
            coords[adj_index(n, i + 1, j + 1), unit_index()] = z * R[j, 0]

    # right marginals
    for l in range(m):
        R = boundary(None, "right", 0, l)
        for k in range(m):
            coords[unit_index(), gen_index(m, k + 1, l + 1)] = R[0, k]
    for k in range(m):
        R = boundary(None, "left", 0, k)
        for l in range(m):
            coords[unit_index(), adj_index(m, k + 1, l + 1)] = R[0, l]

    # generator pairs and mixed adjoints
    for j in range(n):
        for l in range(m):
            R = boundary("right", "right", j, l)
            for i in range(n):
                for k in range(m):
                    coords[gen_index(n, i + 1, j + 1), gen_index(m, k + 1, l + 1)] = zbar * R[i, k]
    for i in range(n):
        for k in range(m):
            R = boundary("left", "left", i, k)
            for j in range(n):
                for l in range(m):
                    coords[adj_index(n, i + 1, j + 1), adj_index(m, k + 1, l + 1)] = z * R[j, l]
    for j in range(n):
        for k in range(m):
            R = boundary("right", "left", j, k)
            for i in range(n):
                for l in range(m):
                    coords[gen_index(n, i + 1, j + 1), adj_index(m, k + 1, l + 1)] = zbar * R[i, l]
    for i in range(n):
        for l in range(m):
            R = boundary("left", "right", i, l)
            for j in range(n):
                for k in range(m):
                    coords[adj_index(n, i + 1, j + 1), gen_index(m, k + 1, l + 1)] = z * R[j, k]

    return FullCorrelation(n=n, m=m, coords=coords, claimed_class="qa_approx")


def limit_correlation(alpha: np.ndarray, n: int, m: int) -> CorrelationMatrix:
    """The r -> infinity correlation: alpha in the (j,l) = (1,1) column, zero elsewhere."""
    tgt = alpha if isinstance(alpha, TargetVector) else make_target(alpha, n, m)
    d = tgt.n * tgt.m
    X = np.zeros((d, d), dtype=complex)
    X[:, 0] = tgt.alpha
    return CorrelationMatrix(n=tgt.n, m=tgt.m, X=X, claimed_class="qc_limit")


def alternate_correlation(alpha: np.ndarray, n: int, m: int, r: int) -> CorrelationMatrix:
    """A second protocol correlation for targets of deficient Schmidt rank.

    Runs the p x p protocol for the diagonal Schmidt form of alpha
    (p = Schmidt rank < min(n, m)), extends both block unitaries by the
    identity to sizes n and m, and rotates back with the Schmidt-basis
    unitaries.  In the r -> infinity limit this correlation keeps nonzero
    diagonal entries outside the first column, so it differs from
    limit_correlation(alpha).  Maximally entangled targets are rejected:
    no second correlation exists for them.
    """
    tgt = alpha if isinstance(alpha, TargetVector) else make_target(alpha, n, m)
    n, m = tgt.n, tgt.m
    sd = linalg.schmidt(tgt.alpha, n, m)
    p = sd.rank
    if p >= min(n, m):
        raise ValueError(
            "target is maximally entangled: its limit correlation is unique, no alternate exists"
        )

    # full correlation of the p x p protocol for the diagonal target
    d = sd.coefficients
    if p == 1:
        # one-dimensional blocks: the shift is the identity, every coordinate is 1
        sub = np.ones((3, 3), dtype=complex)
        sub_n = sub_m = 1
    else:
        beta = np.zeros(p * p, dtype=complex)
        beta[:: p + 1] = d
        sub_proto = build_protocol(beta, r, p, p)
        sub = closed_form_correlation(sub_proto).coords
        sub_n = sub_m = p

    # extend by identity blocks
    X = np.zeros((n * m, n * m), dtype=complex)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, m + 1):
                for l in range(1, m + 1):
                    if i <= p and j <= p and k <= p and l <= p:
                        val = sub[gen_index(sub_n, i, j), gen_index(sub_m, k, l)]
                    elif i <= p and j <= p and k == l and k > p:
                        val = sub[gen_index(sub_n, i, j), unit_index()]
                    elif i == j and i > p and k <= p and l <= p:
                        val = sub[unit_index(), gen_index(sub_m, k, l)]
                    elif i == j and i > p and k == l and k > p:
                        val = 1.0
                    else:
                        continue
                    X[(i - 1) * m + (k - 1), (j - 1) * m + (l - 1)] = val

    # rotate the Schmidt basis back onto the target
    T = tgt.alpha.reshape(n, m)
    U, _, Vh = np.linalg.svd(T, full_matrices=True)
    A = U            # A e_i = i-th left Schmidt vector
    B = Vh.T         # B e_i = i-th right Schmidt vector
    X = linalg.kron(A, B) @ X
    return CorrelationMatrix(n=n, m=m, X=X, claimed_class="qa_approx")
