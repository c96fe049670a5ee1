"""Certified bounds for the cross norms induced by the correlation sets.

Three norms on M_n (x) M_m (factors carrying the operator norm):

* injective -- sup of |(phi (x) psi)(X)| over contractive functionals;
  extreme contractive functionals on a matrix space are the vector states
  A -> <A a, b>, so the value is sup |<X (a (x) c), b (x) d>| over unit
  vectors.  Lower-bounded by alternating maximization, upper-bounded by
  the operator norm.
* operator -- the largest singular value, computed exactly.
* projective -- inf of sum ||A_t|| ||B_t|| over decompositions
  X = sum A_t (x) B_t.  Upper bound from the operator-Schmidt
  decomposition plus a local perturbation search; lower bound from a
  library of explicitly contractive bilinear forms.  Reported as an
  interval, never a point value.

On C^n (x) C^m (Euclidean factors) the projective norm is computed
exactly: it equals the trace norm of the coefficient matrix.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .correlation import CorrelationMatrix

DEFAULT_RESTARTS = 32
ALT_TOL = 1e-12
ALT_MAX_SWEEPS = 500
ORDERING_TOL = 1e-8

THREADS_ENV = "UCORR_THREADS"


def worker_count() -> int:
    """Worker cap from the UCORR_THREADS environment variable (default 1)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@dataclass
class NormBound:
    """A certified interval [lower, upper] for a norm, with checkable witnesses."""

    kind: str
    lower: float
    upper: float
    lower_witness: dict = field(default_factory=dict)
    upper_witness: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.lower > self.upper + 1e-9:
            raise ValueError(f"invalid bound: lower {self.lower} > upper {self.upper}")


def evaluate_lower_witness(X: np.ndarray, witness: dict, n: int, m: int) -> float:
    """Re-evaluate a lower-bound witness on its object; must reproduce `lower`."""
    kind = witness["type"]
    if kind == "product_functional":
        X4 = linalg.as_matrix(X).reshape(n, m, n, m)
        a, b = witness["a"], witness["b"]
        c, d = witness["c"], witness["d"]
        val = np.einsum("ikjl,j,l,i,k->", X4, a, c, np.conj(b), np.conj(d))
        return float(abs(val))
    if kind == "schmidt_bilinear_form":
        T = linalg.as_vector(X).reshape(n, m)
        return _bilinear_form_value(T, witness)
    if kind == "first_column_bilinear_form":
        C = linalg.as_matrix(X)[:, 0].reshape(n, m)
        return _bilinear_form_value(C, witness)
    if kind == "singular_pair":
        A = linalg.as_matrix(X)
        return float(abs(np.vdot(witness["left"], A @ witness["right"])))
    raise ValueError(f"unknown witness type {kind!r}")


def _bilinear_form_value(T: np.ndarray, witness: dict) -> float:
    left = np.asarray(witness["left"])
    right = np.asarray(witness["right"])
    val = sum(np.conj(u) @ T @ np.conj(v) for u, v in zip(left, right))
    return float(abs(val))


def _product_state_value(X4: np.ndarray, a, b, c, d) -> float:
    return float(abs(np.einsum("ikjl,j,l,i,k->", X4, a, c, np.conj(b), np.conj(d))))


def _alternate_once(X4: np.ndarray, a: np.ndarray, c: np.ndarray, tol: float, max_sweeps: int):
    """Alternating maximization of |<X (a x c), b x d>| from a given (a, c) start.

    Each half-step fixes one side and lifts the other to the top singular
    pair of the contracted n x m matrix, so the value is nondecreasing.
    """
    b = d = None
    prev = -1.0
    val = 0.0
    for _ in range(max_sweeps):
        W = np.einsum("ikjl,j,l->ik", X4, a, c)
        u, s, vh = np.linalg.svd(W)
        b, d = u[:, 0], vh[0]
        Y = np.einsum("ikjl,i,k->jl", X4, np.conj(b), np.conj(d))
        u, s, vh = np.linalg.svd(Y)
        a, c = u[:, 0].conj(), vh[0].conj()
        val = float(s[0])
        if abs(val - prev) <= tol * max(1.0, val):
            break
        prev = val
    # one final lift so the witness quadruple is self-consistent
    W = np.einsum("ikjl,j,l->ik", X4, a, c)
    u, s, vh = np.linalg.svd(W)
    b, d = u[:, 0], vh[0]
    value = _product_state_value(X4, a, b, c, d)
    return value, (a, b, c, d)


def _smart_start(X: np.ndarray, n: int, m: int):
    """Start from the best product approximation of the top singular pair of X."""
    U, s, Vh = np.linalg.svd(X)
    right = Vh[0].conj().reshape(n, m)
    u, _, vh = np.linalg.svd(right)
    a, c = u[:, 0], vh[0].conj()
    return a, c


def injective_norm(
    X: np.ndarray,
    n: int,
    m: int,
    restarts: int = DEFAULT_RESTARTS,
    seed: int = 0,
    tol: float = ALT_TOL,
    max_sweeps: int = ALT_MAX_SWEEPS,
) -> NormBound:
    """Injective-norm interval: alternating-maximization lower, operator-norm upper.

    The lower bound is the best value over one deterministic start (top
    singular pair, reshaped to products) plus `restarts` seeded random
    starts; it is nondecreasing in `restarts`.  Restart batches may run on
    a thread pool capped by UCORR_THREADS; results merge by max in restart
    order, so the outcome is schedule-independent.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    A = linalg.as_matrix(X)
    if A.shape != (n * m, n * m):
        raise ValueError(f"matrix must be {n * m} x {n * m} for the declared split")
    X4 = A.reshape(n, m, n, m)

    starts = [_smart_start(A, n, m)]
    for child in np.random.SeedSequence(seed).spawn(restarts):
        rng = np.random.default_rng(child)
        starts.append((linalg.random_unit_vector(n, rng), linalg.random_unit_vector(m, rng)))

    def run(start):
        a, c = start
        return _alternate_once(X4, a.copy(), c.copy(), tol, max_sweeps)

    workers = worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(s) for s in starts]

    best_val, best_vecs = results[0]
    for val, vecs in results[1:]:
        if val > best_val:
            best_val, best_vecs = val, vecs
    a, b, c, d = best_vecs
    upper = linalg.operator_norm(A)
    return NormBound(
        kind="injective",
        lower=best_val,
        upper=upper,
        lower_witness={"type": "product_functional", "a": a, "b": b, "c": c, "d": d},
        upper_witness={"type": "operator_norm_dominates"},
    )


def operator_norm_bound(X: np.ndarray) -> NormBound:
    """Exact operator norm with its singular-pair witness."""
    A = linalg.as_matrix(X)
    U, s, Vh = np.linalg.svd(A)
    val = float(s[0]) if s.size else 0.0
    return NormBound(
        kind="operator",
        lower=val,
        upper=val,
        lower_witness={"type": "singular_pair", "left": U[:, 0], "right": Vh[0].conj()},
        upper_witness={"type": "exact_svd"},
    )


def pi_norm_vector(alpha: np.ndarray, n: int, m: int) -> NormBound:
    """Projective norm of a vector in C^n (x) C^m: the trace norm of its reshape.

    Exact.  The lower witness is the bilinear form aligned with the Schmidt
    bases, B(x, y) = sum_k <x, u_k><y, v_k>, contractive by Bessel plus
    Cauchy-Schwarz; the upper witness is the Schmidt decomposition itself
    read as a sum of weighted unit simple tensors.
    """
    sd = linalg.schmidt(alpha, n, m)
    value = float(np.sum(sd.coefficients))
    witness = {"type": "schmidt_bilinear_form", "left": sd.left_vectors, "right": sd.right_vectors}
    upper_witness = {
        "type": "schmidt_decomposition",
        "coefficients": sd.coefficients,
        "left": sd.left_vectors,
        "right": sd.right_vectors,
    }
    return NormBound(
        kind="pi_vector", lower=value, upper=value, lower_witness=witness, upper_witness=upper_witness
    )


def _operator_schmidt_terms(X: np.ndarray, n: int, m: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Decompose X = sum_t A_t (x) B_t with Frobenius-orthogonal factors."""
    X4 = X.reshape(n, m, n, m)
    R = X4.transpose(0, 2, 1, 3).reshape(n * n, m * m)
    U, s, Vh = np.linalg.svd(R)
    terms = []
    cutoff = 1e-14 * (s[0] if s.size and s[0] > 0 else 1.0)
    for t in range(s.size):
        if s[t] <= cutoff:
            break
        terms.append((s[t] * U[:, t].reshape(n, n), Vh[t].reshape(m, m)))
    if not terms:
        terms.append((np.zeros((n, n), dtype=complex), np.zeros((m, m), dtype=complex)))
    return terms


def _decomposition_bound(terms) -> float:
    return float(sum(linalg.operator_norm(A) * linalg.operator_norm(B) for A, B in terms))


def _refine_terms(terms, rng: np.random.Generator, iters: int):
    """Local perturbation search over invertible recombinations of the terms.

    Mixing with A' = A R, B' = R^{-1} B preserves sum A_t (x) B_t for any
    invertible R; small random perturbations of the identity are accepted
    when they lower the bound.
    """
    k = len(terms)
    if k < 2 or iters <= 0:
        return terms, _decomposition_bound(terms)
    A = np.stack([t[0] for t in terms])
    B = np.stack([t[1] for t in terms])
    best = _decomposition_bound(list(zip(A, B)))
    step = 0.1
    for _ in range(iters):
        G = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        R = np.eye(k) + step * G
        try:
            Rinv = np.linalg.inv(R)
        except np.linalg.LinAlgError:
            continue
        A2 = np.einsum("tij,ts->sij", A, R)
        B2 = np.einsum("st,tij->sij", Rinv, B)
        cand = _decomposition_bound(list(zip(A2, B2)))
        if cand < best - 1e-15:
            A, B, best = A2, B2, cand
            step = min(0.5, step * 1.5)
        else:
            step = max(1e-4, step * 0.7)
    return list(zip(A, B)), best


def pi_norm_matrix(
    X: np.ndarray,
    n: int,
    m: int,
    refine_iters: int = 64,
    seed: int = 0,
    eps_restarts: int = 8,
) -> NormBound:
    """Projective-norm interval on M_n (x) M_m.

    Upper: operator-Schmidt decomposition cost, improved by the
    perturbation search.  Lower: best value over the witness library --
    product vector states (via alternating maximization, valid since the
    injective norm is dominated by the projective one) and the
    first-column bilinear form aligned with the Schmidt bases of the
    first column.
    """
    A = linalg.as_matrix(X)
    if A.shape != (n * m, n * m):
        raise ValueError(f"matrix must be {n * m} x {n * m} for the declared split")

    terms = _operator_schmidt_terms(A, n, m)
    rng = np.random.default_rng(np.random.SeedSequence(seed).spawn(1)[0])
    terms, upper = _refine_terms(terms, rng, refine_iters)
    upper_witness = {
        "type": "product_decomposition",
        "terms": [(At.copy(), Bt.copy()) for At, Bt in terms],
    }

    eps = injective_norm(A, n, m, restarts=eps_restarts, seed=seed)
    lower = eps.lower
    lower_witness = dict(eps.lower_witness)

    col = A[:, 0]
    if np.linalg.norm(col) > linalg.SCHMIDT_CUTOFF:
        sd = linalg.schmidt(col, n, m)
        col_value = float(np.sum(sd.coefficients))
        if col_value > lower:
            lower = col_value
            lower_witness = {
                "type": "first_column_bilinear_form",
                "left": sd.left_vectors,
                "right": sd.right_vectors,
            }

    upper = max(upper, lower)
    return NormBound(
        kind="projective",
        lower=lower,
        upper=upper,
        lower_witness=lower_witness,
        upper_witness=upper_witness,
    )


@dataclass
class LocMembership:
    member: bool
    pi_value: float
    schmidt_coefficients: np.ndarray
    alpha: np.ndarray
    certificate: NormBound


def loc_membership(corr: CorrelationMatrix, pattern_tol: float = 1e-10, pi_tol: float = 1e-9) -> LocMembership:
    """Decide membership in the product-state correlation set for limit-pattern matrices.

    Only matrices with the single-column limit pattern are accepted (the
    criterion is proven exactly there): all entries outside the
    (j, l) = (1, 1) column below `pattern_tol` and a unit first column.
    Membership holds iff the projective norm of the first-column vector is
    1, equivalently iff its Schmidt rank is 1.
    """
    X = corr.X
    off = float(np.max(np.abs(X[:, 1:]))) if X.shape[1] > 1 else 0.0
    if off > pattern_tol:
        raise ValueError(
            f"matrix is not a single-column limit pattern (off-column max {off:.3e}); "
            "the membership criterion is only established for that pattern"
        )
    alpha = X[:, 0].copy()
    nrm = float(np.linalg.norm(alpha))
    if abs(nrm - 1.0) > 1e-8:
        raise ValueError(f"first column must be a unit vector (norm {nrm:.12g})")
    bound = pi_norm_vector(alpha, corr.n, corr.m)
    member = bound.lower <= 1.0 + pi_tol
    return LocMembership(
        member=member,
        pi_value=bound.lower,
        schmidt_coefficients=linalg.schmidt(alpha, corr.n, corr.m).coefficients,
        alpha=alpha,
        certificate=bound,
    )


@dataclass
class SandwichReport:
    injective: NormBound
    operator: NormBound
    projective: NormBound
    ordering_ok: bool
    violations: list[str]


def sandwich_report(corr: CorrelationMatrix, seed: int = 0, restarts: int = DEFAULT_RESTARTS) -> SandwichReport:
    """Compute the injective <= operator <= projective chain with residual checks.

    An ordering violation beyond 1e-8 is mathematically impossible, so it
    is flagged as an implementation bug rather than raised.
    """
    inj = injective_norm(corr.X, corr.n, corr.m, restarts=restarts, seed=seed)
    op = operator_norm_bound(corr.X)
    proj = pi_norm_matrix(corr.X, corr.n, corr.m, seed=seed)
    violations = []
    if inj.lower > op.lower + ORDERING_TOL:
        violations.append(
            f"injective lower {inj.lower!r} exceeds operator norm {op.lower!r}: implementation bug"
        )
    if op.lower > proj.upper + ORDERING_TOL:
        violations.append(
            f"operator norm {op.lower!r} exceeds projective upper {proj.upper!r}: implementation bug"
        )
    return SandwichReport(
        injective=inj,
        operator=op,
        projective=proj,
        ordering_ok=not violations,
        violations=violations,
    )
