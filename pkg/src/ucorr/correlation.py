"""Unitary-correlation data at both granularities.

Two containers:

* ``CorrelationMatrix`` -- the nm x nm matrix X whose (u_ij, v_kl) entry is
  the correlation of the (i,j) generator on the left with the (k,l)
  generator on the right, laid out as sum_{ijkl} X_{(i,j),(k,l)} E_ij (x) E_kl.

* ``FullCorrelation`` -- every coordinate over pairs drawn from
  {1, u_ij, u_ij*} x {1, v_kl, v_kl*}, i.e. (2n^2+1)(2m^2+1) complex numbers.

Coordinate enumeration per side (fixed once, used by all serialization):
index 0 is the unit, indices 1..n^2 are the generators u_ij in row-major
(i,j) order, indices n^2+1..2n^2 are the adjoints u_ij* in the same order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg

CLASS_TAGS = ("qa_approx", "qc_limit", "qmax", "loc", "unclassified")

ENTRY_TOL = 1e-9
UNITARY_TOL = 1e-10


def side_size(n: int) -> int:
    return 2 * n * n + 1


def unit_index() -> int:
    return 0


def gen_index(n: int, i: int, j: int) -> int:
    """Flat side index of the (i, j) generator, 1-based i, j."""
    return 1 + (i - 1) * n + (j - 1)


def adj_index(n: int, i: int, j: int) -> int:
    """Flat side index of the (i, j) adjoint generator, 1-based i, j."""
    return 1 + n * n + (i - 1) * n + (j - 1)


@dataclass
class CorrelationMatrix:
    n: int
    m: int
    X: np.ndarray
    claimed_class: str = "unclassified"

    def __post_init__(self) -> None:
        if self.n < 2 or self.m < 2:
            raise ValueError("correlation matrices need n, m >= 2")
        self.X = linalg.as_matrix(self.X)
        d = self.n * self.m
        if self.X.shape != (d, d):
            raise ValueError(f"matrix must be {d} x {d}, got {self.X.shape}")
        if self.claimed_class not in CLASS_TAGS:
            raise ValueError(f"unknown class tag {self.claimed_class!r}")

    def entry(self, i: int, j: int, k: int, l: int) -> complex:
        """Correlation of u_ij with v_kl (all indices 1-based)."""
        return complex(self.X[(i - 1) * self.m + (k - 1), (j - 1) * self.m + (l - 1)])

    def first_column(self) -> np.ndarray:
        """Entries with (j, l) = (1, 1), as a flat vector over (i, k)."""
        return self.X[:, 0].copy()


@dataclass
class FullCorrelation:
    n: int
    m: int
    coords: np.ndarray
    claimed_class: str = "unclassified"

    def __post_init__(self) -> None:
        self.coords = np.asarray(self.coords, dtype=complex)
        expected = (side_size(self.n), side_size(self.m))
        if self.coords.shape != expected:
            raise ValueError(f"coords must have shape {expected}, got {self.coords.shape}")

    def coordinate(self, x, y) -> complex:
        """Look up a coordinate by symbolic label.

        Labels: "1" for the unit, ("u", i, j) for a generator and
        ("u*", i, j) for its adjoint (1-based indices); same shapes with
        "v" on the right side.
        """
        return complex(self.coords[_side_index(self.n, x), _side_index(self.m, y)])

    def generator_block(self) -> np.ndarray:
        """The (u_ij, v_kl) coordinates as an (n^2, m^2) array, row-major pairs."""
        n2, m2 = self.n * self.n, self.m * self.m
        return self.coords[1 : 1 + n2, 1 : 1 + m2].copy()


def _side_index(n: int, label) -> int:
    if label == "1":
        return unit_index()
    kind, i, j = label
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError(f"generator index ({i},{j}) out of range for n={n}")
    if kind in ("u", "v"):
        return gen_index(n, i, j)
    if kind in ("u*", "v*"):
        return adj_index(n, i, j)
    raise ValueError(f"unknown side label {label!r}")


def _phase_weights(n: int) -> np.ndarray:
    """Phase winding number per side index: 0 for the unit, +1 for generators, -1 for adjoints."""
    w = np.zeros(side_size(n), dtype=int)
    w[1 : 1 + n * n] = 1
    w[1 + n * n :] = -1
    return w


def compress(full: FullCorrelation) -> CorrelationMatrix:
    """Keep only the generator-pair block, arranged as an nm x nm matrix."""
    n, m = full.n, full.m
    block = full.generator_block().reshape(n, n, m, m)  # [i, j, k, l]
    X = block.transpose(0, 2, 1, 3).reshape(n * m, n * m)  # rows (i,k), cols (j,l)
    return CorrelationMatrix(n=n, m=m, X=X, claimed_class=full.claimed_class)


def phase_twirl(full: FullCorrelation, K: int = 4) -> FullCorrelation:
    """Average over the K phase rotations u -> e^{i theta} u, v -> e^{-i theta} v.

    A coordinate whose side labels wind with total weight w picks up
    e^{i theta w}; averaging over theta = 2 pi t / K annihilates it unless
    w is a multiple of K.  The weights here are in {-2,...,2}, so any
    K >= 3 kills every marginal and every mixed adjoint pair while leaving
    the generator-pair block untouched.  The geometric sum is evaluated in
    closed form, so surviving coordinates are copied and the rest are
    exactly zero.
    """
    if K < 3:
        raise ValueError("phase twirl needs K >= 3 (K = 1, 2 leave winding terms alive)")
    wx = _phase_weights(full.n)
    # v carries e^{-i theta}, so the right-side winding is the negative of the left pattern
    wy = -_phase_weights(full.m)
    total = wx[:, None] + wy[None, :]
    keep = (total % K) == 0
    coords = np.where(keep, full.coords, 0.0 + 0.0j)
    return FullCorrelation(n=full.n, m=full.m, coords=coords, claimed_class=full.claimed_class)


def local_unitary_transform(
    corr: CorrelationMatrix, A: np.ndarray, B: np.ndarray, side: str = "right"
) -> CorrelationMatrix:
    """Multiply by A (x) B on the requested side; rejects non-unitary factors."""
    A = linalg.as_matrix(A)
    B = linalg.as_matrix(B)
    if A.shape != (corr.n, corr.n) or B.shape != (corr.m, corr.m):
        raise ValueError("factor dimensions must match the correlation dimensions")
    if not linalg.is_unitary(A, UNITARY_TOL):
        raise ValueError("left factor is not unitary")
    if not linalg.is_unitary(B, UNITARY_TOL):
        raise ValueError("right factor is not unitary")
    W = linalg.kron(A, B)
    if side == "left":
        X = W @ corr.X
    elif side == "right":
        X = corr.X @ W
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return CorrelationMatrix(n=corr.n, m=corr.m, X=X, claimed_class=corr.claimed_class)


def validate(corr: CorrelationMatrix, tol: float = ENTRY_TOL) -> dict:
    """Check the correlation-matrix invariants, reporting residuals instead of raising.

    Checks: every entry has modulus <= 1, the operator norm is <= 1 (skipped
    for matrices claiming the full operator-norm ball class, where the bound
    is definitional), and the first column has Euclidean norm <= 1.
    """
    checks = []

    max_mod = float(np.max(np.abs(corr.X)))
    checks.append(
        {
            "name": "entry_modulus",
            "passed": max_mod <= 1.0 + tol,
            "residual": max(0.0, max_mod - 1.0),
        }
    )

    if corr.claimed_class != "qmax":
        op = linalg.operator_norm(corr.X)
        checks.append(
            {
                "name": "operator_norm",
                "passed": op <= 1.0 + tol,
                "residual": max(0.0, op - 1.0),
            }
        )

    col = float(np.linalg.norm(corr.X[:, 0]))
    checks.append(
        {
            "name": "first_column_norm",
            "passed": col <= 1.0 + tol,
            "residual": max(0.0, col - 1.0),
        }
    )

    return {"ok": all(c["passed"] for c in checks), "checks": checks}
