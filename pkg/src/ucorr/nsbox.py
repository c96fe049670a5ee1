"""Non-signalling box probabilities and their functional coefficients.

A box with n inputs and m outputs per party is the array p(a, b | x, y),
stored with shape (m, m, n, n) indexed [a, b, x, y] (0-based).  Validity:

* p >= 0,
* sum_ab p(a, b | x, y) = 1 for every input pair,
* Alice's marginal sum_a p(a, b | x, y) does not depend on x,
* Bob's marginal sum_b p(a, b | x, y) does not depend on y.

The two marginal conditions are stated symmetrically in a and b (the
summation always runs over the m outputs).  Boxes are stored dense; sizes
up to n, m = 8 are the intended range.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import nnls

NS_TOL = 1e-10
NONNEG_TOL = 1e-12


def is_nonsignalling(p: np.ndarray, tol: float = NS_TOL) -> tuple[bool, dict]:
    """Check the four box conditions; returns (ok, report).

    The report lists violations in check order (nonnegativity,
    normalization, Alice marginal, Bob marginal), each with the offending
    indices and residual; the first entry is the first violation found.
    """
    arr = np.asarray(p, dtype=float)
    if arr.ndim != 4 or arr.shape[0] != arr.shape[1] or arr.shape[2] != arr.shape[3]:
        raise ValueError(f"box array must have shape (m, m, n, n), got {arr.shape}")
    m, _, n, _ = arr.shape
    violations = []

    neg = arr.min()
    if neg < -NONNEG_TOL:
        a, b, x, y = np.unravel_index(int(arr.argmin()), arr.shape)
        violations.append(
            {"condition": "nonnegative", "indices": (int(a), int(b), int(x), int(y)), "residual": float(-neg)}
        )

    totals = arr.sum(axis=(0, 1))
    bad = np.abs(totals - 1.0)
    if bad.max() > tol:
        x, y = np.unravel_index(int(bad.argmax()), bad.shape)
        violations.append(
            {"condition": "normalized", "indices": (int(x), int(y)), "residual": float(bad.max())}
        )

    # Bob's marginal sum_a p(a,b|x,y) must be independent of x
    bob = arr.sum(axis=0)  # [b, x, y]
    spread = bob.max(axis=1) - bob.min(axis=1)  # [b, y]
    if spread.max() > tol:
        b, y = np.unravel_index(int(spread.argmax()), spread.shape)
        violations.append(
            {"condition": "alice_no_signalling", "indices": (int(b), int(y)), "residual": float(spread.max())}
        )

    # Alice's marginal sum_b p(a,b|x,y) must be independent of y
    alice = arr.sum(axis=1)  # [a, x, y]
    spread = alice.max(axis=2) - alice.min(axis=2)  # [a, x]
    if spread.max() > tol:
        a, x = np.unravel_index(int(spread.argmax()), spread.shape)
        violations.append(
            {"condition": "bob_no_signalling", "indices": (int(a), int(x)), "residual": float(spread.max())}
        )

    return not violations, {"ok": not violations, "n": n, "m": m, "violations": violations}


@dataclass
class NSBox:
    n: int
    m: int
    p: np.ndarray

    def __post_init__(self) -> None:
        self.p = np.asarray(self.p, dtype=float)
        if self.p.shape != (self.m, self.m, self.n, self.n):
            raise ValueError(f"box array must have shape {(self.m, self.m, self.n, self.n)}")


def make_box(p: np.ndarray, tol: float = NS_TOL) -> NSBox:
    """Validate a raw array and wrap it; raises on any violated condition."""
    ok, report = is_nonsignalling(p, tol)
    if not ok:
        first = report["violations"][0]
        raise ValueError(f"not a non-signalling box: {first['condition']} violated by {first['residual']:.3e}")
    arr = np.asarray(p, dtype=float)
    m, _, n, _ = arr.shape
    return NSBox(n=n, m=m, p=arr.copy())


def uniform_box(n: int, m: int) -> NSBox:
    return NSBox(n=n, m=m, p=np.full((m, m, n, n), 1.0 / (m * m)))


def pr_box() -> NSBox:
    """The n = m = 2 box with p(a,b|x,y) = 1/2 when a xor b = x and y, else 0."""
    p = np.zeros((2, 2, 2, 2))
    for a, b, x, y in itertools.product(range(2), repeat=4):
        if (a ^ b) == (x & y):
            p[a, b, x, y] = 0.5
    return NSBox(n=2, m=2, p=p)


def deterministic_box(f, g, n: int, m: int) -> NSBox:
    """Local deterministic strategy a = f(x), b = g(y)."""
    p = np.zeros((m, m, n, n))
    for x in range(n):
        for y in range(n):
            p[f[x], g[y], x, y] = 1.0
    return NSBox(n=n, m=m, p=p)


def deterministic_boxes(n: int, m: int) -> list[NSBox]:
    """All m^n * m^n local deterministic boxes; the vertices of the local polytope."""
    return [
        deterministic_box(f, g, n, m)
        for f in itertools.product(range(m), repeat=n)
        for g in itertools.product(range(m), repeat=n)
    ]


def mixture_box(weights: np.ndarray, boxes: list[NSBox]) -> NSBox:
    w = np.asarray(weights, dtype=float)
    p = sum(wi * box.p for wi, box in zip(w, boxes))
    return NSBox(n=boxes[0].n, m=boxes[0].m, p=p)


@dataclass
class BoxFunctional:
    """Coefficient family of the state induced by a box.

    coeffs[a, x, b, y] = p(a, b | x, y); unit is the common value of
    sum_ab coeffs over any input pair, which well-definedness forces to 1.
    """

    n: int
    m: int
    unit: float
    coeffs: np.ndarray


def to_functional(box: NSBox, tol: float = NS_TOL) -> BoxFunctional:
    """Relabel a box as a coefficient table, checking well-definedness.

    The unit value computed from every input pair must agree, and the
    marginal-consistency conditions (which make the coefficients
    well-defined on the generator span) must hold; violations raise.
    """
    ok, report = is_nonsignalling(box.p, tol)
    if not ok:
        first = report["violations"][0]
        raise ValueError(f"invalid box: {first['condition']} violated by {first['residual']:.3e}")
    totals = box.p.sum(axis=(0, 1))
    if np.max(np.abs(totals - totals.flat[0])) > tol:
        raise ValueError("unit value differs across input pairs")
    coeffs = np.transpose(box.p, (0, 2, 1, 3)).copy()  # [a, x, b, y]
    return BoxFunctional(n=box.n, m=box.m, unit=float(totals.flat[0]), coeffs=coeffs)


def from_functional(func: BoxFunctional) -> NSBox:
    """Inverse relabeling; exact round trip with to_functional."""
    p = np.transpose(func.coeffs, (0, 2, 1, 3)).copy()  # back to [a, b, x, y]
    return NSBox(n=func.n, m=func.m, p=p)


def local_hull_fit(box: NSBox, weight: float = 1e4) -> tuple[float, np.ndarray]:
    """Distance from the box to the local polytope, with the best mixture weights.

    Solves the simplex-constrained least-squares fit over the enumerated
    deterministic vertices (nonnegative least squares with a penalized
    sum-to-one row).  A residual at numerical zero certifies membership by
    exhibiting the mixture; a clearly positive residual certifies
    non-membership at that distance.
    """
    vertices = deterministic_boxes(box.n, box.m)
    V = np.stack([v.p.reshape(-1) for v in vertices], axis=1)
    target = box.p.reshape(-1)
    A = np.vstack([V, weight * np.ones((1, V.shape[1]))])
    b = np.concatenate([target, [weight]])
    w, _ = nnls(A, b)
    s = w.sum()
    if s > 0:
        w = w / s
    residual = float(np.linalg.norm(V @ w - target))
    return residual, w
