"""Certified cross-norm intervals and the sqrt(n) separation witness.

The injective, operator and projective norms on M_n (x) M_m always come in
that order.  For product matrices all three coincide; for the limit
correlation of a balanced target the projective norm jumps to sqrt(n),
which is exactly why that correlation cannot come from a commutative model.
"""

import numpy as np

from ucorr import limit_correlation, loc_membership, pi_norm_vector, sandwich_report
from ucorr.correlation import CorrelationMatrix
from ucorr.linalg import haar_unitary, kron

rng = np.random.default_rng(0)

print("A product of unitaries: every norm equals 1")
W = kron(haar_unitary(2, rng), haar_unitary(2, rng))
rep = sandwich_report(CorrelationMatrix(n=2, m=2, X=W, claimed_class="loc"), seed=0)
print(f"  injective >= {rep.injective.lower:.6f}   operator = {rep.operator.lower:.6f}"
      f"   projective in [{rep.projective.lower:.6f}, {rep.projective.upper:.6f}]")

print("\nThe balanced-target limit correlation: operator norm 1, projective sqrt(2)")
bell = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
lim = limit_correlation(bell, 2, 2)
rep = sandwich_report(lim, seed=0)
print(f"  injective >= {rep.injective.lower:.6f}   operator = {rep.operator.lower:.6f}"
      f"   projective in [{rep.projective.lower:.6f}, {rep.projective.upper:.6f}]")

print("\nMembership in the product-state correlation set is decided exactly on")
print("single-column patterns: the vector's projective norm must be 1.")
for label, vec in [
    ("simple tensor      ", np.array([1, 0, 0, 0], dtype=complex)),
    ("balanced (2 terms) ", bell),
    ("0.8 / 0.6 diagonal ", np.array([0.8, 0, 0, 0.6], dtype=complex)),
]:
    res = loc_membership(limit_correlation(vec, 2, 2))
    print(f"  {label} pi = {res.pi_value:.6f}  member: {res.member}")

print("\nOn plain vectors the projective norm is the trace norm of the reshape;")
k3 = np.zeros(9, dtype=complex)
k3[[0, 4, 8]] = 1 / np.sqrt(3)
print(f"the balanced three-level vector gives sqrt(3) = {pi_norm_vector(k3, 3, 3).lower:.12f}")
