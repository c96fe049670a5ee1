"""Finite-dimensional embezzlement protocols, cross norms on bipartite
matrix spaces, operator-norm ball certificates, and non-signalling boxes.

The package is organized around the correlation data model:

* :mod:`ucorr.linalg` -- SVD, Schmidt decompositions, Kronecker products.
* :mod:`ucorr.correlation` -- correlation matrices and full coordinate
  families, compression, phase twirling, local unitary moves, validation.
* :mod:`ucorr.embezzle` -- protocol construction, closed-form and dense
  correlations, limits and the non-uniqueness construction.
* :mod:`ucorr.norms` -- injective / operator / projective norm intervals
  with checkable witnesses, and the product-correlation membership test.
* :mod:`ucorr.qmaxcert` -- positivity certificates realizing operator-norm
  contractions as correlation matrices.
* :mod:`ucorr.nsbox` -- non-signalling box polytope utilities.
* :mod:`ucorr.cli` -- the ``ucorr`` command-line tool.
"""

from .correlation import (
    CorrelationMatrix,
    FullCorrelation,
    compress,
    local_unitary_transform,
    phase_twirl,
    validate,
)
from .embezzle import (
    EmbezzlementProtocol,
    TargetVector,
    alternate_correlation,
    build_protocol,
    closed_form_correlation,
    compressed_correlation,
    dense_correlation,
    limit_correlation,
    make_target,
    overlap,
    overlap_deficit,
)
from .linalg import (
    SchmidtDecomposition,
    kron,
    min_eigenvalue_hermitian,
    operator_norm,
    schmidt,
    svd,
)
from .norms import (
    NormBound,
    injective_norm,
    loc_membership,
    operator_norm_bound,
    pi_norm_matrix,
    pi_norm_vector,
    sandwich_report,
)
from .nsbox import NSBox, from_functional, is_nonsignalling, pr_box, to_functional
from .qmaxcert import QmaxCertificate, QuotientMapRep, build_quotient_rep, certify, kernel_annihilation_check

__version__ = "0.1.0"

__all__ = [
    "CorrelationMatrix",
    "FullCorrelation",
    "EmbezzlementProtocol",
    "TargetVector",
    "SchmidtDecomposition",
    "NormBound",
    "NSBox",
    "QmaxCertificate",
    "QuotientMapRep",
    "alternate_correlation",
    "build_protocol",
    "build_quotient_rep",
    "certify",
    "closed_form_correlation",
    "compress",
    "compressed_correlation",
    "dense_correlation",
    "from_functional",
    "injective_norm",
    "is_nonsignalling",
    "kernel_annihilation_check",
    "kron",
    "limit_correlation",
    "loc_membership",
    "local_unitary_transform",
    "make_target",
    "min_eigenvalue_hermitian",
    "operator_norm",
    "operator_norm_bound",
    "overlap",
    "overlap_deficit",
    "phase_twirl",
    "pi_norm_matrix",
    "pi_norm_vector",
    "pr_box",
    "sandwich_report",
    "schmidt",
    "svd",
    "to_functional",
    "validate",
]
