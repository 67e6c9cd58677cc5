"""Exact spectral toolkit for connected threshold graphs.

Creation-sequence graphs, their shared integer eigenbasis and closed-form
Laplacian spectra, {-1,0,1} eigenbasis characterization and construction,
weak Hadamard diagonalizer certificates, and Laplacian pair/vertex state
transfer with exact 2-adic criteria and numeric fidelity cross-checks.
"""

from .errors import (
    BudgetExceededError,
    FixedStateError,
    InvalidSequenceError,
    JoinGapError,
    NotEigenvalueError,
    NotEigenvectorError,
    NotSimplyStructuredError,
    NotSSGroupError,
    ThresholdlabError,
    TooLargeError,
    VerifyFailedError,
)
from .graphs import ThresholdGraph, degree_data, parse_join_expression, parse_sequence
from .spectra import (
    Spectrum,
    assign_eigenvalues,
    eigenvalue_groups,
    projection,
    projections,
    shared_basis_vector,
    shared_eigenbasis,
    spectrum,
)
from .structured import (
    GroupBoundaries,
    SSBasis,
    SSVerdict,
    group_boundaries,
    is_simply_structured,
    ss_eigenbasis,
    ss_group_basis,
    ss_oracle,
)
from .walks import (
    PSTResult,
    PureState,
    VertexPSTResult,
    anchored_pair_b_values,
    fidelity,
    is_fixed,
    nu2,
    pair_pst,
    strong_cospectral,
    support,
    threshold_pst_pairs,
    vertex_pst,
    walk_operator,
)
from .weak_hadamard import (
    JoinDecomposition,
    SearchResult,
    WHDCertificate,
    certificate_from_json,
    diagonalizes,
    is_weak_hadamard,
    join_step,
    whd_construct,
    whd_search,
    whd_sufficient,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
