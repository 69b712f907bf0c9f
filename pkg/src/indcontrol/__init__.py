"""Lie-algebraic analysis of bipartite quantum systems controlled through an auxiliary.

Hot loops (batched commutator brackets and Gram-Schmidt projections) run in a compiled
extension when it is available, otherwise in pure Python; ``BACKEND`` says
which one is active.
"""

from ._backend import BACKEND
from .bases import gell_mann_basis, pauli
from .controllability import (
    CaseLabel,
    IndirectProblem,
    Report,
    StructuredBasis,
    analyze,
    build_generators,
    case3_containments,
    check_equivalence,
    classify_case,
    counterexample_state,
    disintegrate,
    indirect_criterion,
    is_completely_controllable,
    lemma1_dependent,
    lemma1_witness,
    sigma_even,
    sigma_odd,
    verify_case2_contradiction,
)
from .errors import (
    ClosureCapError,
    DimensionMismatch,
    DisintegrationFailure,
    HypothesisError,
    InconsistencyError,
    ValidationError,
)
from .lie import (
    LieBasis,
    Subspace,
    ad_saturate,
    contains,
    lie_closure,
    observability_space,
    subspace_intersect,
)
from .linalg import (
    DEFAULT_TOL,
    BipartiteDims,
    DensityMatrix,
    anticommutator,
    commutator,
    hs_inner,
    kron,
    orthonormalize,
    partial_trace_a,
    partial_trace_s,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BipartiteDims",
    "CaseLabel",
    "ClosureCapError",
    "DEFAULT_TOL",
    "DensityMatrix",
    "DimensionMismatch",
    "DisintegrationFailure",
    "HypothesisError",
    "InconsistencyError",
    "IndirectProblem",
    "LieBasis",
    "Report",
    "StructuredBasis",
    "Subspace",
    "ValidationError",
    "ad_saturate",
    "analyze",
    "anticommutator",
    "build_generators",
    "case3_containments",
    "check_equivalence",
    "classify_case",
    "commutator",
    "contains",
    "counterexample_state",
    "disintegrate",
    "gell_mann_basis",
    "hs_inner",
    "indirect_criterion",
    "is_completely_controllable",
    "kron",
    "lemma1_dependent",
    "lemma1_witness",
    "lie_closure",
    "observability_space",
    "orthonormalize",
    "partial_trace_a",
    "partial_trace_s",
    "pauli",
    "sigma_even",
    "sigma_odd",
    "subspace_intersect",
    "verify_case2_contradiction",
]
