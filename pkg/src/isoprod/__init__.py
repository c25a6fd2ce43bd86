"""Groups of order 2^(3s) with central squares and the product-quotient surfaces they give.

Kernels run under numba by default; set ``ISOPROD_BACKEND=numpy`` for the
pure numpy path.
"""

from ._backend import BACKEND
from .gf2 import BitMatrix, BitVector, DimensionError, in_span, rank, reduce, subspace_canonical
from .group import (
    Fc2Group,
    GroupElement,
    NotIndependentWarning,
    StructureTensor,
    find_isomorphism,
    is_isomorphic,
    make_group,
)
from .ramification import (
    CriterionInapplicable,
    GenerationFailure,
    GeneratorSystem,
    NotAdmissible,
    NotDisjoint,
    OrderFailure,
    RamificationError,
    RelationFailure,
    TypeSignature,
    are_disjoint,
    lemma_criterion,
    make_structure,
    sigma_set,
    validate_system,
)
from .constructions import (
    ConstructionUndefined,
    build_T1,
    build_T2_regular,
    build_V2_irregular,
    construction_validity,
    order2_constraints,
)
from .invariants import InvariantViolation, rh_genus, surface_invariants, theorem_invariants
from .census import CensusReport, classify_exhaustive, classify_sampled, component_lower_bound, count_tensor_space
from .bounds import constant_checks, higman_bounds, reference_bounds, theorem_bounds

__version__ = "0.1.0"
