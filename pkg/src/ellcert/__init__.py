"""Certified constructions of independent points on elliptic curves.

Exact curve arithmetic and canonical heights, the function-field toolkit
(divisors, the invariant derivative, symmetrization), permutation-group
certificates, quadratic pencils with isotropic search, numerical monodromy
with exact cross-checks, and the scan-lift-certify pipeline that emits
machine-checkable independence certificates.
"""

from .builder import (
    CandidateRecord,
    CertificationError,
    IndependenceCertificate,
    build_sequence,
    candidate_scan,
    certify_independence,
    classify_candidate,
    lift_point,
    points_fixed_by,
    verify_certificate,
)
from .curves import (
    CurvePoint,
    WeierstrassCurve,
    canonical_height,
    height_pairing,
    regulator,
    torsion_order,
    twist_image,
)
from .funcfield import (
    FFElement,
    SymPoint,
    critical_value_polynomial,
    divisor_of,
    fiber_roots,
    function_with_divisor,
    genus_of_preimage,
    rr_basis,
    symmetrize,
)
from .monodromy import (
    MonodromyResult,
    critical_values,
    extract_transposition,
    monodromy_group,
)
from .pencil import (
    ConstructionReport,
    build_pencil,
    exactness_functionals,
    isotropic_search,
    min_rank_of_pencil,
    verify_construction,
)
from .perms import (
    Perm,
    PermGroup,
    SignCharacter,
    alternating_min_cycle_count,
    block_structure,
    fixed_space_dimension,
    odd_sign_characters,
    transitive_subgroup_scan,
    transposition_power,
)
from .qpoly import QPoly
from .scalars import QuadExt, SquareClassBasis, squarefree_kernel

__version__ = "0.1.0"

__all__ = [
    "CandidateRecord",
    "CertificationError",
    "ConstructionReport",
    "CurvePoint",
    "FFElement",
    "IndependenceCertificate",
    "MonodromyResult",
    "Perm",
    "PermGroup",
    "QPoly",
    "QuadExt",
    "SignCharacter",
    "SquareClassBasis",
    "SymPoint",
    "WeierstrassCurve",
    "alternating_min_cycle_count",
    "block_structure",
    "build_pencil",
    "build_sequence",
    "candidate_scan",
    "canonical_height",
    "certify_independence",
    "classify_candidate",
    "critical_value_polynomial",
    "critical_values",
    "divisor_of",
    "exactness_functionals",
    "extract_transposition",
    "fiber_roots",
    "fixed_space_dimension",
    "function_with_divisor",
    "genus_of_preimage",
    "height_pairing",
    "isotropic_search",
    "lift_point",
    "min_rank_of_pencil",
    "monodromy_group",
    "odd_sign_characters",
    "points_fixed_by",
    "regulator",
    "rr_basis",
    "squarefree_kernel",
    "symmetrize",
    "torsion_order",
    "transitive_subgroup_scan",
    "transposition_power",
    "twist_image",
    "verify_certificate",
    "verify_construction",
]
