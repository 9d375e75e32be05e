"""Computational laboratory for Markoff-type cubic surfaces.

Orbit decompositions of the Vieta/permutation action on points mod q,
conic rotation orders and cascade certificates, counting for the
subgroup equation and the roots-of-unity equation, the integral Markoff
tree, and spectral gaps of the action graph.
"""

from .modmath import (
    Modulus,
    OrderContext,
    eigen_order,
    factorize,
    is_probable_prime,
    legendre,
    modulus,
    mult_order,
    order_context,
    primes_upto,
    sqrt_mod,
)
from .surface import (
    GENERATORS,
    PACK_LIMIT,
    ModulusTooLarge,
    NonInvertiblePivot,
    OffSurface,
    PointSet,
    ResiduePoint,
    SurfaceSpec,
    admissible_generators,
    apply_generator,
    apply_generator_z,
    enumerate_keys,
    enumerate_points,
    evaluate,
    evaluate_z,
    generator_set_label,
    load_surface_file,
    pack_keys,
    parse_surface,
    point,
    unpack_keys,
    vieta,
    vieta_z,
)
from .orbits import (
    OrbitReport,
    Theorem1Stats,
    decompose,
    decompose_union_find,
    orbit_of,
    theorem1_stats,
)
from .conics import (
    CascadeStep,
    RotationDescriptor,
    cascade_certify,
    conic_points,
    is_maximal,
    level_census,
    rotation_order,
    rotation_tables,
)
from .cyclo import cos_minimal_poly, cyclotomic, vanishes_at_primitive_root
from .dioph import (
    MAX_UNITY_ORDER,
    SCREEN_TOL,
    BadParameter,
    Eq5Violation,
    FiniteOrbitCandidate,
    SubgroupSpec,
    UnityAudit,
    UnitySolution,
    count_eq5,
    cz_bound,
    eq5_audit,
    finite_orbit_candidates,
    subgroup,
    unity_audit,
    unity_search,
)
from .tree import (
    SIGN_PATTERNS,
    BadPrime,
    CensusRow,
    TripleZ,
    check_uniqueness,
    congruence_check,
    enumerate_triples,
    markoff_numbers,
    primality_census,
    reduction_cover,
    zagier_fit,
)
from .spectral import (
    SEED_ENV,
    NotConverged,
    SpectrumReport,
    dense_lambda2,
    dense_walk_matrix,
    spectral_gap,
)

__version__ = "0.1.0"

__all__ = [
    "Modulus",
    "OrderContext",
    "eigen_order",
    "factorize",
    "is_probable_prime",
    "legendre",
    "modulus",
    "mult_order",
    "order_context",
    "primes_upto",
    "sqrt_mod",
    "GENERATORS",
    "PACK_LIMIT",
    "ModulusTooLarge",
    "NonInvertiblePivot",
    "OffSurface",
    "PointSet",
    "ResiduePoint",
    "SurfaceSpec",
    "admissible_generators",
    "apply_generator",
    "apply_generator_z",
    "enumerate_keys",
    "enumerate_points",
    "evaluate",
    "evaluate_z",
    "generator_set_label",
    "load_surface_file",
    "pack_keys",
    "parse_surface",
    "point",
    "unpack_keys",
    "vieta",
    "vieta_z",
    "OrbitReport",
    "Theorem1Stats",
    "decompose",
    "decompose_union_find",
    "orbit_of",
    "theorem1_stats",
    "CascadeStep",
    "RotationDescriptor",
    "cascade_certify",
    "conic_points",
    "is_maximal",
    "level_census",
    "rotation_order",
    "rotation_tables",
    "cos_minimal_poly",
    "cyclotomic",
    "vanishes_at_primitive_root",
    "MAX_UNITY_ORDER",
    "SCREEN_TOL",
    "BadParameter",
    "Eq5Violation",
    "FiniteOrbitCandidate",
    "SubgroupSpec",
    "UnityAudit",
    "UnitySolution",
    "count_eq5",
    "cz_bound",
    "eq5_audit",
    "finite_orbit_candidates",
    "subgroup",
    "unity_audit",
    "unity_search",
    "SIGN_PATTERNS",
    "BadPrime",
    "CensusRow",
    "TripleZ",
    "check_uniqueness",
    "congruence_check",
    "enumerate_triples",
    "markoff_numbers",
    "primality_census",
    "reduction_cover",
    "zagier_fit",
    "SEED_ENV",
    "NotConverged",
    "SpectrumReport",
    "dense_lambda2",
    "dense_walk_matrix",
    "spectral_gap",
    "__version__",
]
