"""Exact cohomology-ring arithmetic and bundle-isomorphism certificates for
Hirzebruch surface bundles in Bott towers."""

from .ring import (
    BottTower,
    ClassDeg2,
    GradedMap,
    HeightMismatchError,
    InternalInconsistencyError,
    RingElement,
    apply_graded_map,
    halve,
    is_ring_hom,
    is_ring_iso,
    mul,
    normalize,
    pair_product,
)
from .fiber import (
    DiffeoType,
    FiberAutomorphism,
    diffeo_type,
    hirzebruch_automorphisms,
    primitive_square_zero,
)
from .extension import (
    DoesNotExtend,
    ExtensionResult,
    HirzebruchBundleData,
    enumerate_algebra_automorphisms,
    extension_condition,
    oracle_comparison,
    predicted_automorphism_set,
)
from .classifier import (
    Conclusion,
    IsoCertificate,
    ProjIso,
    bundles_isomorphic,
    proj_iso_over,
    realize_automorphism,
)
from .harness import (
    RigidityReport,
    SearchConfig,
    brute_force_fiber_automorphisms,
    census,
    enumerate_towers,
    search_algebra_isos,
    verify_rigidity,
    verify_extension_tables,
)

__all__ = [
    "BottTower",
    "ClassDeg2",
    "Conclusion",
    "DiffeoType",
    "DoesNotExtend",
    "ExtensionResult",
    "FiberAutomorphism",
    "GradedMap",
    "HeightMismatchError",
    "HirzebruchBundleData",
    "InternalInconsistencyError",
    "IsoCertificate",
    "ProjIso",
    "RigidityReport",
    "RingElement",
    "SearchConfig",
    "apply_graded_map",
    "brute_force_fiber_automorphisms",
    "bundles_isomorphic",
    "census",
    "diffeo_type",
    "enumerate_algebra_automorphisms",
    "enumerate_towers",
    "extension_condition",
    "halve",
    "hirzebruch_automorphisms",
    "is_ring_hom",
    "is_ring_iso",
    "mul",
    "normalize",
    "oracle_comparison",
    "pair_product",
    "predicted_automorphism_set",
    "primitive_square_zero",
    "proj_iso_over",
    "realize_automorphism",
    "search_algebra_isos",
    "verify_rigidity",
    "verify_extension_tables",
]

__version__ = "0.1.0"
