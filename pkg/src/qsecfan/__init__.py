"""Exact secondary fans of quantum (irrational) vector configurations.

The package computes, in exact arithmetic over Q(sqrt(m)), the chamber
decomposition of the space of polytope parameters attached to a
calibrated vector configuration: polytopes, normal fans, GKZ-style
chambers, wall crossings along affine paths, and linkability of a
configuration to projective space.
"""

from .errors import (
    DegenerateInputError,
    DegeneratePathError,
    DimensionMismatchError,
    InvalidCalibrationError,
    MixedFieldError,
    NotAdmissibleError,
    OnWallError,
    QsecfanError,
    UnsupportedDimensionError,
)
from .fan import (
    CombinatorialType,
    QuantumFan,
    StabilizerProfile,
    SupportFunction,
    combinatorial_type,
    common_refinement,
    fan_automorphisms,
    fans_isomorphic,
    has_strictly_convex_support,
    is_admissible_parameter,
    is_complete,
    normal_fan,
    s_variety_strata,
    stabilizer_profiles,
    star_subdivision,
    validate_fan,
)
from .linalg import (
    Calibration,
    Matrix,
    chi_of_b,
    gale_rows,
    gale_transform,
    preimage_of_chi,
    vec,
)
from .polytope import HPolytope, VertexOracle, virtual_indices
from .projective import (
    ProjectiveCertificate,
    ProjectivePathReport,
    classify_dim2,
    path_to_projective,
    projective_certificate,
    simplex_parameter,
)
from .scalar import Rational, Scalar
from .secondary import (
    AffinePath,
    Chamber,
    CobordismReport,
    GaleCone,
    SecondaryFan,
    Wall,
    WallCrossingReport,
    chamber_of,
    classify_wall,
    cobordism_from_path,
    cross_wall,
    enumerate_chambers,
    gale_cone,
    is_admissible,
    is_generic,
)

__version__ = "0.1.0"

__all__ = [
    "AffinePath",
    "Calibration",
    "Chamber",
    "CobordismReport",
    "CombinatorialType",
    "DegenerateInputError",
    "DegeneratePathError",
    "DimensionMismatchError",
    "GaleCone",
    "HPolytope",
    "InvalidCalibrationError",
    "Matrix",
    "MixedFieldError",
    "NotAdmissibleError",
    "OnWallError",
    "ProjectiveCertificate",
    "ProjectivePathReport",
    "QsecfanError",
    "QuantumFan",
    "Rational",
    "Scalar",
    "SecondaryFan",
    "StabilizerProfile",
    "SupportFunction",
    "UnsupportedDimensionError",
    "VertexOracle",
    "Wall",
    "WallCrossingReport",
    "chamber_of",
    "chi_of_b",
    "classify_dim2",
    "classify_wall",
    "cobordism_from_path",
    "combinatorial_type",
    "common_refinement",
    "cross_wall",
    "enumerate_chambers",
    "fan_automorphisms",
    "fans_isomorphic",
    "gale_cone",
    "gale_rows",
    "gale_transform",
    "has_strictly_convex_support",
    "is_admissible",
    "is_admissible_parameter",
    "is_complete",
    "is_generic",
    "normal_fan",
    "path_to_projective",
    "preimage_of_chi",
    "projective_certificate",
    "s_variety_strata",
    "simplex_parameter",
    "stabilizer_profiles",
    "star_subdivision",
    "validate_fan",
    "vec",
    "virtual_indices",
]
