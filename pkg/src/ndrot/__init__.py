"""Rotation matrices in R^n built directly from planes and angles."""

from .determinant import (
    Permutation,
    ProductReport,
    check_product_property,
    det_lu,
    det_permutation,
    heap_permutations,
    parallelogram_area,
    permutation_sign,
)
from .isoclinic import (
    InvariantPlaneReport,
    Plane,
    build_J,
    classify_invariant_planes,
    complex_structure,
    invariance_residuals,
    invariant_plane,
    is_invariant_plane,
    isoclinic_rotation,
)
from .linalg import (
    EQ_TOL,
    ORTHO_TOL,
    DimensionError,
    LinearDependenceError,
    NotOrthonormalError,
    as_matrix,
    as_vector,
    column,
    dot,
    gram_schmidt,
    identity,
    matmul_cayley,
    matmul_colrow,
    matmul_rowcol,
    matvec,
    norm,
    outer,
    transpose,
)
from .rotation import (
    PlaneSpec,
    RotationReport,
    RotationSpec,
    SpecError,
    apply_vector_form,
    cross_matrix,
    plane_generator,
    plane_projector,
    rodrigues_apply,
    rotation_2d,
    rotation_3d,
    rotation_4d,
    rotation_nd,
    verify_rotation,
)

__all__ = [
    "DimensionError",
    "EQ_TOL",
    "InvariantPlaneReport",
    "LinearDependenceError",
    "NotOrthonormalError",
    "ORTHO_TOL",
    "Permutation",
    "Plane",
    "PlaneSpec",
    "ProductReport",
    "RotationReport",
    "RotationSpec",
    "SpecError",
    "apply_vector_form",
    "as_matrix",
    "as_vector",
    "build_J",
    "check_product_property",
    "classify_invariant_planes",
    "column",
    "complex_structure",
    "cross_matrix",
    "det_lu",
    "det_permutation",
    "dot",
    "gram_schmidt",
    "heap_permutations",
    "identity",
    "invariance_residuals",
    "invariant_plane",
    "is_invariant_plane",
    "isoclinic_rotation",
    "matmul_cayley",
    "matmul_colrow",
    "matmul_rowcol",
    "matvec",
    "norm",
    "outer",
    "parallelogram_area",
    "permutation_sign",
    "plane_generator",
    "plane_projector",
    "rodrigues_apply",
    "rotation_2d",
    "rotation_3d",
    "rotation_4d",
    "rotation_nd",
    "transpose",
    "verify_rotation",
]

__version__ = "0.1.0"
