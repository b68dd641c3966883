"""Numerical ranges of low-dimensional partial isometries."""
from .analysis import (
    analyze,
    circularity_criterion_5x5,
    classify_3x3,
    flat_portions,
    genericity,
    reducibility,
)
from .kipp import (
    boundary,
    circular_disk_test,
    detect_circles,
    kippenhahn_coeffs,
    numerical_radius,
    rank_k_range,
    sweep,
)
from .matcore import char_poly, hermitian_eigen, im_part, re_part, rotate
from .pisom import (
    ExceptionalDim5,
    NilpotentDim4,
    NilpotentDim5,
    RawBlocks,
    Rank2Dim3,
    build,
    exceptional_constants,
    kernel_vector_xi,
    random_partial_isometry,
    validate_partial_isometry,
)

__version__ = "0.1.0"
