"""Exact scalar, linear-algebra and truncated-series substrate."""

from .linalg import (
    SubspaceBasis,
    full_space,
    identity,
    inverse,
    matmul,
    nullspace,
    rank,
    rref,
    span,
    subspace_contains,
    subspace_intersect,
    subspace_sum,
    to_matrix,
    zero_space,
)
from .scalar import ONE, ZERO, I, Scalar, as_scalar, parse_scalar
from .series import (
    TruncatedLaurentSeries,
    TruncatedMatrixSeries,
    series_invert,
    series_smith,
)

__all__ = [
    "Scalar", "ZERO", "ONE", "I", "as_scalar", "parse_scalar",
    "SubspaceBasis", "rref", "rank", "nullspace", "span", "full_space", "zero_space",
    "subspace_sum", "subspace_intersect", "subspace_contains",
    "identity", "inverse", "matmul", "to_matrix",
    "TruncatedLaurentSeries", "TruncatedMatrixSeries", "series_invert", "series_smith",
]
