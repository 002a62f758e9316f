"""Eigenvalue dynamics of correlated non-Hermitian matrix Brownian motion.

Everything is implemented in the C++ core; this package re-exports the
bound surface.
"""

from egedyn._core import (
    ArgumentError,
    DegeneracyError,
    SpectralFrame,
    Trajectory,
    TwoByTwoFrame,
    __version__,
    char_poly,
    closed_form_overlaps,
    decompose,
    det,
    eigenvalues_of,
    elementary_symmetric,
    offdiag_inverse_pair_sum,
    overlap_det,
    principal_minor_sum,
    sample_static,
    simulate,
    squared_minor_sum_residual,
    twice_cofactor_det,
)

__all__ = [
    "ArgumentError",
    "DegeneracyError",
    "SpectralFrame",
    "Trajectory",
    "TwoByTwoFrame",
    "__version__",
    "char_poly",
    "closed_form_overlaps",
    "decompose",
    "det",
    "eigenvalues_of",
    "elementary_symmetric",
    "offdiag_inverse_pair_sum",
    "overlap_det",
    "principal_minor_sum",
    "sample_static",
    "simulate",
    "squared_minor_sum_residual",
    "twice_cofactor_det",
]
