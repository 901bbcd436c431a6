"""Range analysis for the two-sided Jacobi eigenvalue decomposition.

Simulation, interval and affine range estimation, closed-form bounds from
the spectral-norm bound, fixed-point simulation and accuracy metrics.
"""
from ._backend import BACKEND
from .errors import (AllZero, DimensionMismatch, DivideByZero, EvdRangeError, FixedOverflow,
                     InsufficientRows, LengthMismatch, NegativeSqrt, NoScaleFactor, NotPSD,
                     NotSymmetric, ParseError, ShapeMismatch, UnboundedRange, ZeroMatrix)
from .affine import AffineContext, AffineForm
from .fixedpoint import FixedFormat, FixedScalar, OverflowEvent, OverflowLog, parse_format
from .intervals import Interval
from .jacobi import (EvdResult, RotationParams, fixed_jacobi_evd, jacobi_evd, jacobi_rotation,
                     off_diagonal_norm, sort_descending, sweep, traced_evd)
from .linalg import (ScaleResult, SymMatrix, covariance, norm_inf, norm_one, random_data,
                     random_spsd, scale_matrix, spectral_bound)
from .metrics import (PcaModel, fit_pca, mse, pc_count, pca_project, pca_reconstruct,
                      recover_eigenvalues, sqnr)
from .ranges import (RangeReport, aa_range, analytic_bounds_scaled, analytic_bounds_unscaled,
                     bound_compliance, ia_range, iwl_required, sim_range)

__version__ = "0.1.0"

__all__ = [
    "AffineContext",
    "AffineForm",
    "AllZero",
    "BACKEND",
    "DimensionMismatch",
    "DivideByZero",
    "EvdRangeError",
    "EvdResult",
    "FixedFormat",
    "FixedOverflow",
    "FixedScalar",
    "InsufficientRows",
    "Interval",
    "LengthMismatch",
    "NegativeSqrt",
    "NoScaleFactor",
    "NotPSD",
    "NotSymmetric",
    "OverflowEvent",
    "OverflowLog",
    "ParseError",
    "PcaModel",
    "RangeReport",
    "RotationParams",
    "ScaleResult",
    "ShapeMismatch",
    "SymMatrix",
    "UnboundedRange",
    "ZeroMatrix",
    "aa_range",
    "analytic_bounds_scaled",
    "analytic_bounds_unscaled",
    "bound_compliance",
    "covariance",
    "fit_pca",
    "fixed_jacobi_evd",
    "ia_range",
    "iwl_required",
    "jacobi_evd",
    "jacobi_rotation",
    "mse",
    "norm_inf",
    "norm_one",
    "off_diagonal_norm",
    "parse_format",
    "pc_count",
    "pca_project",
    "pca_reconstruct",
    "random_data",
    "random_spsd",
    "recover_eigenvalues",
    "scale_matrix",
    "sim_range",
    "sort_descending",
    "spectral_bound",
    "sqnr",
    "sweep",
    "traced_evd",
]
