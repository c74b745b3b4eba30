"""Reference-rule radius selection for correlation dimension and K2 entropy estimation."""

__version__ = "0.1.0"

from .correlation import CorrelationCurve, DimensionEstimate, correlation_curve, correlation_sum, gp_dimension
from .embedding import EmbeddingSpec, delay_embed, select_delay_mi
from .errors import (
    ArgumentError,
    DegenerateInputError,
    DivergenceError,
    InsufficientDataError,
    InsufficientStatisticsError,
    ParseError,
    RefRadiusError,
)
from .norms import NormKind, TimeSeries, Trajectory
from .radius import RadiusRange, RadiusSelection, alpha_coefficient, radius_range, reference_radius, spread_estimate
from .recurrence import DiagonalHistogram, diagonal_histogram, k2_curve, k2_estimate, recurrence_matrix

__all__ = [
    "ArgumentError",
    "CorrelationCurve",
    "DegenerateInputError",
    "DiagonalHistogram",
    "DimensionEstimate",
    "DivergenceError",
    "EmbeddingSpec",
    "InsufficientDataError",
    "InsufficientStatisticsError",
    "NormKind",
    "ParseError",
    "RadiusRange",
    "RadiusSelection",
    "RefRadiusError",
    "TimeSeries",
    "Trajectory",
    "alpha_coefficient",
    "correlation_curve",
    "correlation_sum",
    "delay_embed",
    "diagonal_histogram",
    "gp_dimension",
    "k2_curve",
    "k2_estimate",
    "radius_range",
    "recurrence_matrix",
    "reference_radius",
    "select_delay_mi",
    "spread_estimate",
]
