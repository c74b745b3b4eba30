"""
Correlation sums and Grassberger–Procaccia correlation dimension.

The correlation sum counts ordered pairs of trajectory points closer than
``r``, self-pairs included by default:

.. math::

    C(r, n) = \\frac{1}{n^2} \\, \\mathrm{card}\\{(i, j) : \\|x_i - x_j\\|_p < r\\}

:func:`correlation_curve` evaluates it on a whole radius grid from one sorted
pass over the pairwise distances, and :func:`gp_dimension` fits the slope of
``log C`` against ``log r`` over a radius range.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.stats import linregress

from .embedding import EmbeddingSpec, delay_embed
from .errors import ArgumentError, InsufficientDataError
from .norms import NormKind, TimeSeries, Trajectory, pairwise_distances
from .radius import RadiusRange, RadiusSelection, radius_range, reference_radius, spread_components, spread_estimate

logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS = 20
DEFAULT_GRID_MIN = 1e-8
DEFAULT_GRID_MAX_SIGMA = 2.0
SATURATION_TOLERANCE = 1e-12


def _pair_normaliser(n: int, include_self_pairs: bool) -> tuple[int, int]:
    """Return ``(offset, divisor)`` such that ``C = (2 * cross + offset) / divisor``."""
    if include_self_pairs:
        return n, n * n
    return 0, n * (n - 1)


def correlation_sum(trajectory: Trajectory, r: float, include_self_pairs: bool = True) -> float:
    """
    Correlation sum at one radius.

    Parameters
    ----------
    trajectory : Trajectory
        Trajectory, with its norm.
    r : float
        Radius (``> 0``); the ball is open (strict inequality).
    include_self_pairs : bool, optional
        Count the ``n`` pairs ``i = j`` and divide by ``n²`` (default). When
        ``False``, divide the cross pairs by ``n(n − 1)``.

    Returns
    -------
    float
        ``C(r, n)``.

    Raises
    ------
    ArgumentError
        If ``r <= 0``.
    """
    if not r > 0:
        raise ArgumentError(f"Radius must be positive, got {r}")
    cross = int(np.count_nonzero(pairwise_distances(trajectory) < r))
    offset, divisor = _pair_normaliser(trajectory.n, include_self_pairs)
    return (2 * cross + offset) / divisor


@dataclass(frozen=True)
class CorrelationCurve:
    """
    Correlation sums sampled on a radius grid.

    Attributes
    ----------
    radii : numpy.ndarray
        Strictly increasing positive radii.
    sums : numpy.ndarray
        ``C(r, n)`` at each radius, nondecreasing.
    n : int
        Trajectory length.
    norm : NormKind
        Norm used.
    pair_counts : numpy.ndarray or None
        Number of unordered cross pairs ``i < j`` closer than each radius.
        ``None`` for curves built from external values.
    include_self_pairs : bool
        Whether the sums include the ``n`` self-pairs.
    """

    radii: np.ndarray
    sums: np.ndarray
    n: int
    norm: NormKind = NormKind.L2
    pair_counts: np.ndarray | None = None
    include_self_pairs: bool = True

    def __post_init__(self) -> None:
        radii = np.asarray(self.radii, dtype=float)
        sums = np.asarray(self.sums, dtype=float)
        if radii.ndim != 1 or radii.shape != sums.shape or radii.size == 0:
            raise ArgumentError("Radii and sums must be non-empty 1-D arrays of the same length")
        if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
            raise ArgumentError("Radii must be positive and strictly increasing")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "sums", sums)
        if self.pair_counts is not None:
            object.__setattr__(self, "pair_counts", np.asarray(self.pair_counts, dtype=np.int64))
        object.__setattr__(self, "norm", NormKind.parse(self.norm))

    @property
    def log_radii(self) -> np.ndarray:
        """Natural log of the radii."""
        return np.log(self.radii)

    @property
    def log_sums(self) -> np.ndarray:
        """Natural log of the sums, ``-inf`` where a sum is 0."""
        with np.errstate(divide="ignore"):
            return np.log(self.sums)

    def usable_mask(self) -> np.ndarray:
        """Points that have neighbours besides themselves and are below saturation."""
        if self.pair_counts is not None:
            has_pairs = self.pair_counts > 0
        else:
            floor = 1.0 / self.n if self.include_self_pairs else 0.0
            has_pairs = self.sums > floor
        return has_pairs & (self.sums < 1.0 - SATURATION_TOLERANCE)

    def scaled(self, factor: float) -> CorrelationCurve:
        """Return the curve with radii multiplied by ``factor``."""
        return CorrelationCurve(
            self.radii * factor, self.sums, self.n, self.norm, self.pair_counts, self.include_self_pairs
        )


def _check_grid(radii: Sequence[float] | np.ndarray) -> np.ndarray:
    grid = np.asarray(radii, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ArgumentError("Radius grid must be a non-empty 1-D sequence")
    if np.any(grid <= 0):
        raise ArgumentError("Radius grid must only contain positive values")
    if np.any(np.diff(grid) <= 0):
        raise ArgumentError("Radius grid must be strictly increasing")
    return grid


def correlation_curve(
    trajectory: Trajectory, radii: Sequence[float] | np.ndarray, include_self_pairs: bool = True
) -> CorrelationCurve:
    """
    Correlation sums over a radius grid.

    One ``O(n²)`` distance pass is sorted once; each radius is then a binary
    search, so the counts are exactly those of a per-radius double loop.

    Parameters
    ----------
    trajectory : Trajectory
        Trajectory, with its norm.
    radii : sequence of float
        Positive, strictly increasing grid.
    include_self_pairs : bool, optional
        See :func:`correlation_sum`.

    Returns
    -------
    CorrelationCurve
        Sums and cross-pair counts at each radius.
    """
    grid = _check_grid(radii)
    distances = np.sort(pairwise_distances(trajectory))
    counts = np.searchsorted(distances, grid, side="left").astype(np.int64)
    offset, divisor = _pair_normaliser(trajectory.n, include_self_pairs)
    sums = (2 * counts + offset) / divisor
    return CorrelationCurve(grid, sums, trajectory.n, trajectory.norm, counts, include_self_pairs)


@dataclass(frozen=True)
class DimensionEstimate:
    """
    Fitted log-log slope.

    Attributes
    ----------
    d2 : float
        Slope of ``log C`` against ``log r``.
    fit_range : tuple of float
        Smallest and largest radius used.
    points_used : int
        Number of grid points in the fit.
    residual : float
        Root-mean-square residual of the fit, in log units.
    intercept : float
        Intercept of the fit (natural logarithms).
    """

    d2: float
    fit_range: tuple[float, float]
    points_used: int
    residual: float
    intercept: float = 0.0


def fit_mask(curve: CorrelationCurve, fit_range: RadiusRange | None = None) -> np.ndarray:
    """
    Points of ``curve`` that enter the slope fit.

    A point is used when it lies inside ``fit_range`` (every point when
    ``None``), has at least one cross pair, and is below the saturation
    plateau ``C = 1``.
    """
    mask = curve.usable_mask()
    if fit_range is not None:
        tolerance = 1e-12 * fit_range.upper
        mask &= (curve.radii >= fit_range.lower - tolerance) & (curve.radii <= fit_range.upper + tolerance)
    return mask


def gp_dimension(curve: CorrelationCurve, fit_range: RadiusRange | None = None) -> DimensionEstimate:
    """
    Grassberger–Procaccia slope estimate.

    Parameters
    ----------
    curve : CorrelationCurve
        Correlation sums.
    fit_range : RadiusRange, optional
        Radius range of the fit. ``None`` uses the full curve.

    Returns
    -------
    DimensionEstimate
        Ordinary least-squares slope over the usable points.

    Raises
    ------
    InsufficientDataError
        If fewer than two usable points remain: the range is too narrow or
        the grid too sparse.

    See Also
    --------
    :func:`fit_mask`
    """
    return fit_slope(curve, fit_mask(curve, fit_range))


def fit_slope(curve: CorrelationCurve, mask: np.ndarray) -> DimensionEstimate:
    """
    Least-squares slope of ``log C`` against ``log r`` over the masked points.

    Raises
    ------
    InsufficientDataError
        If fewer than two points are selected.
    """
    mask = np.asarray(mask, dtype=bool)
    used = int(np.count_nonzero(mask))
    if used < 2:
        raise InsufficientDataError(f"Only {used} usable grid point(s) in the fit range, at least 2 required")
    x = curve.log_radii[mask]
    y = np.log(curve.sums[mask])
    fit = linregress(x, y)
    residuals = y - (fit.intercept + fit.slope * x)
    rms = math.sqrt(float(np.mean(residuals**2)))
    radii = curve.radii[mask]
    logger.debug("GP slope %.4f over %d points in [%.4g, %.4g]", fit.slope, used, radii[0], radii[-1])
    return DimensionEstimate(
        d2=float(fit.slope),
        fit_range=(float(radii[0]), float(radii[-1])),
        points_used=used,
        residual=rms,
        intercept=float(fit.intercept),
    )


#####################
# GRIDS             #
#####################
def default_radius_grid(
    sigma: float,
    num: int = DEFAULT_GRID_POINTS,
    lower: float = DEFAULT_GRID_MIN,
    max_sigma: float = DEFAULT_GRID_MAX_SIGMA,
) -> np.ndarray:
    """Geometric grid of ``num`` radii in ``[lower, max_sigma * sigma]``."""
    upper = max_sigma * sigma
    if not upper > lower > 0:
        raise ArgumentError(f"Invalid full-range grid [{lower}, {upper}]")
    return np.geomspace(lower, upper, num)


def range_radius_grid(fit_range: RadiusRange, num: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    """Geometric grid of ``num`` radii spanning ``fit_range``."""
    if num < 2:
        raise ArgumentError(f"A range grid needs at least 2 points, got {num}")
    return np.geomspace(fit_range.lower, fit_range.upper, num)


@dataclass(frozen=True)
class DimensionStudy:
    """
    Full-range and β-range estimates of one trajectory.

    Attributes
    ----------
    selection : RadiusSelection
        Reference radius of the trajectory.
    full_curve : CorrelationCurve
        Curve on the full-range grid.
    full : DimensionEstimate
        Fit over the full curve.
    ranged : dict
        ``beta -> (curve, estimate)`` for each requested β.
    """

    selection: RadiusSelection
    full_curve: CorrelationCurve
    full: DimensionEstimate
    ranged: dict[float, tuple[CorrelationCurve, DimensionEstimate]]


def estimate_dimension(
    data: TimeSeries | Trajectory,
    betas: Sequence[float] = (0.01, 0.1, 0.5),
    embedding: EmbeddingSpec | None = None,
    norm: NormKind = NormKind.L2,
    grid_points: int = DEFAULT_GRID_POINTS,
    grid_min: float = DEFAULT_GRID_MIN,
    grid_max_sigma: float = DEFAULT_GRID_MAX_SIGMA,
    include_self_pairs: bool = True,
) -> DimensionStudy:
    """
    Correlation dimension over the full range and over ``[β r_opt, r_opt]``.

    Parameters
    ----------
    data : TimeSeries or Trajectory
        A scalar series (embedded with ``embedding``) or a trajectory.
    betas : sequence of float, optional
        Range parameters.
    embedding : EmbeddingSpec, optional
        Required when ``data`` is a series.
    norm : NormKind, optional
        Norm used for a series; a trajectory keeps its own.
    grid_points, grid_min, grid_max_sigma : optional
        Grid construction, see :func:`default_radius_grid`.
    include_self_pairs : bool, optional
        See :func:`correlation_sum`.

    Returns
    -------
    DimensionStudy
        All curves and fits. Fits that fail raise, so callers decide how to
        record them.
    """
    if isinstance(data, TimeSeries):
        if embedding is None:
            raise ArgumentError("An embedding is required to estimate a dimension from a series")
        trajectory = delay_embed(data, embedding, norm)
        spread = spread_estimate(data)
        sigma, _ = spread_components(data)
    else:
        trajectory = data
        spread = spread_estimate(trajectory)
        sigma, _ = spread_components(trajectory)
    selection = reference_radius(spread, trajectory.n, trajectory.d, trajectory.norm)

    full_curve = correlation_curve(
        trajectory, default_radius_grid(sigma, grid_points, grid_min, grid_max_sigma), include_self_pairs
    )
    full = gp_dimension(full_curve)
    ranged = {}
    for beta in betas:
        fit_range = radius_range(selection, beta)
        curve = correlation_curve(trajectory, range_radius_grid(fit_range, grid_points), include_self_pairs)
        ranged[float(beta)] = (curve, gp_dimension(curve, fit_range))
    return DimensionStudy(selection=selection, full_curve=full_curve, full=full, ranged=ranged)
