"""
Recurrence plots, diagonal-line histograms and K2 entropy.

The correlation entropy ``K2`` is read off the decay of the diagonal-line
histogram of the recurrence plot of the scalar series:

.. math::

    K_2 \\approx -\\frac{1}{\\Delta t} \\frac{d \\log N^\\varepsilon(m)}{dm}

where ``N^ε(m)`` counts the index pairs ``(i, j)`` whose series stay
ε-close over ``m`` consecutive samples. The histogram is computed once per
radius, from the run lengths of consecutive matches along each diagonal, and
serves every ``m``.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import squareform
from scipy.stats import linregress

from .errors import ArgumentError, InsufficientStatisticsError
from .norms import NormKind, TimeSeries, Trajectory, pairwise_distances

logger = logging.getLogger(__name__)

DEFAULT_M_LO = 2
DEFAULT_M_HI = 8
DEFAULT_COUNT_FLOOR = 10


def _check_epsilon(epsilon: float) -> float:
    if not epsilon > 0:
        raise ArgumentError(f"Radius must be positive, got {epsilon}")
    return float(epsilon)


#####################
# RECURRENCE PLOT   #
#####################
@dataclass(frozen=True)
class RecurrenceMatrix:
    """
    Thresholded distance matrix of a trajectory.

    Attributes
    ----------
    bits : numpy.ndarray
        Symmetric ``(n, n)`` boolean matrix, ``True`` where two points are
        closer than ``epsilon``. The diagonal is always ``True``.
    epsilon : float
        Radius used.
    norm : NormKind
        Norm used.
    """

    bits: np.ndarray
    epsilon: float
    norm: NormKind = NormKind.L2

    @property
    def n(self) -> int:
        """Number of states."""
        return int(self.bits.shape[0])

    @property
    def recurrence_rate(self) -> float:
        """Fraction of ``True`` entries, diagonal included."""
        return int(np.count_nonzero(self.bits)) / self.bits.size

    def pairs(self) -> np.ndarray:
        """``(k, 2)`` array of the ``(i, j)`` indices of ``True`` entries, row-major."""
        return np.argwhere(self.bits)


def recurrence_matrix(trajectory: Trajectory, epsilon: float) -> RecurrenceMatrix:
    """
    Recurrence plot of a trajectory.

    Parameters
    ----------
    trajectory : Trajectory
        Trajectory, with its norm.
    epsilon : float
        Radius (``> 0``); the comparison is strict.

    Returns
    -------
    RecurrenceMatrix
        ``bits[i, j] = ‖x_i − x_j‖ < ε``.

    Raises
    ------
    ArgumentError
        If ``epsilon <= 0``.
    """
    epsilon = _check_epsilon(epsilon)
    bits = squareform(pairwise_distances(trajectory) < epsilon)
    np.fill_diagonal(bits, True)
    return RecurrenceMatrix(bits=bits, epsilon=epsilon, norm=trajectory.norm)


#####################
# DIAGONAL LINES    #
#####################
@dataclass(frozen=True)
class DiagonalHistogram:
    """
    Diagonal-line histogram ``N^ε(m)`` for ``m = 1..m_max``.

    Attributes
    ----------
    counts : numpy.ndarray
        ``counts[m − 1] = N^ε(m)``; nonnegative and nonincreasing.
    epsilon : float
        Radius used.
    n : int
        Length of the series.
    include_self_pairs : bool
        Whether the ``i = j`` pairs are counted.
    """

    counts: np.ndarray
    epsilon: float
    n: int
    include_self_pairs: bool = True

    def __post_init__(self) -> None:
        counts = np.asarray(self.counts)
        if counts.ndim != 1 or counts.size == 0:
            raise ArgumentError("Histogram counts must be a non-empty 1-D array")
        if np.any(counts < 0):
            raise ArgumentError("Histogram counts must be nonnegative")
        if np.any(np.diff(counts) > 0):
            raise ArgumentError("Histogram counts must be nonincreasing in m")
        object.__setattr__(self, "counts", counts)

    @property
    def m_max(self) -> int:
        """Longest line length counted."""
        return int(self.counts.size)

    def count(self, m: int) -> int | float:
        """``N^ε(m)`` for ``1 <= m <= m_max``."""
        if not 1 <= m <= self.m_max:
            raise ArgumentError(f"m must be in [1, {self.m_max}], got {m}")
        return self.counts[m - 1].item()


def _run_lengths(matches: np.ndarray) -> np.ndarray:
    """Lengths of the maximal runs of ``True`` in a boolean vector."""
    edges = np.diff(np.concatenate(([0], matches.view(np.int8), [0])))
    return np.flatnonzero(edges == -1) - np.flatnonzero(edges == 1)


def diagonal_histogram(
    series: TimeSeries, epsilon: float, m_max: int, include_self_pairs: bool = True
) -> DiagonalHistogram:
    """
    Number of index pairs staying ε-close over ``m`` consecutive samples.

    ``N^ε(m) = card{(i, j) : i, j <= N − m, |u_{i+k} − u_{j+k}| < ε for k < m}``
    with 0-based indices. Each diagonal offset is scanned once; a maximal run
    of ``L`` consecutive matches contributes ``L − m + 1`` pairs for every
    ``m <= L``. Off-diagonal runs are counted twice (``(i, j)`` and
    ``(j, i)``) and the main diagonal contributes ``N − m + 1``.

    Parameters
    ----------
    series : TimeSeries
        Scalar series of length ``N``.
    epsilon : float
        Radius (``> 0``).
    m_max : int
        Longest line length counted (``1 <= m_max < N``).
    include_self_pairs : bool, optional
        Count the pairs ``i = j``. Defaults to ``True``.

    Returns
    -------
    DiagonalHistogram
        Exact integer counts.

    Raises
    ------
    ArgumentError
        If ``epsilon <= 0`` or ``m_max`` is outside ``[1, N)``.
    """
    epsilon = _check_epsilon(epsilon)
    values = series.values
    length = values.size
    if int(m_max) != m_max or not 1 <= m_max < length:
        raise ArgumentError(f"m_max must be an integer in [1, {length - 1}], got {m_max}")
    m_max = int(m_max)

    # runs[L] = number of maximal runs of length L over all off-diagonals
    runs = np.zeros(length + 1, dtype=np.int64)
    for offset in range(1, length):
        matches = np.abs(values[offset:] - values[:-offset]) < epsilon
        if matches.any():
            runs += np.bincount(_run_lengths(matches), minlength=length + 1)

    lengths = np.arange(length + 1, dtype=np.int64)
    # tails[m] = sum over L >= m, so that sum_{L>=m} (L - m + 1) runs[L] = A[m] - (m - 1) B[m]
    weighted_tail = np.cumsum((lengths * runs)[::-1])[::-1]
    count_tail = np.cumsum(runs[::-1])[::-1]
    m = np.arange(1, m_max + 1, dtype=np.int64)
    counts = 2 * (weighted_tail[m] - (m - 1) * count_tail[m])
    if include_self_pairs:
        counts += length - m + 1
    logger.debug("Diagonal histogram eps=%.4g n=%d: N(1)=%d N(%d)=%d", epsilon, length, counts[0], m_max, counts[-1])
    return DiagonalHistogram(counts=counts, epsilon=epsilon, n=length, include_self_pairs=include_self_pairs)


#####################
# K2 ENTROPY        #
#####################
@dataclass(frozen=True)
class EntropyEstimate:
    """
    K2 entropy estimate.

    Attributes
    ----------
    k2 : float
        Entropy in nats per time unit.
    r_used : float
        Radius of the histogram.
    m_range : tuple of int
        ``(m_lo, m_hi)`` of the regression.
    dt : float
        Time per sample.
    """

    k2: float
    r_used: float
    m_range: tuple[int, int]
    dt: float


def _check_m_range(m_lo: int, m_hi: int) -> None:
    if not 1 <= m_lo < m_hi:
        raise ArgumentError(f"m range must satisfy 1 <= m_lo < m_hi, got [{m_lo}, {m_hi}]")


def k2_estimate(
    hist: DiagonalHistogram,
    dt: float = 1.0,
    m_lo: int = DEFAULT_M_LO,
    m_hi: int = DEFAULT_M_HI,
    count_floor: float = DEFAULT_COUNT_FLOOR,
) -> EntropyEstimate:
    """
    K2 from the slope of ``log N^ε(m)`` against ``m``.

    Parameters
    ----------
    hist : DiagonalHistogram
        Histogram with ``m_max >= m_hi + 1``.
    dt : float, optional
        Time per sample. Maps use ``1.0``.
    m_lo, m_hi : int, optional
        Regression range, ``[2, 8]`` by default.
    count_floor : float, optional
        Smallest count accepted over ``[m_lo, m_hi + 1]``. Defaults to 10.

    Returns
    -------
    EntropyEstimate
        ``K2 = −slope / dt`` of the OLS fit over ``m ∈ [m_lo, m_hi]``.

    Raises
    ------
    ArgumentError
        If the m range is invalid or exceeds the histogram.
    InsufficientStatisticsError
        If a count in the range is below ``count_floor``: the radius is too
        small or the series too short.
    """
    _check_m_range(m_lo, m_hi)
    if not dt > 0:
        raise ArgumentError(f"Time step must be positive, got {dt}")
    if m_hi + 1 > hist.m_max:
        raise ArgumentError(f"Histogram holds m <= {hist.m_max}, m_hi + 1 = {m_hi + 1} required")
    checked = hist.counts[m_lo - 1 : m_hi + 1]
    if np.any(checked < count_floor) or np.any(checked <= 0):
        raise InsufficientStatisticsError(
            f"Diagonal counts {checked.min()} below floor {count_floor} at eps={hist.epsilon:.6g}"
        )
    m = np.arange(m_lo, m_hi + 1, dtype=float)
    fit = linregress(m, np.log(hist.counts[m_lo - 1 : m_hi].astype(float)))
    return EntropyEstimate(k2=-float(fit.slope) / dt, r_used=hist.epsilon, m_range=(m_lo, m_hi), dt=float(dt))


@dataclass(frozen=True)
class K2Point:
    """
    One radius of a K2 curve.

    Attributes
    ----------
    r : float
        Radius.
    k2 : float or None
        Estimate, ``None`` when the radius is flagged.
    ok : bool
        ``False`` when the counts fell below the floor.
    """

    r: float
    k2: float | None
    ok: bool


def k2_curve(
    series: TimeSeries,
    radii: Sequence[float] | np.ndarray,
    m_lo: int = DEFAULT_M_LO,
    m_hi: int = DEFAULT_M_HI,
    count_floor: float = DEFAULT_COUNT_FLOOR,
    include_self_pairs: bool = True,
) -> list[K2Point]:
    """
    K2 as a function of the radius.

    Radii with too few diagonal counts are flagged instead of raising.

    Parameters
    ----------
    series : TimeSeries
        Scalar series; its ``dt`` converts the slope to nats per time unit.
    radii : sequence of float
        Positive, increasing grid.
    m_lo, m_hi, count_floor, include_self_pairs : optional
        See :func:`k2_estimate` and :func:`diagonal_histogram`.

    Returns
    -------
    list of K2Point
        One point per radius, in grid order.
    """
    grid = np.asarray(radii, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(grid <= 0) or np.any(np.diff(grid) <= 0):
        raise ArgumentError("Radius grid must be positive and strictly increasing")
    _check_m_range(m_lo, m_hi)

    if m_hi + 1 >= len(series):
        logger.warning(
            "Series of length %d too short for diagonals up to m=%d; all %d radii flagged",
            len(series),
            m_hi + 1,
            grid.size,
        )
        return [K2Point(r=float(r), k2=None, ok=False) for r in grid]

    points = []
    for r in grid:
        hist = diagonal_histogram(series, float(r), m_hi + 1, include_self_pairs)
        try:
            estimate = k2_estimate(hist, series.dt, m_lo, m_hi, count_floor)
        except InsufficientStatisticsError:
            points.append(K2Point(r=float(r), k2=None, ok=False))
            continue
        points.append(K2Point(r=float(r), k2=estimate.k2, ok=True))
    flagged = sum(not point.ok for point in points)
    if flagged:
        logger.warning("%d of %d radii flagged for insufficient diagonal counts", flagged, len(points))
    return points
