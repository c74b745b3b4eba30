"""
Phase-space reconstruction by delay embedding.

Provides :func:`delay_embed`, which builds the trajectory
``x_i = (u_i, u_{i+τ}, ..., u_{i+(d−1)τ})`` from a scalar series, and
:func:`select_delay_mi`, which picks ``τ`` as the first minimum of the
time-delayed mutual information.

Examples
--------
>>> series = TimeSeries([1.0, 2.0, 3.0, 4.0, 5.0])
>>> delay_embed(series, EmbeddingSpec(d=2, tau=1)).points.tolist()
[[1.0, 2.0], [2.0, 3.0], [3.0, 4.0], [4.0, 5.0]]
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import ArgumentError, DegenerateInputError
from .norms import NormKind, TimeSeries, Trajectory

logger = logging.getLogger(__name__)

DEFAULT_MI_BINS = 64
DEFAULT_MI_MIN_DEPTH = 0.1


@dataclass(frozen=True)
class EmbeddingSpec:
    """
    Delay-embedding parameters.

    Attributes
    ----------
    d : int
        Embedding dimension (``>= 1``).
    tau : int
        Delay in samples (``>= 1``).
    """

    d: int
    tau: int = 1

    def __post_init__(self) -> None:
        if int(self.d) != self.d or self.d < 1:
            raise ArgumentError(f"Embedding dimension must be an integer >= 1, got {self.d}")
        if int(self.tau) != self.tau or self.tau < 1:
            raise ArgumentError(f"Delay must be an integer >= 1, got {self.tau}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "tau", int(self.tau))

    @property
    def window(self) -> int:
        """Number of consecutive samples covered by one embedded point."""
        return (self.d - 1) * self.tau + 1

    @property
    def required_length(self) -> int:
        """Shortest series yielding a trajectory of at least 2 points."""
        return self.window + 1

    def trajectory_length(self, series_length: int) -> int:
        """``N − (d − 1) τ``."""
        return series_length - (self.d - 1) * self.tau


def delay_embed(series: TimeSeries, spec: EmbeddingSpec, norm: NormKind = NormKind.L2) -> Trajectory:
    """
    Delay embedding of a scalar series.

    Parameters
    ----------
    series : TimeSeries
        Series of length ``N``.
    spec : EmbeddingSpec
        Dimension and delay.
    norm : NormKind, optional
        Norm attached to the trajectory. Defaults to L2.

    Returns
    -------
    Trajectory
        ``N − (d−1)τ`` points; row ``i``, column ``k`` holds ``u[i + kτ]``.

    Raises
    ------
    ArgumentError
        If the series is shorter than ``(d−1)τ + 2``.
    """
    length = len(series)
    if length < spec.required_length:
        raise ArgumentError(
            f"Series of length {length} too short for d={spec.d}, tau={spec.tau}: "
            f"at least {spec.required_length} samples required"
        )
    windows = sliding_window_view(series.values, spec.window)[:, :: spec.tau]
    return Trajectory(np.ascontiguousarray(windows), tau=spec.tau, norm=norm)


#####################
# DELAY SELECTION   #
#####################
def _bin_edges(values: np.ndarray, bins: int) -> np.ndarray:
    low, high = float(values.min()), float(values.max())
    if not high > low:
        raise DegenerateInputError("Mutual information is undefined for a constant series")
    return np.linspace(low, high, bins + 1)


def mutual_information(series: TimeSeries, tau: int, bins: int = DEFAULT_MI_BINS) -> float:
    """
    Histogram estimate of the mutual information between ``u_t`` and ``u_{t+τ}``.

    Both marginals share ``bins`` equal-width bins spanning the range of the
    whole series; the plug-in estimator is used, in nats.

    Parameters
    ----------
    series : TimeSeries
        Nonconstant series.
    tau : int
        Delay (``0 <= tau < N − 1``).
    bins : int, optional
        Number of bins. Defaults to 64.

    Returns
    -------
    float
        Non-negative mutual information.

    Raises
    ------
    DegenerateInputError
        If the series is constant.
    """
    values = series.values
    if not 0 <= tau < values.size - 1:
        raise ArgumentError(f"Delay must be in [0, {values.size - 2}], got {tau}")
    edges = _bin_edges(values, bins)
    lagged = values[tau:]
    leading = values[: values.size - tau]
    joint, _, _ = np.histogram2d(leading, lagged, bins=[edges, edges])
    joint /= joint.sum()
    px = joint.sum(axis=1)
    py = joint.sum(axis=0)
    rows, cols = np.nonzero(joint)
    p = joint[rows, cols]
    mi = float(np.sum(p * np.log(p / (px[rows] * py[cols]))))
    return max(mi, 0.0)


@dataclass(frozen=True)
class DelaySelection:
    """
    Outcome of the mutual-information delay scan.

    Attributes
    ----------
    tau : int
        Selected delay.
    found_minimum : bool
        ``False`` when no strict interior minimum exists and ``tau`` is the
        argmin over the scanned range.
    mutual_information : numpy.ndarray
        ``I(τ)`` for ``τ = 0..max_tau``.
    """

    tau: int
    found_minimum: bool
    mutual_information: np.ndarray


def _first_valley(curve: np.ndarray, depth: float) -> int | None:
    """
    Centre of the first valley of ``curve`` deeper than ``depth`` on both sides.

    A valley is the contiguous run of lags whose values stay within ``depth``
    of the running minimum, closed on the right by the first value rising more
    than ``depth`` above that minimum. Runs of an even length resolve to the
    smaller of the two central lags.
    """
    max_tau = len(curve) - 1
    low, arg = curve[1], 1
    for tau in range(2, max_tau + 1):
        value = curve[tau]
        if value < low:
            low, arg = value, tau
            continue
        if value <= low + depth:
            continue

        band = low + depth
        first = arg
        while first > 1 and curve[first - 1] <= band:
            first -= 1
        last = arg
        while last < tau - 1 and curve[last + 1] <= band:
            last += 1
        if curve[first - 1] > band:
            return (first + last) // 2
        # Flat descent from tau=0: not a minimum, keep scanning from here.
        low, arg = value, tau
    return None


def select_delay_mi(
    series: TimeSeries,
    max_tau: int | None = None,
    bins: int = DEFAULT_MI_BINS,
    min_depth: float = DEFAULT_MI_MIN_DEPTH,
) -> DelaySelection:
    """
    Delay at the first minimum of the time-delayed mutual information.

    The plug-in curve of a sampled signal jitters by a few hundredths of a nat
    from lag to lag, so a minimum only counts when the curve drops into it and
    rises out of it by more than ``min_depth`` times ``I(0) − min I``. Lags
    within that band of the minimum form a flat valley whose centre is returned.

    Parameters
    ----------
    series : TimeSeries
        Nonconstant series.
    max_tau : int, optional
        Largest delay scanned (``>= 2``). Defaults to ``N // 10``.
    bins : int, optional
        Histogram bins. Defaults to 64.
    min_depth : float, optional
        Relative depth a minimum must have, in ``[0, 1)``. Defaults to 0.1;
        0 accepts the first strict local minimum.

    Returns
    -------
    DelaySelection
        Centre of the first valley, rounded toward the smaller ``τ``; when
        there is none, the smallest argmin of ``I`` over ``1..max_tau`` with
        ``found_minimum`` set to ``False``.

    Raises
    ------
    ArgumentError
        If ``max_tau`` is below 2 or too large for the series, or
        ``min_depth`` is outside ``[0, 1)``.
    DegenerateInputError
        If the series is constant.
    """
    length = len(series)
    if max_tau is None:
        max_tau = length // 10
    if max_tau < 2:
        raise ArgumentError(f"max_tau must be >= 2, got {max_tau}")
    if max_tau > length - 2:
        raise ArgumentError(f"max_tau={max_tau} too large for a series of length {length}")
    if bins < 2:
        raise ArgumentError(f"At least 2 bins are required, got {bins}")
    if not 0 <= min_depth < 1:
        raise ArgumentError(f"min_depth must be in [0, 1), got {min_depth}")

    curve = np.array([mutual_information(series, tau, bins) for tau in range(max_tau + 1)])
    depth = min_depth * float(curve[0] - curve.min())
    tau = _first_valley(curve, depth)
    if tau is not None:
        logger.debug("First mutual information minimum at tau=%d (I=%.6g)", tau, curve[tau])
        return DelaySelection(tau=tau, found_minimum=True, mutual_information=curve)

    tau = 1 + int(np.argmin(curve[1:]))
    logger.warning("No interior mutual information minimum up to tau=%d; using argmin tau=%d", max_tau, tau)
    return DelaySelection(tau=tau, found_minimum=False, mutual_information=curve)


def embedding_for(series: TimeSeries, d: int, delay: int | str, bins: int = DEFAULT_MI_BINS) -> EmbeddingSpec:
    """
    Resolve an embedding from a fixed delay or ``"auto-mi"``.

    Parameters
    ----------
    series : TimeSeries
        Series to embed.
    d : int
        Embedding dimension. With ``d = 1`` no delay is needed and ``τ = 1``.
    delay : int or str
        Fixed delay, or ``"auto-mi"`` for :func:`select_delay_mi`.
    bins : int, optional
        Histogram bins for the mutual-information scan.

    Returns
    -------
    EmbeddingSpec
        Resolved parameters.
    """
    if d == 1:
        return EmbeddingSpec(1, 1)
    if isinstance(delay, str):
        if delay != "auto-mi":
            raise ArgumentError(f"Delay must be an integer or 'auto-mi', got {delay!r}")
        max_tau = max(2, min(len(series) // 10, math.floor((len(series) - 2) / max(d - 1, 1))))
        return EmbeddingSpec(d, select_delay_mi(series, max_tau=max_tau, bins=bins).tau)
    return EmbeddingSpec(d, delay)
