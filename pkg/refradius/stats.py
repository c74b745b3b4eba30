"""
Summary statistics of repeated estimates.

Confidence intervals (:func:`gaussian_ci`, :func:`bootstrap_ci`), mean
squared error against a known value (:func:`mse_curve`,
:func:`mse_bootstrap_ci`) and the two-sample Z statistic
(:func:`two_sample_z`). Sample variances use ``n − 1`` everywhere.

Examples
--------
>>> round(gaussian_ci([0.0, 2.0]).ci_high, 6)
2.96
>>> round(two_sample_z([1, 1, 1, 2], [0, 0, 0, 1]), 3)
2.828
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, DegenerateInputError
from .seeding import make_rng

Z_95 = 1.96
DEFAULT_RESAMPLES = 1000
MIN_RESAMPLES = 100


@dataclass(frozen=True)
class SampleSummary:
    """
    Mean and 95% confidence interval of a sample.

    Attributes
    ----------
    mean : float
        Sample mean.
    sample_std : float
        Standard deviation with ``n − 1`` denominator.
    ci_low, ci_high : float
        Interval bounds, ``ci_low <= mean <= ci_high``.
    n_samples : int
        Sample size (``>= 2``).
    method : str
        ``"gaussian"`` or ``"bootstrap"``.
    """

    mean: float
    sample_std: float
    ci_low: float
    ci_high: float
    n_samples: int
    method: str

    @property
    def half_width(self) -> float:
        """Half the interval width."""
        return 0.5 * (self.ci_high - self.ci_low)


def _as_sample(samples: Sequence[float] | np.ndarray, name: str = "samples") -> np.ndarray:
    values = np.asarray(samples, dtype=float).ravel()
    if values.size < 2:
        raise ArgumentError(f"{name} needs at least 2 values, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise ArgumentError(f"{name} must be finite")
    return values


def gaussian_ci(samples: Sequence[float] | np.ndarray) -> SampleSummary:
    """
    Normal-approximation 95% interval of the mean.

    Parameters
    ----------
    samples : sequence of float
        At least 2 finite values.

    Returns
    -------
    SampleSummary
        ``mean ± 1.96 s / sqrt(n)``.

    Raises
    ------
    ArgumentError
        If fewer than 2 values are given.
    """
    values = _as_sample(samples)
    mean = float(np.mean(values))
    std = float(np.std(values, ddof=1))
    half = Z_95 * std / math.sqrt(values.size)
    return SampleSummary(mean, std, mean - half, mean + half, int(values.size), "gaussian")


def _percentile_band(statistics: np.ndarray, point: float) -> tuple[float, float]:
    low, high = np.percentile(statistics, [2.5, 97.5])
    # the percentile band of a skewed statistic can miss the point estimate
    return min(float(low), point), max(float(high), point)


def _resample_indices(size: int, resamples: int, seed: int) -> np.ndarray:
    if resamples < MIN_RESAMPLES:
        raise ArgumentError(f"At least {MIN_RESAMPLES} resamples are required, got {resamples}")
    return make_rng(seed).integers(0, size, size=(resamples, size))


def bootstrap_ci(
    samples: Sequence[float] | np.ndarray, resamples: int = DEFAULT_RESAMPLES, seed: int = 0
) -> SampleSummary:
    """
    Percentile bootstrap 95% interval of the mean.

    Parameters
    ----------
    samples : sequence of float
        At least 2 finite values.
    resamples : int, optional
        Number of resamples (``>= 100``). Defaults to 1000.
    seed : int, optional
        Seed of the resampling.

    Returns
    -------
    SampleSummary
        2.5% and 97.5% percentiles of the resampled means, widened if needed
        to contain the sample mean.

    Raises
    ------
    ArgumentError
        If fewer than 2 values or 100 resamples are given.
    """
    values = _as_sample(samples)
    means = values[_resample_indices(values.size, resamples, seed)].mean(axis=1)
    mean = float(np.mean(values))
    low, high = _percentile_band(means, mean)
    return SampleSummary(mean, float(np.std(values, ddof=1)), low, high, int(values.size), "bootstrap")


#####################
# MSE               #
#####################
def mean_squared_error(samples: Sequence[float] | np.ndarray, truth: float) -> float:
    """Squared bias plus sample variance, ``(mean − truth)² + s²``."""
    values = _as_sample(samples)
    return float((np.mean(values) - truth) ** 2 + np.var(values, ddof=1))


@dataclass(frozen=True)
class MsePoint:
    """
    Mean squared error at one radius.

    Attributes
    ----------
    r : float
        Radius.
    mse : float
        Mean squared error.
    log_mse : float or None
        Natural logarithm of ``mse``; ``None`` when ``mse`` is zero.
    ok : bool
        ``False`` when ``log_mse`` is undefined.
    """

    r: float
    mse: float
    log_mse: float | None
    ok: bool


def mse_curve(estimates_per_r: Mapping[float, Sequence[float]], truth: float) -> list[MsePoint]:
    """
    Mean squared error of the estimates at each radius.

    Parameters
    ----------
    estimates_per_r : mapping of float to sequence of float
        Estimates of every run, keyed by radius; at least 2 per radius.
    truth : float
        Reference value.

    Returns
    -------
    list of MsePoint
        Sorted by radius. A zero MSE is flagged (``ok`` false) rather than
        reported as ``log 0``.

    Raises
    ------
    ArgumentError
        If the mapping is empty or a radius has fewer than 2 estimates.
    """
    if not estimates_per_r:
        raise ArgumentError("No estimates given")
    points = []
    for r in sorted(estimates_per_r):
        mse = mean_squared_error(estimates_per_r[r], truth)
        if mse > 0:
            points.append(MsePoint(float(r), mse, math.log(mse), True))
        else:
            points.append(MsePoint(float(r), mse, None, False))
    return points


def mse_bootstrap_ci(
    estimates: Sequence[float] | np.ndarray, truth: float, resamples: int = DEFAULT_RESAMPLES, seed: int = 0
) -> tuple[float, float]:
    """
    Bootstrap 95% band of the mean squared error.

    The per-run estimates are resampled and the MSE recomputed on each
    resample.

    Parameters
    ----------
    estimates : sequence of float
        At least 2 estimates.
    truth : float
        Reference value.
    resamples : int, optional
        Number of resamples (``>= 100``).
    seed : int, optional
        Seed of the resampling.

    Returns
    -------
    tuple of float
        ``(low, high)``, containing the MSE of ``estimates``.
    """
    values = _as_sample(estimates, "estimates")
    drawn = values[_resample_indices(values.size, resamples, seed)]
    statistics = (drawn.mean(axis=1) - truth) ** 2 + drawn.var(axis=1, ddof=1)
    return _percentile_band(statistics, mean_squared_error(values, truth))


#####################
# GROUP COMPARISON  #
#####################
def two_sample_z(group_a: Sequence[float] | np.ndarray, group_b: Sequence[float] | np.ndarray) -> float:
    """
    Two-sample Z statistic of the difference of means.

    Parameters
    ----------
    group_a, group_b : sequence of float
        At least 2 values each.

    Returns
    -------
    float
        ``(mean_a − mean_b) / sqrt(s_a²/n_a + s_b²/n_b)``.

    Raises
    ------
    ArgumentError
        If a group has fewer than 2 values.
    DegenerateInputError
        If both groups have zero variance.
    """
    a = _as_sample(group_a, "group_a")
    b = _as_sample(group_b, "group_b")
    scale = math.sqrt(np.var(a, ddof=1) / a.size + np.var(b, ddof=1) / b.size)
    if not scale > 0:
        raise DegenerateInputError("Both groups have zero variance")
    return float((np.mean(a) - np.mean(b)) / scale)
