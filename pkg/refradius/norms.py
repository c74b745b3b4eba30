"""
Norms, sampled signals and phase-space trajectories.

This module holds the types shared by every estimator of the package:
:class:`NormKind`, :class:`TimeSeries` and :class:`Trajectory`, the L_p
:func:`distance`, the single pairwise-distance pass
(:func:`pairwise_distances`) and the volume of generalized unit balls
(:func:`unit_ball_volume`).

Only the L1, L2 and L∞ norms are supported: the closed forms of the
reference-rule coefficient exist for exactly these three.

Examples
--------
>>> distance([0, 0], [3, 4], NormKind.L2)
5.0
>>> unit_ball_volume(NormKind.LINF, 3)
8.0
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial.distance import pdist
from scipy.special import gammaln

from .errors import ArgumentError

_EXACT_FACTORIAL_MAX_D = 20


class NormKind(Enum):
    """
    Supported L_p norms.

    Attributes
    ----------
    p : float
        Order of the norm (``1.0``, ``2.0`` or ``inf``).
    metric : str
        Name of the equivalent :func:`scipy.spatial.distance.pdist` metric.
    """

    L1 = "l1"
    L2 = "l2"
    LINF = "linf"

    @property
    def p(self) -> float:
        """Exponent ``p`` of the norm."""
        return {NormKind.L1: 1.0, NormKind.L2: 2.0, NormKind.LINF: math.inf}[self]

    @property
    def metric(self) -> str:
        """Metric name understood by :func:`scipy.spatial.distance.pdist`."""
        return {NormKind.L1: "cityblock", NormKind.L2: "euclidean", NormKind.LINF: "chebyshev"}[self]

    @property
    def inverse_p(self) -> float:
        """Reciprocal ``1/p`` used by the Gamma-function forms (``0`` for L∞)."""
        return 0.0 if self is NormKind.LINF else 1.0 / self.p

    @classmethod
    def parse(cls, text: str | NormKind) -> NormKind:
        """
        Parse a norm name.

        Parameters
        ----------
        text : str or NormKind
            One of ``1``, ``l1``, ``manhattan``, ``cityblock``, ``2``, ``l2``,
            ``euclidean``, ``inf``, ``linf``, ``max``, ``chebyshev`` or
            ``supremum`` (case-insensitive).

        Returns
        -------
        NormKind
            The matching norm.

        Raises
        ------
        ArgumentError
            If the name is not recognised, including any other order ``p``.
        """
        if isinstance(text, NormKind):
            return text
        key = str(text).strip().lower()
        try:
            return _NORM_ALIASES[key]
        except KeyError:
            raise ArgumentError(f"Unsupported norm {text!r}: only L1, L2 and Linf are available") from None


_NORM_ALIASES = {
    "1": NormKind.L1,
    "l1": NormKind.L1,
    "manhattan": NormKind.L1,
    "cityblock": NormKind.L1,
    "2": NormKind.L2,
    "l2": NormKind.L2,
    "euclidean": NormKind.L2,
    "inf": NormKind.LINF,
    "linf": NormKind.LINF,
    "max": NormKind.LINF,
    "chebyshev": NormKind.LINF,
    "supremum": NormKind.LINF,
}


def _frozen_array(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class TimeSeries:
    """
    Univariate signal sampled at a fixed step.

    Attributes
    ----------
    values : numpy.ndarray
        Read-only 1-D array of samples (signal units).
    dt : float
        Time units per sample. Maps use ``1.0``.
    """

    values: np.ndarray
    dt: float = 1.0

    def __post_init__(self) -> None:
        values = _frozen_array(self.values)
        if values.ndim != 1:
            raise ArgumentError(f"A time series must be 1-D, got shape {values.shape}")
        if values.size < 2:
            raise ArgumentError(f"A time series needs at least 2 samples, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ArgumentError("A time series must only contain finite values")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ArgumentError(f"Sampling step must be positive, got {self.dt}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dt", float(self.dt))

    def __len__(self) -> int:
        return int(self.values.size)

    def replace_values(self, values: np.ndarray) -> TimeSeries:
        """Return a series with the same step and new samples."""
        return TimeSeries(values, self.dt)


@dataclass(frozen=True)
class Trajectory:
    """
    Sample trajectory of ``n`` points in R^d.

    Attributes
    ----------
    points : numpy.ndarray
        Read-only ``(n, d)`` array.
    tau : int
        Delay used to build the trajectory (``1`` for native trajectories).
    norm : NormKind
        Norm used for every distance computed on this trajectory.
    """

    points: np.ndarray
    tau: int = 1
    norm: NormKind = NormKind.L2

    def __post_init__(self) -> None:
        points = np.array(self.points, dtype=float)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2:
            raise ArgumentError(f"Trajectory points must be a 2-D array, got shape {points.shape}")
        if points.shape[0] < 2:
            raise ArgumentError(f"A trajectory needs at least 2 points, got {points.shape[0]}")
        if points.shape[1] < 1:
            raise ArgumentError("A trajectory needs at least one coordinate")
        if not np.all(np.isfinite(points)):
            raise ArgumentError("Trajectory coordinates must be finite")
        if int(self.tau) < 1:
            raise ArgumentError(f"Delay must be >= 1, got {self.tau}")
        object.__setattr__(self, "points", _frozen_array(points))
        object.__setattr__(self, "tau", int(self.tau))
        object.__setattr__(self, "norm", NormKind.parse(self.norm))

    @property
    def n(self) -> int:
        """Number of points."""
        return int(self.points.shape[0])

    @property
    def d(self) -> int:
        """Dimension of the space."""
        return int(self.points.shape[1])

    def __len__(self) -> int:
        return self.n

    def scaled(self, factor: float) -> Trajectory:
        """Return the trajectory with every coordinate multiplied by ``factor``."""
        return Trajectory(self.points * factor, self.tau, self.norm)


def distance(a: np.ndarray, b: np.ndarray, norm: NormKind) -> float:
    """
    Distance between two points.

    Parameters
    ----------
    a, b : array_like
        Points of the same dimension.
    norm : NormKind
        Norm defining the distance.

    Returns
    -------
    float
        ``‖a − b‖_p``.

    Raises
    ------
    ArgumentError
        If the points do not have the same dimension or are not finite.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    if a.shape != b.shape:
        raise ArgumentError(f"Dimension mismatch: {a.shape} vs {b.shape}")
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ArgumentError("Points must be finite")
    return float(np.linalg.norm(a - b, ord=NormKind.parse(norm).p))


def pairwise_distances(trajectory: Trajectory) -> np.ndarray:
    """
    All distances between distinct points of a trajectory.

    Parameters
    ----------
    trajectory : Trajectory
        Trajectory whose norm defines the distance.

    Returns
    -------
    numpy.ndarray
        Condensed vector of the ``n(n−1)/2`` distances for pairs ``i < j``,
        in :func:`scipy.spatial.distance.pdist` order. Self-pairs are not
        included.
    """
    return pdist(trajectory.points, metric=trajectory.norm.metric)


def log_unit_ball_volume(norm: NormKind, d: int) -> float:
    """Natural logarithm of :func:`unit_ball_volume`, safe for large ``d``."""
    norm = NormKind.parse(norm)
    if int(d) != d or d < 1:
        raise ArgumentError(f"Dimension must be an integer >= 1, got {d}")
    d = int(d)
    if norm is NormKind.L1:
        return d * math.log(2.0) - float(gammaln(d + 1))
    if norm is NormKind.L2:
        return 0.5 * d * math.log(math.pi) - float(gammaln(0.5 * d + 1))
    return d * math.log(2.0)


def unit_ball_volume(norm: NormKind, d: int) -> float:
    """
    Volume of the unit ball of an L_p norm.

    The ball of radius ``r`` has volume ``unit_ball_volume(norm, d) * r**d``.

    Parameters
    ----------
    norm : NormKind
        Norm defining the ball.
    d : int
        Dimension (``>= 1``).

    Returns
    -------
    float
        ``2^d / d!`` for L1, ``π^(d/2) / Γ(d/2 + 1)`` for L2 and ``2^d`` for L∞.

    Raises
    ------
    ArgumentError
        If ``d < 1``.

    Notes
    -----
    Exact integer factorials are used for L1 up to ``d = 20``; every other
    case goes through log-Gamma to avoid overflow.
    """
    norm = NormKind.parse(norm)
    if int(d) != d or d < 1:
        raise ArgumentError(f"Dimension must be an integer >= 1, got {d}")
    d = int(d)
    if norm is NormKind.L1 and d <= _EXACT_FACTORIAL_MAX_D:
        return 2.0**d / math.factorial(d)
    if norm is NormKind.LINF:
        return 2.0**d
    return math.exp(log_unit_ball_volume(norm, d))
