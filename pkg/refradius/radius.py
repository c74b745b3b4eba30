"""
Reference-rule radius for correlation-sum based measures.

The correlation sum is a kernel density estimator with a uniform kernel over
an L_p ball whose bandwidth is the radius. Minimising the asymptotic mean
integrated squared error of that estimator for a Gaussian reference density
gives the closed-form radius

.. math::

    r_{opt} = \\alpha_{p,d} \\, \\hat{s} \\, n^{-1/(d+4)}

with ``ŝ = min(σ̂, IQR/1.34)`` and ``n`` the number of trajectory points.

This module computes the coefficient :math:`\\alpha_{p,d}` (closed forms and
the general Gamma-function expression), the spread estimate, the reference
radius, the meaningful fitting range ``[β r_opt, r_opt]``, the empirical
radius rules found in the literature, and the bias/variance scale factors of
the estimator.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaln

from .errors import ArgumentError, DegenerateInputError
from .norms import NormKind, TimeSeries, Trajectory, log_unit_ball_volume, pairwise_distances, unit_ball_volume

logger = logging.getLogger(__name__)

IQR_GAUSSIAN_SCALE = 1.34
ALPHA_1D = (12.0 * math.sqrt(math.pi)) ** 0.2


def _check_dimension(d: int, minimum: int = 1) -> int:
    if int(d) != d or d < minimum:
        raise ArgumentError(f"Dimension must be an integer >= {minimum}, got {d}")
    return int(d)


#####################
# COEFFICIENT       #
#####################
def alpha_coefficient(norm: NormKind, d: int) -> float:
    """
    Coefficient of the reference rule, simplified closed forms.

    Parameters
    ----------
    norm : NormKind
        Norm of the phase space.
    d : int
        Dimension (``>= 1``).

    Returns
    -------
    float
        ``(12√π)^(1/5)`` when ``d = 1`` for every norm, otherwise

        - L1: ``[(d+2)! (d+1) π^(d/2)]^(1/(d+4))``
        - L2: ``2 [Γ(d/2 + 2) / 2]^(1/(d+4))``
        - L∞: ``[36 π^(d/2) / (d+2)]^(1/(d+4))``

    Raises
    ------
    ArgumentError
        If ``d < 1``.

    See Also
    --------
    :func:`alpha_general`
    """
    norm = NormKind.parse(norm)
    d = _check_dimension(d)
    if d == 1:
        return ALPHA_1D
    half_log_pi = 0.5 * d * math.log(math.pi)
    if norm is NormKind.L1:
        log_value = float(gammaln(d + 3)) + math.log(d + 1) + half_log_pi
        return math.exp(log_value / (d + 4))
    if norm is NormKind.L2:
        return 2.0 * math.exp((float(gammaln(0.5 * d + 2)) - math.log(2.0)) / (d + 4))
    return math.exp((math.log(36.0) + half_log_pi - math.log(d + 2)) / (d + 4))


def alpha_general(norm: NormKind, d: int) -> float:
    """
    Coefficient of the reference rule, general Gamma-function expression.

    Evaluates

    .. math::

        \\alpha_{p,d} = \\left[\\frac{4 (2\\sqrt{\\pi})^d
        \\left(3\\,\\Gamma(\\tfrac{d+2}{p}+1)\\,\\Gamma(\\tfrac{1}{p}+1)\\right)^2}
        {\\tau_{p,d}\\,(d+2)\\left(\\Gamma(\\tfrac{d}{p}+1)\\,\\Gamma(1+\\tfrac{3}{p})\\right)^2}
        \\right]^{1/(d+4)}

    with the general unit-ball volume
    ``τ_{p,d} = (2 Γ(1/p + 1))^d / Γ(d/p + 1)``. It must agree with
    :func:`alpha_coefficient`, which is how the simplified forms are checked.

    Parameters
    ----------
    norm : NormKind
        Norm of the phase space.
    d : int
        Dimension (``>= 2``).

    Returns
    -------
    float
        The coefficient.

    Raises
    ------
    ArgumentError
        If ``d < 2``.
    """
    norm = NormKind.parse(norm)
    d = _check_dimension(d, minimum=2)
    q = norm.inverse_p
    log_tau = d * (math.log(2.0) + float(gammaln(q + 1))) - float(gammaln(d * q + 1))
    numerator = (
        math.log(4.0)
        + d * math.log(2.0 * math.sqrt(math.pi))
        + 2.0 * (math.log(3.0) + float(gammaln((d + 2) * q + 1)) + float(gammaln(q + 1)))
    )
    denominator = log_tau + math.log(d + 2) + 2.0 * (float(gammaln(d * q + 1)) + float(gammaln(1 + 3 * q)))
    return math.exp((numerator - denominator) / (d + 4))


def coefficient_table(dims: Iterable[int] = range(1, 6)) -> list[tuple[str, int, float]]:
    """
    Rows ``(p, d, alpha)`` of the coefficient table.

    Parameters
    ----------
    dims : iterable of int, optional
        Dimensions to tabulate. Defaults to ``1..5``.

    Returns
    -------
    list of tuple
        One row per (norm, dimension), norms in the order L1, L2, L∞.
    """
    labels = {NormKind.L1: "1", NormKind.L2: "2", NormKind.LINF: "inf"}
    return [(labels[norm], d, alpha_coefficient(norm, d)) for norm in NormKind for d in dims]


#####################
# SPREAD            #
#####################
def _as_matrix(data: TimeSeries | Trajectory | np.ndarray) -> np.ndarray:
    if isinstance(data, TimeSeries):
        return data.values.reshape(-1, 1)
    if isinstance(data, Trajectory):
        return data.points
    array = np.asarray(data, dtype=float)
    return array.reshape(-1, 1) if array.ndim == 1 else array


def spread_components(data: TimeSeries | Trajectory | np.ndarray) -> tuple[float, float]:
    """
    Marginal standard deviation and interquartile range.

    Parameters
    ----------
    data : TimeSeries, Trajectory or array_like
        Series (1-D) or trajectory (``(n, d)``).

    Returns
    -------
    tuple of float
        ``(σ̂, IQR)`` where ``σ̂ = sqrt(trace(S)/d)`` (sample covariance,
        ``n − 1`` denominator) and ``IQR`` is the average of the marginal
        interquartile ranges (linear interpolation between order statistics).

    Raises
    ------
    ArgumentError
        If fewer than two samples are given.
    """
    matrix = _as_matrix(data)
    if matrix.shape[0] < 2:
        raise ArgumentError(f"Spread needs at least 2 samples, got {matrix.shape[0]}")
    sigma = math.sqrt(float(np.mean(np.var(matrix, axis=0, ddof=1))))
    q75, q25 = np.percentile(matrix, [75, 25], axis=0)
    iqr = float(np.mean(q75 - q25))
    return sigma, iqr


def spread_estimate(data: TimeSeries | Trajectory | np.ndarray) -> float:
    """
    Robust spread ``ŝ = min(σ̂, IQR/1.34)``.

    Parameters
    ----------
    data : TimeSeries, Trajectory or array_like
        Series or trajectory.

    Returns
    -------
    float
        Positive spread, in signal units.

    Raises
    ------
    DegenerateInputError
        If the spread is zero (constant input).

    See Also
    --------
    :func:`spread_components`
    """
    sigma, iqr = spread_components(data)
    spread = min(sigma, iqr / IQR_GAUSSIAN_SCALE)
    if not spread > 0:
        raise DegenerateInputError(f"Input has no spread (sigma={sigma}, IQR={iqr})")
    return spread


#####################
# REFERENCE RADIUS  #
#####################
@dataclass(frozen=True)
class RadiusSelection:
    """
    Outcome of the reference rule.

    Attributes
    ----------
    r_opt : float
        Reference radius, ``alpha * spread * n^(-1/(d+4))``.
    alpha : float
        Coefficient for ``(norm, d)``.
    spread : float
        Spread estimate used.
    n : int
        Trajectory length.
    d : int
        Dimension.
    norm : NormKind
        Norm.
    """

    r_opt: float
    alpha: float
    spread: float
    n: int
    d: int
    norm: NormKind

    def as_dict(self) -> dict[str, object]:
        """Plain mapping suitable for a JSON summary."""
        return {
            "alpha": self.alpha,
            "spread": self.spread,
            "n": self.n,
            "d": self.d,
            "norm": self.norm.value,
            "r_opt": self.r_opt,
        }


def reference_radius(spread: float, n: int, d: int, norm: NormKind = NormKind.L2) -> RadiusSelection:
    """
    Reference-rule radius.

    Parameters
    ----------
    spread : float
        Spread estimate ``ŝ`` (``> 0``).
    n : int
        Trajectory length (``>= 2``). For a delay embedding of ``N`` samples
        this is ``N − (d − 1) τ``.
    d : int
        Dimension (``>= 1``).
    norm : NormKind, optional
        Norm. Defaults to L2.

    Returns
    -------
    RadiusSelection
        Radius and the quantities it was built from.

    Raises
    ------
    ArgumentError
        If ``spread <= 0``, ``n < 2`` or ``d < 1``.
    """
    norm = NormKind.parse(norm)
    if not (spread > 0 and math.isfinite(spread)):
        raise ArgumentError(f"Spread must be positive, got {spread}")
    if int(n) != n or n < 2:
        raise ArgumentError(f"Trajectory length must be an integer >= 2, got {n}")
    alpha = alpha_coefficient(norm, d)
    r_opt = alpha * spread * float(n) ** (-1.0 / (d + 4))
    logger.debug("Reference radius %.6g (alpha=%.4f, spread=%.6g, n=%d, d=%d)", r_opt, alpha, spread, n, d)
    return RadiusSelection(r_opt=r_opt, alpha=alpha, spread=float(spread), n=int(n), d=int(d), norm=norm)


def reference_radius_for(trajectory: Trajectory) -> RadiusSelection:
    """Reference radius of a trajectory from its own spread, length, dimension and norm."""
    return reference_radius(spread_estimate(trajectory), trajectory.n, trajectory.d, trajectory.norm)


@dataclass(frozen=True)
class RadiusRange:
    """
    Meaningful radius range ``[beta * upper, upper]``.

    Attributes
    ----------
    lower : float
        Lower bound.
    upper : float
        Upper bound.
    beta : float
        Ratio ``lower / upper`` in ``(0, 1)``.
    """

    lower: float
    upper: float
    beta: float

    def __post_init__(self) -> None:
        if not 0 < self.beta < 1:
            raise ArgumentError(f"Range parameter beta must be in (0, 1), got {self.beta}")
        if not (0 < self.lower < self.upper):
            raise ArgumentError(f"Invalid radius range [{self.lower}, {self.upper}]")

    def scaled(self, factor: float) -> RadiusRange:
        """Return the range with both bounds multiplied by ``factor``."""
        return RadiusRange(self.lower * factor, self.upper * factor, self.beta)


def radius_range(selection: RadiusSelection | float, beta: float) -> RadiusRange:
    """
    Meaningful range below the reference radius.

    Parameters
    ----------
    selection : RadiusSelection or float
        Reference rule outcome, or the upper radius directly.
    beta : float
        Range parameter in the open interval ``(0, 1)``.

    Returns
    -------
    RadiusRange
        ``[beta * r_opt, r_opt]``.

    Raises
    ------
    ArgumentError
        If ``beta`` is outside ``(0, 1)``.
    """
    if not 0 < beta < 1:
        raise ArgumentError(f"Range parameter beta must be in (0, 1), got {beta}")
    upper = selection.r_opt if isinstance(selection, RadiusSelection) else float(selection)
    return RadiusRange(lower=beta * upper, upper=upper, beta=float(beta))


#####################
# BASELINE RULES    #
#####################
class BaselineKind(Enum):
    """Empirical radius rules."""

    FRACTION_OF_SIGMA = "fraction_of_sigma"
    FRACTION_OF_MAX_EXTENT = "fraction_of_max_extent"
    FIXED_RECURRENCE_RATE = "fixed_recurrence_rate"


@dataclass(frozen=True)
class BaselineRule:
    """
    An empirical radius rule and its parameter.

    Attributes
    ----------
    kind : BaselineKind
        Which rule.
    value : float
        Fraction ``c > 0`` of the scale, or recurrence rate ``q`` in ``(0, 1)``.
    """

    kind: BaselineKind
    value: float

    def __post_init__(self) -> None:
        if self.kind is BaselineKind.FIXED_RECURRENCE_RATE:
            if not 0 < self.value < 1:
                raise ArgumentError(f"Recurrence rate must be in (0, 1), got {self.value}")
        elif not self.value > 0:
            raise ArgumentError(f"Fraction must be positive, got {self.value}")

    @classmethod
    def fraction_of_sigma(cls, c: float) -> BaselineRule:
        """``r = c σ̂``."""
        return cls(BaselineKind.FRACTION_OF_SIGMA, c)

    @classmethod
    def fraction_of_max_extent(cls, c: float) -> BaselineRule:
        """``r = c`` times the largest pairwise distance."""
        return cls(BaselineKind.FRACTION_OF_MAX_EXTENT, c)

    @classmethod
    def fixed_recurrence_rate(cls, q: float) -> BaselineRule:
        """Radius at which a fraction ``q`` of the pairs recur."""
        return cls(BaselineKind.FIXED_RECURRENCE_RATE, q)

    @property
    def label(self) -> str:
        """Short name used in comparison tables, e.g. ``0.2sigma``."""
        if self.kind is BaselineKind.FRACTION_OF_SIGMA:
            return f"{self.value:g}sigma"
        if self.kind is BaselineKind.FRACTION_OF_MAX_EXTENT:
            return f"{self.value:g}max_extent"
        return f"rr{self.value:g}"


def baseline_radius(trajectory: Trajectory, rule: BaselineRule) -> float:
    """
    Radius given by an empirical rule.

    Parameters
    ----------
    trajectory : Trajectory
        Trajectory the radius is chosen for.
    rule : BaselineRule
        ``fraction_of_sigma(c)`` returns ``c σ̂``; ``fraction_of_max_extent(c)``
        returns ``c`` times the largest pairwise distance;
        ``fixed_recurrence_rate(q)`` returns the ``q``-quantile of the
        pairwise distances (self-pairs excluded, linear interpolation).

    Returns
    -------
    float
        Positive radius.

    Raises
    ------
    DegenerateInputError
        If all points are identical.
    """
    if rule.kind is BaselineKind.FRACTION_OF_SIGMA:
        sigma, _ = spread_components(trajectory)
        if not sigma > 0:
            raise DegenerateInputError("All trajectory points are identical")
        return rule.value * sigma

    distances = pairwise_distances(trajectory)
    extent = float(distances.max())
    if not extent > 0:
        raise DegenerateInputError("All trajectory points are identical")
    if rule.kind is BaselineKind.FRACTION_OF_MAX_EXTENT:
        return rule.value * extent
    radius = float(np.quantile(distances, rule.value))
    if not radius > 0:
        raise DegenerateInputError(f"The {rule.value} quantile of pairwise distances is zero")
    return radius


#####################
# BIAS / VARIANCE   #
#####################
def kernel_roughness(norm: NormKind, d: int) -> float:
    """``W1(K) = ∫K² = 1/τ_{p,d}`` for the uniform kernel on the unit ball."""
    return 1.0 / unit_ball_volume(norm, d)


def kernel_second_moment(norm: NormKind, d: int) -> float:
    """
    Second moment of one coordinate under the uniform kernel.

    Returns
    -------
    float
        ``W2(K) = Γ(d/p+1) Γ(1+3/p) / (3 Γ((d+2)/p+1) Γ(1/p+1))``; ``1/3`` for ``d = 1``.
    """
    norm = NormKind.parse(norm)
    d = _check_dimension(d)
    q = norm.inverse_p
    log_value = (
        float(gammaln(d * q + 1))
        + float(gammaln(1 + 3 * q))
        - math.log(3.0)
        - float(gammaln((d + 2) * q + 1))
        - float(gammaln(q + 1))
    )
    return math.exp(log_value)


@dataclass(frozen=True)
class AmiseScales:
    """
    Radius- and length-dependent factors of the estimator error.

    The density-dependent factors (the Laplacian of the density for the bias
    and the density itself for the variance) are not estimated and not
    included.

    Attributes
    ----------
    bias_scale : float
        ``(r²/2) W2(K)``.
    variance_scale : float
        ``W1(K) / (n r^d)``.
    """

    bias_scale: float
    variance_scale: float


def amise_bias_variance(r: float, n: int, d: int, norm: NormKind = NormKind.L2) -> AmiseScales:
    """
    Bias and variance scale factors at radius ``r``.

    Parameters
    ----------
    r : float
        Radius (``> 0``).
    n : int
        Trajectory length.
    d : int
        Dimension.
    norm : NormKind, optional
        Norm. Defaults to L2.

    Returns
    -------
    AmiseScales
        ``bias_scale`` grows as ``r²``; ``variance_scale`` decays as ``1/(n r^d)``.

    Raises
    ------
    ArgumentError
        If ``r <= 0`` or ``n < 1``.
    """
    if not r > 0:
        raise ArgumentError(f"Radius must be positive, got {r}")
    if n < 1:
        raise ArgumentError(f"Trajectory length must be positive, got {n}")
    bias = 0.5 * r * r * kernel_second_moment(norm, d)
    log_variance = -log_unit_ball_volume(norm, d) - math.log(n) - d * math.log(r)
    return AmiseScales(bias_scale=bias, variance_scale=math.exp(log_variance))
