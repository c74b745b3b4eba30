"""
Benchmark dynamical systems.

Two flows, :class:`Lorenz` and :class:`Rossler`, integrated with the
adaptive Dormand–Prince 5(4) scheme of :func:`scipy.integrate.solve_ivp` and
sampled at a fixed step, and one map, :class:`Henon`, iterated exactly.
:func:`generate` draws a seeded initial state near the attractor, drops a
transient and returns the x coordinate as a :class:`~refradius.norms.TimeSeries`.

Examples
--------
>>> result = generate(SystemSpec(Henon(), length=3, transient=0, initial_state=(0.0, 0.0)))
>>> result.series.values.tolist()
[0.0, 1.0, -0.4]
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ArgumentError, DivergenceError
from .norms import TimeSeries
from .protocols import DynamicalSystem
from .seeding import make_rng

logger = logging.getLogger(__name__)

DIVERGENCE_BOUND = 1e6
DEFAULT_RTOL = 1e-9
DEFAULT_ATOL = 1e-12
FLOW_TRANSIENT = 1000
MAP_TRANSIENT = 100


@dataclass(frozen=True)
class Lorenz:
    """Lorenz flow ``x' = σ(y − x)``, ``y' = x(ρ − z) − y``, ``z' = xy − βz``."""

    sigma: float = 10.0
    beta: float = 8.0 / 3.0
    rho: float = 28.0
    dt: float = 0.01

    name = "lorenz"
    is_flow = True
    state_dim = 3

    def rhs(self, _t: float, state: np.ndarray) -> list[float]:
        """Time derivative of ``state``."""
        x, y, z = state
        return [self.sigma * (y - x), x * (self.rho - z) - y, x * y - self.beta * z]

    def initial_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Bounds of the uniform initial-state draw."""
        # z offset keeps draws away from the origin equilibrium
        return np.array([-10.0, -10.0, 10.0]), np.array([10.0, 10.0, 30.0])


@dataclass(frozen=True)
class Rossler:
    """Rössler flow ``x' = −y − z``, ``y' = x + ay``, ``z' = b + z(x − c)``."""

    a: float = 0.1
    b: float = 0.1
    c: float = 14.0
    dt: float = 0.05

    name = "rossler"
    is_flow = True
    state_dim = 3

    def rhs(self, _t: float, state: np.ndarray) -> list[float]:
        """Time derivative of ``state``."""
        x, y, z = state
        return [-y - z, x + self.a * y, self.b + z * (x - self.c)]

    def initial_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Bounds of the uniform initial-state draw."""
        return np.full(3, -5.0), np.full(3, 5.0)


@dataclass(frozen=True)
class Henon:
    """Hénon map ``x' = 1 − a x² + y``, ``y' = b x``."""

    a: float = 1.4
    b: float = 0.3

    name = "henon"
    is_flow = False
    state_dim = 2
    dt = 1.0

    def step(self, state: np.ndarray) -> np.ndarray:
        """Image of ``state`` under the map."""
        x, y = state
        return np.array([1.0 - self.a * x * x + y, self.b * x])

    def initial_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Bounds of the uniform initial-state draw, inside the basin of the attractor."""
        return np.full(2, -0.1), np.full(2, 0.1)


SYSTEMS: dict[str, type] = {"lorenz": Lorenz, "rossler": Rossler, "henon": Henon}


def system_by_name(name: str) -> DynamicalSystem:
    """Return the system called ``name`` with its canonical parameters."""
    try:
        return SYSTEMS[name.strip().lower()]()
    except KeyError:
        raise ArgumentError(f"Unknown system {name!r}, expected one of {sorted(SYSTEMS)}") from None


@dataclass(frozen=True)
class SystemSpec:
    """
    Everything needed to reproduce one generated trajectory.

    Attributes
    ----------
    system : DynamicalSystem
        :class:`Lorenz`, :class:`Rossler` or :class:`Henon`.
    length : int
        Number of output samples (``>= 2``).
    seed : int
        Seed of the initial-state draw.
    transient : int or None
        Samples discarded before the output. ``None`` selects 1000 for flows
        and 100 for maps.
    initial_state : sequence of float, optional
        Fixed initial state, bypassing the seeded draw.
    rtol, atol : float
        Integrator tolerances for flows.
    """

    system: DynamicalSystem
    length: int
    seed: int = 0
    transient: int | None = None
    initial_state: Sequence[float] | None = None
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL

    def __post_init__(self) -> None:
        if int(self.length) != self.length or self.length < 2:
            raise ArgumentError(f"Length must be an integer >= 2, got {self.length}")
        if self.transient is not None and (int(self.transient) != self.transient or self.transient < 0):
            raise ArgumentError(f"Transient must be a nonnegative integer, got {self.transient}")
        if not self.system.dt > 0:
            raise ArgumentError(f"Sampling step must be positive, got {self.system.dt}")
        if self.initial_state is not None and len(self.initial_state) != self.system.state_dim:
            raise ArgumentError(
                f"{self.system.name} needs a {self.system.state_dim}-dimensional initial state, "
                f"got {len(self.initial_state)}"
            )

    @property
    def discarded(self) -> int:
        """Effective number of transient samples."""
        if self.transient is not None:
            return int(self.transient)
        return FLOW_TRANSIENT if self.system.is_flow else MAP_TRANSIENT


@dataclass(frozen=True)
class GeneratedSystem:
    """
    Output of :func:`generate`.

    Attributes
    ----------
    series : TimeSeries
        x coordinate, with the system's sampling step.
    states : numpy.ndarray
        ``(length, state_dim)`` full states of the output samples.
    initial_state : numpy.ndarray
        State the run started from, before the transient.
    """

    series: TimeSeries
    states: np.ndarray
    initial_state: np.ndarray = field(repr=False)

    @property
    def times(self) -> np.ndarray:
        """Sample times relative to the first output sample."""
        return np.arange(len(self.series)) * self.series.dt


def draw_initial_state(system: DynamicalSystem, seed: int) -> np.ndarray:
    """Uniform draw inside the system's initial box."""
    low, high = system.initial_box()
    return make_rng(seed).uniform(low, high)


def _check_bounded(states: np.ndarray, system: DynamicalSystem) -> None:
    if not np.all(np.isfinite(states)) or np.any(np.abs(states) > DIVERGENCE_BOUND):
        raise DivergenceError(f"{system.name} trajectory left the region |state| <= {DIVERGENCE_BOUND:g}")


def _iterate_map(system: Henon, start: np.ndarray, total: int) -> np.ndarray:
    states = np.empty((total, system.state_dim))
    state = start
    for i in range(total):
        states[i] = state
        if not np.all(np.abs(state) <= DIVERGENCE_BOUND):
            raise DivergenceError(f"{system.name} orbit left the region |state| <= {DIVERGENCE_BOUND:g} at step {i}")
        state = system.step(state)
    return states


def _integrate_flow(system: DynamicalSystem, start: np.ndarray, total: int, rtol: float, atol: float) -> np.ndarray:
    times = np.arange(total) * system.dt

    def escaped(_t: float, state: np.ndarray) -> float:
        return DIVERGENCE_BOUND - float(np.max(np.abs(state)))

    escaped.terminal = True
    solution = solve_ivp(
        system.rhs,
        (0.0, float(times[-1])),
        start,
        method="RK45",
        t_eval=times,
        rtol=rtol,
        atol=atol,
        events=escaped,
    )
    if solution.status == 1:
        raise DivergenceError(f"{system.name} trajectory left the region |state| <= {DIVERGENCE_BOUND:g}")
    if not solution.success:
        raise DivergenceError(f"{system.name} integration failed: {solution.message}")
    return solution.y.T


def generate(spec: SystemSpec) -> GeneratedSystem:
    """
    Generate a trajectory of a benchmark system.

    Parameters
    ----------
    spec : SystemSpec
        System, length, seed and transient.

    Returns
    -------
    GeneratedSystem
        ``spec.length`` samples following the discarded transient. With no
        transient the first sample is the initial state itself.

    Raises
    ------
    DivergenceError
        If the state leaves ``|state| <= 1e6`` or the integrator fails.
    """
    system = spec.system
    if spec.initial_state is not None:
        start = np.asarray(spec.initial_state, dtype=float)
    else:
        start = draw_initial_state(system, spec.seed)
    total = spec.discarded + int(spec.length)
    if system.is_flow:
        states = _integrate_flow(system, start, total, spec.rtol, spec.atol)
    else:
        states = _iterate_map(system, start, total)
    _check_bounded(states, system)
    states = states[spec.discarded :]
    logger.debug(
        "Generated %s: %d samples after %d transient, seed=%d", system.name, spec.length, spec.discarded, spec.seed
    )
    return GeneratedSystem(
        series=TimeSeries(states[:, 0], dt=system.dt),
        states=np.ascontiguousarray(states),
        initial_state=start,
    )


def add_observational_noise(series: TimeSeries, k: float, seed: int) -> TimeSeries:
    """
    Add white Gaussian measurement noise.

    Parameters
    ----------
    series : TimeSeries
        Clean series.
    k : float
        Noise level (``>= 0``); the noise standard deviation is ``k`` times
        the sample standard deviation of ``series``.
    seed : int
        Seed of the noise draw.

    Returns
    -------
    TimeSeries
        ``series`` itself when ``k = 0``, otherwise a noisy copy.

    Raises
    ------
    ArgumentError
        If ``k < 0``.
    """
    if not k >= 0:
        raise ArgumentError(f"Noise level must be >= 0, got {k}")
    if k == 0:
        return series
    scale = k * float(np.std(series.values, ddof=1))
    noise = make_rng(seed).normal(0.0, scale, size=len(series))
    return series.replace_values(series.values + noise)
