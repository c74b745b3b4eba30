"""
Experiment configuration.

This module defines the :class:`ExperimentConfig` class. Settings come from
three layers, lowest precedence first: built-in defaults, a flat
``key = value`` file, and command-line flags. Every setting has a flag named
after its key (``grid_points`` is ``--grid-points``). List values are
comma-separated; ``#`` starts a comment.

Examples
--------
>>> config = ExperimentConfig()
>>> config.apply_overrides({"system": "lorenz", "lengths": "1000,4000"})
>>> config.lengths
[1000, 4000]
"""

from __future__ import annotations

import argparse
import logging
import math
from collections.abc import Iterator, Mapping
from pathlib import Path
from typing import Any

import numpy as np

from .embedding import DEFAULT_MI_BINS
from .errors import ArgumentError, ParseError
from .field import BoolField, ChoiceField, ConfigField, FloatField, IntField, ListField, StrField
from .norms import NormKind
from .protocols import DynamicalSystem
from .systems import SYSTEMS, system_by_name

logger = logging.getLogger(__name__)

AUTO_DELAY = "auto-mi"


def _parse_delay(text: str) -> int | str:
    if text.lower() == AUTO_DELAY:
        return AUTO_DELAY
    delay = int(text)
    if delay < 1:
        raise ArgumentError(f"delay must be an integer >= 1 or {AUTO_DELAY!r}, got {delay}")
    return delay


def _parse_beta(text: str) -> float:
    beta = float(text)
    if not 0 < beta < 1:
        raise ArgumentError(f"betas must lie in (0, 1), got {beta}")
    return beta


class ExperimentConfig:
    """
    Settings of one experiment.

    Every attribute listed below is a :class:`~refradius.field.ConfigField`
    reading from :attr:`store`; assigning an attribute validates the value.

    Attributes
    ----------
    store : dict of str to str
        Raw values set from a file or flags.
    system : str
        Benchmark system (``henon``, ``lorenz`` or ``rossler``).
    inputs : list of str or None
        Series files used instead of a generated system.
    lengths : list of int
        Series lengths ``N``.
    noise_levels : list of float
        Observational noise levels ``k``.
    seeds : int
        Runs per (length, noise level).
    master_seed : int
        Seed every run seed is derived from.
    embedding_dim : int
        Embedding dimension ``d``.
    delay : int or str
        Delay ``τ`` or ``"auto-mi"``.
    mi_bins : int
        Histogram bins of the mutual-information scan.
    norm : NormKind
        Norm.
    betas : list of float
        Range parameters, each in ``(0, 1)``.
    grid_points, grid_min, grid_max_sigma
        Correlation-sum radius grids.
    estimator : str
        ``corrdim`` or ``k2``.
    log_r_min, log_r_max, k2_radii
        K2 radius grid, natural logarithms.
    m_lo, m_hi, count_floor
        K2 regression range and count floor.
    truth : float or None
        Reference value of the estimated quantity, enabling MSE tables.
    bootstrap_resamples : int
        Resamples of bootstrap intervals.
    include_self_pairs : bool
        Count ``i = j`` pairs in correlation sums and line histograms.
    transient : int or None
        Samples discarded from generated series; ``None`` uses the system default.
    workers : int
        Worker processes; ``1`` runs serially.
    output_dir : Path
        Directory receiving all outputs.
    dt : float
        Time per sample of input files; generated systems use their own step.

    Methods
    -------
    from_file(path: str | Path) -> ExperimentConfig
        Read a ``key = value`` file.
    apply_overrides(values: Mapping[str, Any]) -> None
        Apply values that are not ``None``.
    validate() -> None
        Check every setting and the cross-setting constraints.
    """

    system = ChoiceField("system", sorted(SYSTEMS), default="henon", help="benchmark system")
    inputs = ListField("inputs", str, help="comma-separated series files used instead of a system")
    lengths = ListField("lengths", int, default="200", minimum=2, help="series lengths N")
    noise_levels = ListField("noise_levels", float, default="0", minimum=0, help="observational noise levels k")
    seeds = IntField("seeds", default=1, minimum=1, help="runs per length and noise level")
    master_seed = IntField("master_seed", default=0, minimum=0, help="seed of all derived run seeds")
    embedding_dim = IntField("embedding_dim", default=2, minimum=1, help="embedding dimension d")
    _delay = ConfigField("delay", parse=_parse_delay, default="1", help="delay tau or 'auto-mi'")
    mi_bins = IntField("mi_bins", default=DEFAULT_MI_BINS, minimum=2, help="mutual information histogram bins")
    _norm = ConfigField(
        "norm", parse=NormKind.parse, format=lambda norm: norm.value, default="l2", help="l1, l2 or linf"
    )
    betas = ListField("betas", _parse_beta, default="0.01,0.1,0.5", help="range parameters in (0, 1)")
    grid_points = IntField("grid_points", default=20, minimum=2, help="radii per correlation grid")
    grid_min = FloatField("grid_min", default=1e-8, minimum=0, help="smallest radius of the full-range grid")
    grid_max_sigma = FloatField("grid_max_sigma", default=2.0, minimum=0, help="largest full-range radius, in sigma")
    estimator = ChoiceField("estimator", ("corrdim", "k2"), default="corrdim", help="corrdim or k2")
    log_r_min = FloatField("log_r_min", default=-4.0, help="smallest K2 radius, natural log")
    log_r_max = FloatField("log_r_max", default=0.5, help="largest K2 radius, natural log")
    k2_radii = IntField("k2_radii", default=50, minimum=2, help="radii of the K2 grid")
    m_lo = IntField("m_lo", default=2, minimum=1, help="first line length of the K2 fit")
    m_hi = IntField("m_hi", default=8, minimum=2, help="last line length of the K2 fit")
    count_floor = FloatField("count_floor", default=10, minimum=0, help="smallest accepted diagonal count")
    truth = FloatField("truth", help="true value of the estimated quantity, enables MSE tables")
    bootstrap_resamples = IntField("bootstrap_resamples", default=1000, minimum=100, help="bootstrap resamples")
    include_self_pairs = BoolField("include_self_pairs", default=True, help="count i = j pairs")
    transient = IntField("transient", minimum=0, help="samples discarded from generated series")
    dt = FloatField("dt", default=1.0, minimum=0, help="time per sample of input files")
    workers = IntField("workers", default=1, minimum=1, help="worker processes")
    _output_dir = StrField("output_dir", default="out", help="output directory")

    def __init__(self, values: Mapping[str, Any] | None = None) -> None:
        """
        Initialize a configuration holding only defaults.

        Parameters
        ----------
        values : mapping, optional
            Initial overrides, see :meth:`apply_overrides`.
        """
        self.store: dict[str, str] = {}
        if values:
            self.apply_overrides(values)

    @classmethod
    def fields(cls) -> Iterator[ConfigField]:
        """Descriptors of every setting, in declaration order."""
        for attribute in vars(cls).values():
            if isinstance(attribute, ConfigField):
                yield attribute

    @classmethod
    def field(cls, key: str) -> ConfigField:
        """Descriptor of the setting named ``key``."""
        for candidate in cls.fields():
            if candidate.key == key:
                return candidate
        raise ParseError(f"Unknown setting {key!r}")

    def set(self, key: str, value: Any) -> None:
        """Assign the setting ``key`` through its descriptor."""
        self.field(key).__set__(self, value)

    def get(self, key: str) -> Any:
        """Parsed value of the setting ``key``."""
        return self.field(key).__get__(self, type(self))

    @property
    def delay(self) -> int | str:
        """Delay in samples, or ``"auto-mi"``."""
        return self._delay

    @delay.setter
    def delay(self, value: int | str) -> None:
        self._delay = value

    @property
    def norm(self) -> NormKind:
        """Distance norm of the embedding."""
        return self._norm

    @norm.setter
    def norm(self, value: NormKind | str) -> None:
        self._norm = value

    @property
    def output_dir(self) -> Path:
        """Directory receiving the result files."""
        return Path(self._output_dir)

    @output_dir.setter
    def output_dir(self, value: str | Path) -> None:
        self._output_dir = str(value)

    def system_instance(self) -> DynamicalSystem:
        """Benchmark system with its canonical parameters."""
        return system_by_name(self.system)

    def k2_grid(self) -> np.ndarray:
        """``k2_radii`` radii equally spaced in ``log r`` over ``[log_r_min, log_r_max]``."""
        return np.exp(np.linspace(self.log_r_min, self.log_r_max, self.k2_radii))

    #####################
    # SOURCES           #
    #####################
    @classmethod
    def from_file(cls, path: str | Path) -> ExperimentConfig:
        """
        Read a configuration file.

        Parameters
        ----------
        path : str or Path
            File of ``key = value`` lines. Blank lines and text after ``#`` are
            ignored.

        Returns
        -------
        ExperimentConfig
            Configuration with the file's values over the defaults.

        Raises
        ------
        ParseError
            If a line has no ``=``, names an unknown key, repeats a key or holds
            a malformed value. The message carries the line number.
        ArgumentError
            If a value is outside its domain.
        """
        path = Path(path)
        config = cls()
        seen: set[str] = set()
        with path.open(encoding="utf-8") as handle:
            for number, line in enumerate(handle, start=1):
                text = line.split("#", 1)[0].strip()
                if not text:
                    continue
                key, sep, value = text.partition("=")
                if not sep:
                    raise ParseError("expected 'key = value'", path, number)
                key = key.strip().replace("-", "_")
                if key in seen:
                    raise ParseError(f"duplicate setting {key!r}", path, number)
                seen.add(key)
                try:
                    config.set(key, value.strip())
                except ParseError as e:
                    raise ParseError(str(e), path, number) from e
        logger.debug("Read %d settings from %s", len(seen), path)
        return config

    def apply_overrides(self, values: Mapping[str, Any]) -> None:
        """
        Apply setting values, skipping ``None``.

        Parameters
        ----------
        values : mapping
            ``key -> value``; strings are parsed, other values formatted.
        """
        for key, value in values.items():
            if value is not None:
                self.set(key, value)

    @classmethod
    def add_arguments(cls, parser: argparse.ArgumentParser) -> None:
        """Register one optional string flag per setting on ``parser``."""
        group = parser.add_argument_group("experiment settings")
        for setting in cls.fields():
            default = f" (default: {setting.default})" if setting.default is not None else ""
            group.add_argument(
                setting.flag, dest=setting.key, default=None, metavar="VALUE", help=setting.help + default
            )

    @classmethod
    def from_arguments(cls, arguments: argparse.Namespace) -> ExperimentConfig:
        """Build a configuration from an optional ``config`` file plus flag overrides."""
        config_path = getattr(arguments, "config", None)
        config = cls.from_file(config_path) if config_path else cls()
        config.apply_overrides({setting.key: getattr(arguments, setting.key, None) for setting in cls.fields()})
        return config

    def validate(self) -> None:
        """
        Check every setting and the constraints between settings.

        Raises
        ------
        ArgumentError
            If a setting is out of range, an input file is missing, or the
            K2 grid or fit range is empty.
        ParseError
            If a stored value is malformed.
        """
        for setting in self.fields():
            setting.__get__(self, type(self))
        if self.inputs:
            missing = [name for name in self.inputs if not Path(name).is_file()]
            if missing:
                raise ArgumentError(f"Input file(s) not found: {', '.join(missing)}")
        if self.m_hi <= self.m_lo:
            raise ArgumentError(f"m_hi must exceed m_lo, got m_lo={self.m_lo}, m_hi={self.m_hi}")
        if not self.log_r_min < self.log_r_max:
            raise ArgumentError(f"log_r_min must be below log_r_max, got [{self.log_r_min}, {self.log_r_max}]")
        if not math.isfinite(self.grid_min) or self.grid_min <= 0:
            raise ArgumentError(f"grid_min must be positive, got {self.grid_min}")
        if not self.dt > 0:
            raise ArgumentError(f"dt must be positive, got {self.dt}")

    def as_dict(self) -> dict[str, str | None]:
        """Effective raw value of every setting, for manifests."""
        return {setting.key: setting.raw(self) for setting in self.fields()}
