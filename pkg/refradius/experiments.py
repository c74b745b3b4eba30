"""
Experiment drivers behind the command-line sub-commands.

A run is one (series source, length, noise level, seed index) combination.
Runs are independent: they execute serially or in a process pool, and their
results are collected in plan order, so output files do not depend on the
number of workers. A run that fails records the error class in the ``error``
column of its rows and the experiment continues.

Every random draw is seeded from ``master_seed`` with
:func:`~refradius.seeding.derive_seed`, keyed by the run coordinates.
"""

from __future__ import annotations

import functools
import logging
import math
from collections import defaultdict
from collections.abc import Callable, Iterable, Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, TypeVar

import numpy as np

from .config import ExperimentConfig
from .correlation import correlation_curve, default_radius_grid, fit_mask, fit_slope, range_radius_grid
from .embedding import DEFAULT_MI_BINS, EmbeddingSpec, delay_embed, embedding_for
from .errors import ArgumentError, RefRadiusError
from .io import (
    CURVE_HEADER,
    curve_rows,
    read_series,
    write_csv,
    write_histogram_csv,
    write_manifest,
    write_pbm,
    write_recurrence_pairs,
    write_series,
)
from .norms import NormKind, TimeSeries, Trajectory
from .radius import (
    BaselineRule,
    RadiusSelection,
    baseline_radius,
    radius_range,
    reference_radius,
    spread_components,
    spread_estimate,
)
from .recurrence import (
    DEFAULT_COUNT_FLOOR,
    DEFAULT_M_HI,
    DEFAULT_M_LO,
    K2Point,
    diagonal_histogram,
    k2_curve,
    k2_estimate,
    recurrence_matrix,
)
from .seeding import derive_seed
from .stats import gaussian_ci, mean_squared_error, mse_bootstrap_ci, mse_curve, two_sample_z
from .systems import SystemSpec, add_observational_noise, generate

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

ESTIMATE_HEADER = ("system", "N", "k", "seed", "method", "beta", "d2", "r_opt", "tau", "points_used", "error")
RUN_COLUMNS = ("system", "N", "k", "seed", "method", "beta")
K2_ESTIMATE_HEADER = ("system", "N", "k", "seed", "r", "log_r", "k2", "ok", "r_opt", "error")
K2_CURVE_HEADER = ("r", "log_r", "n_ok", "mean_k2", "std_k2", "ci_low", "ci_high")
K2_REFERENCE_HEADER = ("N", "k", "runs", "mean_r_opt", "log_mean_r_opt", "n_ok", "mean_k2", "ci_low", "ci_high")
K2_MSE_HEADER = ("N", "k", "r", "log_r", "n_ok", "mse", "log_mse", "ok", "ci_low", "ci_high")
K2_MSE_SUMMARY_HEADER = ("N", "k", "mse_at_r_opt", "log_mse_at_r_opt", "min_mse", "log_min_mse", "r_at_min")
COMPARISON_HEADER = ("rule", "group_a", "group_b", "n_a", "n_b", "mean_radius", "mean_a", "mean_b", "z", "error")
REFERENCE_RULE = "reference"


#####################
# RUN PLANNING      #
#####################
@dataclass(frozen=True)
class Run:
    """
    Coordinates of one run.

    Attributes
    ----------
    system : str
        System name, or the input file name.
    length : int or None
        Requested length; ``None`` for input files (their own length).
    noise : float
        Observational noise level ``k``.
    seed_index : int
        Index of the repetition, ``0 .. seeds − 1``.
    source : Path or None
        Input file, ``None`` for generated series.
    """

    system: str
    length: int | None
    noise: float
    seed_index: int
    source: Path | None = None

    def columns(self, length: int | None = None) -> list[Any]:
        """Leading output columns ``system, N, k, seed``."""
        return [self.system, length if length is not None else self.length, self.noise, self.seed_index]


def plan_runs(config: ExperimentConfig) -> list[Run]:
    """
    Enumerate the runs of an experiment.

    Generated systems run every (length, noise level, seed index). Input
    files run once per noise level when ``k = 0`` and ``seeds`` times
    otherwise; ``lengths`` does not apply to them.
    """
    if not config.inputs:
        return generated_runs(config)
    runs = []
    for name in config.inputs:
        path = Path(name)
        for k in config.noise_levels:
            repeats = config.seeds if k > 0 else 1
            runs.extend(Run(path.name, None, k, s, path) for s in range(repeats))
    return runs


def generated_runs(config: ExperimentConfig) -> list[Run]:
    """Runs of the configured system, ignoring ``inputs``."""
    return [
        Run(config.system, length, k, s)
        for length in config.lengths
        for k in config.noise_levels
        for s in range(config.seeds)
    ]


def initial_seed(config: ExperimentConfig, run: Run) -> int:
    """Seed of the initial state; independent of the noise level."""
    return derive_seed(config.master_seed, run.system, run.length or 0, run.seed_index)


def noise_seed(config: ExperimentConfig, run: Run) -> int:
    """Seed of the observational noise."""
    return derive_seed(config.master_seed, "noise", run.system, run.length or 0, run.noise, run.seed_index)


def _system_spec(config: ExperimentConfig, run: Run) -> SystemSpec:
    return SystemSpec(config.system_instance(), run.length, seed=initial_seed(config, run), transient=config.transient)


def load_series(run: Run, config: ExperimentConfig) -> TimeSeries:
    """Generate or read the series of ``run`` and add its observational noise."""
    if run.source is not None:
        series = read_series(run.source, config.dt)
    else:
        series = generate(_system_spec(config, run)).series
    return add_observational_noise(series, run.noise, noise_seed(config, run))


def map_runs(function: Callable[[T], R], items: Sequence[T], workers: int = 1) -> list[R]:
    """
    Apply ``function`` to every item, keeping the input order.

    Uses a process pool when ``workers > 1``; ``function`` must then be
    picklable (a module-level function or a :func:`functools.partial` of one).
    """
    if workers <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(function, items))


def _error_name(error: BaseException) -> str:
    return type(error).__name__


#####################
# SIMULATE          #
#####################
def simulate(config: ExperimentConfig, write_states: bool = False) -> list[Path]:
    """
    Write generated series, one file per run.

    Files are named ``<system>_N<N>_s<seed>.txt`` (``_k<k>`` is added for
    noisy runs). With ``write_states`` a ``.csv`` with columns
    ``t, x, y[, z]`` of the clean states is written next to each file.

    Returns
    -------
    list of Path
        Files written, in run order.
    """
    out = config.output_dir
    system = config.system_instance()
    written = []
    for run in generated_runs(config):
        generated = generate(_system_spec(config, run))
        series = add_observational_noise(generated.series, run.noise, noise_seed(config, run))
        stem = f"{run.system}_N{run.length}_s{run.seed_index}" + (f"_k{run.noise:g}" if run.noise > 0 else "")
        written.append(write_series(out / f"{stem}.txt", series))
        if write_states:
            header = ("t", "x", "y", "z")[: system.state_dim + 1]
            rows = np.column_stack([generated.times, generated.states]).tolist()
            write_csv(out / f"{stem}.csv", header, rows)
            written.append(out / f"{stem}.csv")
    logger.info("Wrote %d files to %s", len(written), out)
    return written


#####################
# RADIUS / INGEST   #
#####################
def radius_summary(
    series: TimeSeries,
    d: int = 1,
    delay: int | str = 1,
    norm: NormKind = NormKind.L2,
    bins: int = DEFAULT_MI_BINS,
) -> dict[str, Any]:
    """
    Reference radius of a delay-embedded series.

    The spread is that of the scalar series and ``n = N − (d − 1) τ``.

    Returns
    -------
    dict
        ``alpha, spread, n, d, norm, r_opt`` plus ``N`` and ``tau``.
    """
    embedding = embedding_for(series, d, delay, bins)
    n = embedding.trajectory_length(len(series))
    if n < 2:
        raise ArgumentError(
            f"Series of length {len(series)} too short for d={d}, tau={embedding.tau}: "
            f"at least {embedding.required_length} samples required"
        )
    selection = reference_radius(spread_estimate(series), n, d, norm)
    return {**selection.as_dict(), "N": len(series), "tau": embedding.tau}


def split_segments(series: TimeSeries, segment: int | None) -> list[tuple[int, TimeSeries]]:
    """
    Cut a recording into consecutive ``(start, piece)`` segments of ``segment`` samples.

    ``None`` keeps the whole recording as one segment. A remainder shorter than
    a segment is dropped with a warning.

    Raises
    ------
    ArgumentError
        If ``segment`` is below 2 or longer than the recording.
    """
    if segment is None:
        return [(0, series)]
    if segment < 2:
        raise ArgumentError(f"Segment length must be >= 2, got {segment}")
    count = len(series) // segment
    if count == 0:
        raise ArgumentError(f"Series of length {len(series)} shorter than one segment of {segment}")
    remainder = len(series) - count * segment
    if remainder:
        logger.warning("Dropping the last %d samples that do not fill a segment of %d", remainder, segment)
    return [(i * segment, series.replace_values(series.values[i * segment : (i + 1) * segment])) for i in range(count)]


def ingest_summary(
    series: TimeSeries,
    segment: int | None = None,
    d: int = 1,
    delay: int | str = 1,
    norm: NormKind = NormKind.L2,
) -> list[dict[str, Any]]:
    """
    Validate a recording and summarise it, optionally per segment.

    Parameters
    ----------
    series : TimeSeries
        Recording.
    segment : int, optional
        Segment length. The recording is cut into ``N // segment``
        consecutive segments; a shorter remainder is dropped with a warning.
    d, delay, norm : optional
        Embedding used for the reference radius.

    Returns
    -------
    list of dict
        One summary per segment: index, start sample, ``N``, ``dt``, ``σ̂``,
        IQR and the reference radius fields.
    """
    summaries = []
    for index, (start, piece) in enumerate(split_segments(series, segment)):
        sigma, iqr = spread_components(piece)
        summary = {"segment": index, "start": start, "dt": piece.dt, "sigma": sigma, "iqr": iqr}
        summary.update(radius_summary(piece, d, delay, norm))
        summaries.append(summary)
    return summaries


#####################
# CORRELATION DIM   #
#####################
@dataclass(frozen=True)
class CorrdimResult:
    """Estimate rows and long-format curve rows of one run."""

    estimates: list[list[Any]]
    curves: list[list[Any]]


def corrdim_run(run: Run, config: ExperimentConfig) -> CorrdimResult:
    """
    Correlation dimension of one run, over the full range and each β range.

    Returns one estimate row per method (``full``, then ``range`` for each
    β). Failures are recorded in the ``error`` column.
    """
    methods: list[tuple[str, float | None]] = [("full", None)] + [("range", beta) for beta in config.betas]
    try:
        series = load_series(run, config)
        embedding = embedding_for(series, config.embedding_dim, config.delay, config.mi_bins)
        trajectory = delay_embed(series, embedding, config.norm)
        sigma, _ = spread_components(series)
        selection = reference_radius(spread_estimate(series), trajectory.n, trajectory.d, trajectory.norm)
    except RefRadiusError as e:
        logger.warning("Run %s failed: %s", run, e)
        estimates = [[*run.columns(), method, beta, None, None, None, None, _error_name(e)] for method, beta in methods]
        return CorrdimResult(estimates, [])

    prefix = run.columns(len(series))
    estimates, curves = [], []
    for method, beta in methods:
        try:
            if beta is None:
                fit_range = None
                grid = default_radius_grid(sigma, config.grid_points, config.grid_min, config.grid_max_sigma)
            else:
                fit_range = radius_range(selection, beta)
                grid = range_radius_grid(fit_range, config.grid_points)
            curve = correlation_curve(trajectory, grid, config.include_self_pairs)
            mask = fit_mask(curve, fit_range)
            curves.extend([*prefix, method, beta, *row] for row in curve_rows(curve, mask))
            estimate = fit_slope(curve, mask)
        except RefRadiusError as e:
            logger.warning("Run %s, %s beta=%s failed: %s", run, method, beta, e)
            estimates.append([*prefix, method, beta, None, selection.r_opt, embedding.tau, None, _error_name(e)])
            continue
        estimates.append(
            [*prefix, method, beta, estimate.d2, selection.r_opt, embedding.tau, estimate.points_used, None]
        )
    return CorrdimResult(estimates, curves)


def run_corrdim(config: ExperimentConfig) -> dict[str, Path]:
    """
    Correlation-dimension study.

    Writes ``estimates.csv`` (one row per run and method), ``curves.csv``
    (every correlation sum, long format) and ``manifest.json`` to
    ``output_dir``.

    Returns
    -------
    dict
        ``name -> path`` of the files written.
    """
    config.validate()
    runs = plan_runs(config)
    logger.info("Running %d correlation dimension runs with %d worker(s)", len(runs), config.workers)
    results = map_runs(functools.partial(corrdim_run, config=config), runs, config.workers)

    out = config.output_dir
    files = {
        "estimates": out / "estimates.csv",
        "curves": out / "curves.csv",
        "manifest": out / "manifest.json",
    }
    write_csv(files["estimates"], ESTIMATE_HEADER, (row for result in results for row in result.estimates))
    write_csv(files["curves"], RUN_COLUMNS + CURVE_HEADER, (row for result in results for row in result.curves))
    write_manifest(
        files["manifest"],
        "corrdim",
        config.as_dict(),
        {
            "estimates.csv": {"columns": list(ESTIMATE_HEADER), "x": "beta", "y": "d2", "group": ["N", "k", "method"]},
            "curves.csv": {"columns": list(RUN_COLUMNS + CURVE_HEADER), "x": "log_r", "y": "log_C"},
        },
    )
    logger.info("Wrote %s", ", ".join(str(path) for path in files.values()))
    return files


#####################
# K2 ENTROPY        #
#####################
@dataclass(frozen=True)
class K2RunResult:
    """
    K2 curve of one run.

    Attributes
    ----------
    run : Run
        Run coordinates.
    length : int or None
        Series length, ``None`` if the run failed before loading.
    points : list of K2Point
        One point per grid radius; empty on failure.
    r_opt : float or None
        Reference radius of the series.
    k2_at_r_opt : float or None
        K2 at the reference radius, ``None`` when flagged.
    error : str or None
        Error class of a failed run.
    """

    run: Run
    length: int | None
    points: list[K2Point]
    r_opt: float | None
    k2_at_r_opt: float | None
    error: str | None = None


def k2_at_radius(series: TimeSeries, radius: float, config: ExperimentConfig) -> float:
    """K2 of ``series`` at one radius with the configured fit range and floor."""
    hist = diagonal_histogram(series, radius, config.m_hi + 1, config.include_self_pairs)
    return k2_estimate(hist, series.dt, config.m_lo, config.m_hi, config.count_floor).k2


def k2_run(run: Run, config: ExperimentConfig) -> K2RunResult:
    """K2 curve over the configured grid, and K2 at the one-dimensional reference radius."""
    try:
        series = load_series(run, config)
        r_opt = reference_radius(spread_estimate(series), len(series), 1, config.norm).r_opt
        points = k2_curve(
            series, config.k2_grid(), config.m_lo, config.m_hi, config.count_floor, config.include_self_pairs
        )
    except RefRadiusError as e:
        logger.warning("Run %s failed: %s", run, e)
        return K2RunResult(run, None, [], None, None, _error_name(e))
    try:
        at_reference = k2_at_radius(series, r_opt, config)
    except RefRadiusError:
        at_reference = None
    return K2RunResult(run, len(series), points, r_opt, at_reference)


def _summary_cells(values: Sequence[float]) -> list[Any]:
    """``n, mean, std, ci_low, ci_high`` with empty cells where undefined."""
    if len(values) >= 2:
        summary = gaussian_ci(values)
        return [len(values), summary.mean, summary.sample_std, summary.ci_low, summary.ci_high]
    if len(values) == 1:
        return [1, float(values[0]), None, None, None]
    return [0, None, None, None, None]


def _k2_group_tables(
    key: tuple[int, float], results: Sequence[K2RunResult], grid: np.ndarray, config: ExperimentConfig
) -> tuple[list[list[Any]], list[Any], list[list[Any]], list[Any] | None]:
    n, k = key
    per_radius = [
        [result.points[j].k2 for result in results if result.points and result.points[j].ok] for j in range(grid.size)
    ]
    curve = []
    for r, values in zip(grid, per_radius):
        count, mean, std, low, high = _summary_cells(values)
        curve.append([r, math.log(r), count, mean, std, low, high])

    r_opts = [result.r_opt for result in results if result.r_opt is not None]
    at_reference = [result.k2_at_r_opt for result in results if result.k2_at_r_opt is not None]
    mean_r_opt = float(np.mean(r_opts)) if r_opts else None
    count, mean, _, low, high = _summary_cells(at_reference)
    reference = [n, k, len(results), mean_r_opt, math.log(mean_r_opt) if mean_r_opt else None, count, mean, low, high]

    if config.truth is None:
        return curve, reference, [], None
    usable = {float(r): values for r, values in zip(grid, per_radius) if len(values) >= 2}
    mse_rows = []
    if usable:
        for j, point in enumerate(mse_curve(usable, config.truth)):
            seed = derive_seed(config.master_seed, "mse", n, k, j)
            low, high = mse_bootstrap_ci(usable[point.r], config.truth, config.bootstrap_resamples, seed)
            count = len(usable[point.r])
            mse_rows.append([n, k, point.r, math.log(point.r), count, point.mse, point.log_mse, point.ok, low, high])
    summary = None
    if mse_rows or len(at_reference) >= 2:
        at_r_opt = mean_squared_error(at_reference, config.truth) if len(at_reference) >= 2 else None
        best = min(mse_rows, key=lambda row: row[5]) if mse_rows else None
        summary = [
            n,
            k,
            at_r_opt,
            math.log(at_r_opt) if at_r_opt else None,
            best[5] if best else None,
            best[6] if best else None,
            best[2] if best else None,
        ]
    return curve, reference, mse_rows, summary


def run_k2(config: ExperimentConfig) -> dict[str, Path]:
    """
    K2 entropy study.

    Writes, to ``output_dir``:

    * ``k2_curve_N<N>_k<k>.csv``: mean K2 and 95% Gaussian interval per radius;
    * ``k2_estimates.csv``: every per-run, per-radius estimate;
    * ``k2_reference.csv``: mean reference radius and K2 there, per length;
    * ``k2_mse.csv`` and ``k2_mse_summary.csv`` when ``truth`` is set;
    * ``manifest.json``.

    Returns
    -------
    dict
        ``name -> path`` of the files written.
    """
    config.validate()
    runs = plan_runs(config)
    grid = config.k2_grid()
    logger.info("Running %d K2 runs over %d radii with %d worker(s)", len(runs), grid.size, config.workers)
    results = map_runs(functools.partial(k2_run, config=config), runs, config.workers)

    out = config.output_dir
    files: dict[str, Path] = {}
    raw_rows = []
    groups: dict[tuple[int, float], list[K2RunResult]] = defaultdict(list)
    for result in results:
        if result.error is not None:
            raw_rows.append([*result.run.columns(), None, None, None, False, None, result.error])
            continue
        groups[(result.length, result.run.noise)].append(result)
        prefix = result.run.columns(result.length)
        raw_rows.extend(
            [*prefix, point.r, math.log(point.r), point.k2, point.ok, result.r_opt, None] for point in result.points
        )
    files["estimates"] = out / "k2_estimates.csv"
    write_csv(files["estimates"], K2_ESTIMATE_HEADER, raw_rows)

    reference_rows, mse_rows, summary_rows = [], [], []
    described: dict[str, Mapping[str, Any]] = {
        "k2_estimates.csv": {"columns": list(K2_ESTIMATE_HEADER), "x": "log_r", "y": "k2"},
        "k2_reference.csv": {"columns": list(K2_REFERENCE_HEADER), "x": "log_mean_r_opt", "y": "mean_k2"},
    }
    for key in sorted(groups):
        curve, reference, group_mse, summary = _k2_group_tables(key, groups[key], grid, config)
        name = f"k2_curve_N{key[0]}_k{key[1]:g}.csv"
        files[name] = out / name
        write_csv(files[name], K2_CURVE_HEADER, curve)
        described[name] = {
            "columns": list(K2_CURVE_HEADER),
            "x": "log_r",
            "y": "mean_k2",
            "band": ["ci_low", "ci_high"],
        }
        reference_rows.append(reference)
        mse_rows.extend(group_mse)
        if summary is not None:
            summary_rows.append(summary)
    files["reference"] = out / "k2_reference.csv"
    write_csv(files["reference"], K2_REFERENCE_HEADER, reference_rows)
    if config.truth is not None:
        files["mse"] = out / "k2_mse.csv"
        files["mse_summary"] = out / "k2_mse_summary.csv"
        write_csv(files["mse"], K2_MSE_HEADER, mse_rows)
        write_csv(files["mse_summary"], K2_MSE_SUMMARY_HEADER, summary_rows)
        described["k2_mse.csv"] = {"columns": list(K2_MSE_HEADER), "x": "log_r", "y": "log_mse"}
        described["k2_mse_summary.csv"] = {"columns": list(K2_MSE_SUMMARY_HEADER)}
    files["manifest"] = out / "manifest.json"
    write_manifest(files["manifest"], "k2", config.as_dict(), described)
    logger.info("Wrote %d files to %s", len(files), out)
    return files


def run_study(config: ExperimentConfig) -> dict[str, Path]:
    """Run the study named by ``config.estimator``, see :func:`run_corrdim` and :func:`run_k2`."""
    runner = run_k2 if config.estimator == "k2" else run_corrdim
    return runner(config)


#####################
# RECURRENCE EXPORT #
#####################
def rqa_export(
    series: TimeSeries,
    out: str | Path,
    radius: float | None = None,
    embedding: EmbeddingSpec | None = None,
    norm: NormKind = NormKind.L2,
    m_lo: int = DEFAULT_M_LO,
    m_hi: int = DEFAULT_M_HI,
    count_floor: float = DEFAULT_COUNT_FLOOR,
    include_self_pairs: bool = True,
) -> dict[str, Any]:
    """
    Export the recurrence plot, its diagonal-line histogram and K2.

    Writes ``recurrence.pbm``, ``recurrence_pairs.csv`` and
    ``diagonal_histogram.csv`` to ``out``.

    Parameters
    ----------
    series : TimeSeries
        Scalar series.
    out : str or Path
        Output directory.
    radius : float, optional
        Threshold; defaults to the reference radius of the embedded series.
    embedding : EmbeddingSpec, optional
        Embedding of the recurrence plot, ``d = 1`` by default. The line
        histogram always uses the scalar series.
    norm : NormKind, optional
        Norm of the recurrence plot.
    m_lo, m_hi, count_floor, include_self_pairs : optional
        K2 fit settings.

    Returns
    -------
    dict
        Summary: radius, sizes, recurrence rate, K2 (``None`` with an
        ``error`` name when the counts are insufficient).
    """
    out = Path(out)
    embedding = embedding or EmbeddingSpec(1, 1)
    trajectory = delay_embed(series, embedding, norm)
    selection: RadiusSelection | None = None
    if radius is None:
        selection = reference_radius(spread_estimate(series), trajectory.n, trajectory.d, norm)
        radius = selection.r_opt
    matrix = recurrence_matrix(trajectory, radius)
    write_pbm(out / "recurrence.pbm", matrix)
    write_recurrence_pairs(out / "recurrence_pairs.csv", matrix)
    hist = diagonal_histogram(series, radius, min(m_hi + 1, len(series) - 1), include_self_pairs)
    write_histogram_csv(out / "diagonal_histogram.csv", hist)

    summary: dict[str, Any] = {
        "epsilon": radius,
        "N": len(series),
        "n": trajectory.n,
        "d": embedding.d,
        "tau": embedding.tau,
        "norm": norm,
        "recurrence_rate": matrix.recurrence_rate,
        "reference": selection is not None,
        "k2": None,
        "error": None,
    }
    try:
        summary["k2"] = k2_estimate(hist, series.dt, m_lo, m_hi, count_floor).k2
    except RefRadiusError as e:
        summary["error"] = _error_name(e)
    return summary


#####################
# RULE COMPARISON   #
#####################
def comparison_rules() -> list[str | BaselineRule]:
    """The reference rule followed by the five empirical rules, in table order."""
    return [
        REFERENCE_RULE,
        BaselineRule.fraction_of_sigma(0.2),
        BaselineRule.fraction_of_sigma(0.1),
        BaselineRule.fraction_of_max_extent(0.1),
        BaselineRule.fixed_recurrence_rate(0.1),
        BaselineRule.fixed_recurrence_rate(0.04),
    ]


def rule_label(rule: str | BaselineRule) -> str:
    """Name of ``rule`` in comparison tables."""
    return rule if isinstance(rule, str) else rule.label


def rule_radius(series: TimeSeries, rule: str | BaselineRule, norm: NormKind = NormKind.L2) -> float:
    """Radius chosen by ``rule`` for the scalar series (``d = 1``)."""
    if rule == REFERENCE_RULE:
        return reference_radius(spread_estimate(series), len(series), 1, norm).r_opt
    return baseline_radius(Trajectory(series.values, norm=norm), rule)


def _file_estimates(
    path: Path, config: ExperimentConfig, segment: int | None = None
) -> list[list[tuple[float | None, float | None]]]:
    """
    ``(radius, K2)`` under every rule for each segment of one file.

    ``None`` marks a failed radius or K2. A file that cannot be read or cut
    into segments contributes nothing.
    """
    try:
        pieces = split_segments(read_series(path, config.dt), segment)
    except (OSError, RefRadiusError) as e:
        logger.warning("Skipping %s: %s", path, e)
        return []

    segments = []
    for start, series in pieces:
        estimates = []
        for rule in comparison_rules():
            try:
                radius = rule_radius(series, rule, config.norm)
            except RefRadiusError as e:
                logger.warning("%s@%d: no %s radius: %s", path, start, rule_label(rule), e)
                estimates.append((None, None))
                continue
            try:
                estimates.append((radius, k2_at_radius(series, radius, config)))
            except RefRadiusError as e:
                logger.warning("%s@%d: K2 at the %s radius failed: %s", path, start, rule_label(rule), e)
                estimates.append((radius, None))
        segments.append(estimates)
    return segments


def compare_rules(
    groups: Mapping[str, Iterable[str | Path]], config: ExperimentConfig, segment: int | None = None
) -> list[list[Any]]:
    """
    Compare radius rules by how well K2 separates two groups of recordings.

    Parameters
    ----------
    groups : mapping
        Exactly two ``label -> files`` entries.
    config : ExperimentConfig
        Supplies ``norm``, ``dt``, ``m_lo``, ``m_hi``, ``count_floor``,
        ``include_self_pairs`` and ``workers``.
    segment : int, optional
        Cut each file into segments of this many samples, each contributing one
        estimate, as :func:`ingest_summary` does. By default a file is one
        segment. Unreadable files are skipped with a warning.

    Returns
    -------
    list of list
        One row of :data:`COMPARISON_HEADER` per rule, six in total. A rule
        whose Z statistic cannot be computed carries the error class name.
    """
    if len(groups) != 2:
        raise ArgumentError(f"Exactly two groups are required, got {len(groups)}")
    if segment is not None and segment < 2:
        raise ArgumentError(f"Segment length must be >= 2, got {segment}")
    (label_a, files_a), (label_b, files_b) = (
        (label, [Path(name) for name in files]) for label, files in groups.items()
    )
    worker = functools.partial(_file_estimates, config=config, segment=segment)
    estimates_a = [estimates for per_file in map_runs(worker, files_a, config.workers) for estimates in per_file]
    estimates_b = [estimates for per_file in map_runs(worker, files_b, config.workers) for estimates in per_file]

    rows = []
    for index, rule in enumerate(comparison_rules()):
        a = [estimates[index][1] for estimates in estimates_a if estimates[index][1] is not None]
        b = [estimates[index][1] for estimates in estimates_b if estimates[index][1] is not None]
        radii = [estimates[index][0] for estimates in estimates_a + estimates_b if estimates[index][0] is not None]
        mean_radius = float(np.mean(radii)) if radii else None
        mean_a = float(np.mean(a)) if a else None
        mean_b = float(np.mean(b)) if b else None
        try:
            z, error = two_sample_z(a, b), None
        except RefRadiusError as e:
            z, error = None, _error_name(e)
        rows.append([rule_label(rule), label_a, label_b, len(a), len(b), mean_radius, mean_a, mean_b, z, error])
    return rows
