"""
Command-line interface.

``refradius <command> [options]``; run ``refradius <command> --help`` for the
options of each command. Machine-readable results go to stdout (JSON lines or
CSV) or to files; log messages go to stderr.

Exit codes: 0 on success, 2 for usage errors, and the ``exit_code`` of the
raised :class:`~refradius.errors.RefRadiusError` otherwise (3 argument,
4 parse, 5 degenerate input, 6 insufficient statistics, 7 insufficient data,
8 divergence, 9 input/output).
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from . import __version__
from .config import AUTO_DELAY, ExperimentConfig
from .embedding import DEFAULT_MI_BINS, EmbeddingSpec, embedding_for, select_delay_mi
from .errors import EXIT_IO, EXIT_OK, ArgumentError, RefRadiusError
from .experiments import (
    COMPARISON_HEADER,
    compare_rules,
    ingest_summary,
    radius_summary,
    rqa_export,
    run_study,
    simulate,
)
from .io import emit_json, read_series, write_csv
from .norms import NormKind
from .radius import coefficient_table
from .recurrence import DEFAULT_COUNT_FLOOR, DEFAULT_M_HI, DEFAULT_M_LO

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _delay(text: str) -> int | str:
    if text.lower() == AUTO_DELAY:
        return AUTO_DELAY
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or {AUTO_DELAY!r}, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"delay must be >= 1, got {value}")
    return value


def _norm(text: str) -> NormKind:
    try:
        return NormKind.parse(text)
    except ArgumentError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _add_series_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", type=Path, help="single-column series file")
    parser.add_argument("--dt", type=float, default=1.0, help="time per sample (default: 1)")


def _add_embedding_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-d", "--dim", type=int, default=1, help="embedding dimension (default: 1)")
    parser.add_argument("--tau", type=_delay, default=1, help=f"delay in samples or {AUTO_DELAY!r} (default: 1)")
    parser.add_argument("--norm", type=_norm, default=NormKind.L2, help="l1, l2 or linf (default: l2)")
    parser.add_argument("--mi-bins", type=int, default=DEFAULT_MI_BINS, help="bins of the delay scan")


def _add_k2_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m-lo", type=int, default=DEFAULT_M_LO, help="first line length of the K2 fit")
    parser.add_argument("--m-hi", type=int, default=DEFAULT_M_HI, help="last line length of the K2 fit")
    parser.add_argument("--count-floor", type=float, default=DEFAULT_COUNT_FLOOR, help="smallest accepted count")
    parser.add_argument("--exclude-self-pairs", action="store_true", help="do not count i = j pairs")


def _add_experiment_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-c", "--config", type=Path, help="key = value configuration file")
    ExperimentConfig.add_arguments(parser)


#####################
# COMMANDS          #
#####################
def cmd_simulate(args: argparse.Namespace) -> int:
    """Write generated series, one path per line on stdout."""
    config = ExperimentConfig.from_arguments(args)
    config.validate()
    for path in simulate(config, write_states=args.states):
        print(path)
    return EXIT_OK


def cmd_radius(args: argparse.Namespace) -> int:
    """Print the reference radius summary of a series."""
    series = read_series(args.input, args.dt)
    emit_json(radius_summary(series, args.dim, args.tau, args.norm, args.mi_bins))
    return EXIT_OK


def cmd_embed_delay(args: argparse.Namespace) -> int:
    """Print the mutual information delay, optionally writing the curve."""
    series = read_series(args.input, args.dt)
    selection = select_delay_mi(series, args.max_tau, args.mi_bins)
    if args.output is not None:
        rows = ((tau, value) for tau, value in enumerate(selection.mutual_information))
        write_csv(args.output, ("tau", "mi"), rows)
    emit_json(
        {
            "tau": selection.tau,
            "found_minimum": selection.found_minimum,
            "max_tau": len(selection.mutual_information) - 1,
            "mi_at_tau": selection.mutual_information[selection.tau],
        }
    )
    return EXIT_OK


def cmd_corrdim(args: argparse.Namespace) -> int:
    """Run the correlation dimension study."""
    config = ExperimentConfig.from_arguments(args)
    config.estimator = "corrdim"
    run_study(config)
    return EXIT_OK


def cmd_k2(args: argparse.Namespace) -> int:
    """Run the K2 entropy study."""
    config = ExperimentConfig.from_arguments(args)
    config.estimator = "k2"
    run_study(config)
    return EXIT_OK


def cmd_rqa_export(args: argparse.Namespace) -> int:
    """Export the recurrence plot of a series and print its summary."""
    series = read_series(args.input, args.dt)
    embedding = embedding_for(series, args.dim, args.tau, args.mi_bins) if args.dim > 1 else EmbeddingSpec(1, 1)
    summary = rqa_export(
        series,
        args.output_dir,
        radius=args.radius,
        embedding=embedding,
        norm=args.norm,
        m_lo=args.m_lo,
        m_hi=args.m_hi,
        count_floor=args.count_floor,
        include_self_pairs=not args.exclude_self_pairs,
    )
    emit_json(summary)
    return EXIT_OK


def cmd_ingest(args: argparse.Namespace) -> int:
    """Print one summary per segment of a recording."""
    series = read_series(args.input, args.dt)
    for summary in ingest_summary(series, args.segment, args.dim, args.tau, args.norm):
        emit_json(summary)
    return EXIT_OK


def cmd_compare_rules(args: argparse.Namespace) -> int:
    """Write the rule comparison table."""
    config = ExperimentConfig(
        {
            "norm": args.norm,
            "dt": args.dt,
            "m_lo": args.m_lo,
            "m_hi": args.m_hi,
            "count_floor": args.count_floor,
            "include_self_pairs": not args.exclude_self_pairs,
            "workers": args.workers,
        }
    )
    config.validate()
    label_a, label_b = args.labels
    rows = compare_rules({label_a: args.group_a, label_b: args.group_b}, config, args.segment)
    write_csv(args.output if args.output is not None else sys.stdout, COMPARISON_HEADER, rows)
    return EXIT_OK


def cmd_alpha_table(args: argparse.Namespace) -> int:
    """Write the coefficient table."""
    rows = coefficient_table(range(1, args.max_dim + 1))
    write_csv(args.output if args.output is not None else sys.stdout, ("p", "d", "alpha"), rows)
    return EXIT_OK


#####################
# PARSER            #
#####################
def build_parser() -> argparse.ArgumentParser:
    """Return the argument parser of the ``refradius`` command."""
    parser = argparse.ArgumentParser(
        prog="refradius",
        description="Reference-rule radius selection for correlation dimension and K2 entropy estimation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for details")
    commands = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    simulate_parser = commands.add_parser("simulate", help="write generated benchmark series")
    _add_experiment_options(simulate_parser)
    simulate_parser.add_argument("--states", action="store_true", help="also write t, x, y[, z] state CSV files")
    simulate_parser.set_defaults(handler=cmd_simulate)

    radius_parser = commands.add_parser("radius", help="reference radius of a series, as JSON")
    _add_series_options(radius_parser)
    _add_embedding_options(radius_parser)
    radius_parser.set_defaults(handler=cmd_radius)

    delay_parser = commands.add_parser("embed-delay", help="delay at the first mutual information minimum")
    _add_series_options(delay_parser)
    delay_parser.add_argument("--max-tau", type=int, help="largest delay scanned (default: N // 10)")
    delay_parser.add_argument("--mi-bins", type=int, default=DEFAULT_MI_BINS, help="histogram bins")
    delay_parser.add_argument("-o", "--output", type=Path, help="CSV file receiving the tau, mi curve")
    delay_parser.set_defaults(handler=cmd_embed_delay)

    corrdim_parser = commands.add_parser("corrdim", help="correlation dimension study")
    _add_experiment_options(corrdim_parser)
    corrdim_parser.set_defaults(handler=cmd_corrdim)

    k2_parser = commands.add_parser("k2", help="K2 entropy study")
    _add_experiment_options(k2_parser)
    k2_parser.set_defaults(handler=cmd_k2)

    rqa_parser = commands.add_parser("rqa-export", help="recurrence plot, line histogram and K2 of a series")
    _add_series_options(rqa_parser)
    _add_embedding_options(rqa_parser)
    _add_k2_options(rqa_parser)
    rqa_parser.add_argument("-r", "--radius", type=float, help="threshold (default: reference radius)")
    rqa_parser.add_argument("-o", "--output-dir", type=Path, default=Path("rqa"), help="output directory")
    rqa_parser.set_defaults(handler=cmd_rqa_export)

    ingest_parser = commands.add_parser("ingest", help="validate and summarise a recording")
    _add_series_options(ingest_parser)
    _add_embedding_options(ingest_parser)
    ingest_parser.add_argument("--segment", type=int, help="split into consecutive segments of this length")
    ingest_parser.set_defaults(handler=cmd_ingest)

    compare_parser = commands.add_parser("compare-rules", help="Z-test of K2 between two groups, per radius rule")
    compare_parser.add_argument("--group-a", nargs="+", required=True, type=Path, help="files of the first group")
    compare_parser.add_argument("--group-b", nargs="+", required=True, type=Path, help="files of the second group")
    compare_parser.add_argument("--labels", nargs=2, default=("A", "B"), metavar=("A", "B"), help="group labels")
    compare_parser.add_argument("--dt", type=float, default=1.0, help="time per sample (default: 1)")
    compare_parser.add_argument("--norm", type=_norm, default=NormKind.L2, help="l1, l2 or linf (default: l2)")
    compare_parser.add_argument("--workers", type=int, default=1, help="worker processes")
    compare_parser.add_argument("--segment", type=int, help="split each file into consecutive segments of this length")
    compare_parser.add_argument("-o", "--output", type=Path, help="CSV file (default: stdout)")
    _add_k2_options(compare_parser)
    compare_parser.set_defaults(handler=cmd_compare_rules)

    alpha_parser = commands.add_parser("alpha-table", help="reference rule coefficients as CSV")
    alpha_parser.add_argument("--max-dim", type=int, default=5, help="largest dimension (default: 5)")
    alpha_parser.add_argument("-o", "--output", type=Path, help="CSV file (default: stdout)")
    alpha_parser.set_defaults(handler=cmd_alpha_table)
    return parser


def configure_logging(verbosity: int) -> None:
    """``WARNING`` by default, ``INFO`` with ``-v``, ``DEBUG`` with ``-vv``."""
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def main(argv: Sequence[str] | None = None) -> int:
    """
    Run the command line.

    Parameters
    ----------
    argv : sequence of str, optional
        Arguments without the program name; defaults to ``sys.argv[1:]``.

    Returns
    -------
    int
        Process exit code.
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except RefRadiusError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return e.exit_code
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
