"""
Text formats read and written by the toolkit.

* Series: one real number per line; blank lines and lines starting with
  ``#`` are skipped.
* Tables: RFC 4180 CSV with a header row. Floats are written with
  :py:func:`repr`, so values read back are bit-identical.
* Recurrence plots: plain PBM (``P1``) bitmaps and CSV lists of ``(i, j)``.
* Summaries: single-line JSON objects; run manifests: indented JSON.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import sys
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from .correlation import CorrelationCurve
from .errors import ParseError
from .norms import NormKind, TimeSeries
from .recurrence import DiagonalHistogram, RecurrenceMatrix

logger = logging.getLogger(__name__)

CURVE_HEADER = ("r", "log_r", "C", "log_C", "pairs", "n", "norm", "in_fit_range")
PBM_LINE_WIDTH = 70


#####################
# SERIES            #
#####################
def parse_series(lines: Iterable[str], dt: float = 1.0, source: str | Path | None = None) -> TimeSeries:
    """
    Parse a single-column series.

    Parameters
    ----------
    lines : iterable of str
        Text lines.
    dt : float, optional
        Time per sample.
    source : str or Path, optional
        Name used in error messages.

    Returns
    -------
    TimeSeries
        Parsed samples.

    Raises
    ------
    ParseError
        If a line is not a finite real number, or fewer than 2 samples are
        found. The message names the offending line.
    """
    values = []
    for number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            value = float(text)
        except ValueError:
            raise ParseError(f"not a number: {text!r}", source, number) from None
        if not math.isfinite(value):
            raise ParseError(f"non-finite value: {text!r}", source, number)
        values.append(value)
    if len(values) < 2:
        raise ParseError(f"at least 2 samples required, found {len(values)}", source)
    return TimeSeries(np.array(values), dt)


def read_series(path: str | Path, dt: float = 1.0) -> TimeSeries:
    """Read a single-column series file, see :func:`parse_series`."""
    path = Path(path)
    with path.open(encoding="utf-8") as handle:
        series = parse_series(handle, dt, path)
    logger.debug("Read %d samples from %s", len(series), path)
    return series


def write_series(path: str | Path, series: TimeSeries | np.ndarray) -> Path:
    """Write one sample per line."""
    path = Path(path)
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=float)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        handle.writelines(f"{float(value)!r}\n" for value in values)
    return path


#####################
# CSV               #
#####################
def format_cell(value: Any) -> str:
    """CSV text of one value: ``repr`` for floats, empty for ``None``."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, NormKind):
        return value.value
    return str(value)


def write_csv(path: str | Path | TextIO, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """
    Write an RFC 4180 table.

    Parameters
    ----------
    path : str, Path or text stream
        Destination file (parents are created) or open stream.
    header : sequence of str
        Column names.
    rows : iterable of sequence
        Rows, formatted with :func:`format_cell`.
    """
    if not isinstance(path, (str, Path)):
        _write_rows(path, header, rows)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        _write_rows(handle, header, rows)


def _write_rows(handle: TextIO, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    writer = csv.writer(handle, lineterminator="\r\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_cell(value) for value in row])


def read_csv(path: str | Path) -> list[dict[str, str]]:
    """Read a headed CSV table into one ``dict`` per row."""
    with Path(path).open(encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


def _row_number(row_index: int) -> int:
    # header is line 1
    return row_index + 2


#####################
# CURVES            #
#####################
def curve_rows(curve: CorrelationCurve, mask: np.ndarray | None = None) -> list[list[Any]]:
    """Rows of :data:`CURVE_HEADER` for ``curve``; ``mask`` marks the fitted points."""
    pairs = curve.pair_counts if curve.pair_counts is not None else [None] * curve.radii.size
    in_fit = mask if mask is not None else np.zeros(curve.radii.size, dtype=bool)
    rows = []
    for r, log_r, c, log_c, count, used in zip(curve.radii, curve.log_radii, curve.sums, curve.log_sums, pairs, in_fit):
        count = None if count is None else int(count)
        rows.append([r, log_r, c, log_c if np.isfinite(log_c) else None, count, curve.n, curve.norm, bool(used)])
    return rows


def write_curve_csv(path: str | Path, curve: CorrelationCurve, mask: np.ndarray | None = None) -> Path:
    """Write a correlation curve with the columns of :data:`CURVE_HEADER`."""
    write_csv(path, CURVE_HEADER, curve_rows(curve, mask))
    return Path(path)


def read_curve_csv(path: str | Path, include_self_pairs: bool = True) -> tuple[CorrelationCurve, np.ndarray]:
    """
    Read a curve written by :func:`write_curve_csv`.

    Only the ``r``, ``C``, ``pairs``, ``n``, ``norm`` and ``in_fit_range``
    columns are used, so extra leading columns (as in long-format files
    holding one curve) are accepted.

    Returns
    -------
    tuple
        ``(curve, in_fit_range mask)``.

    Raises
    ------
    ParseError
        If a column is missing or a cell is malformed.
    """
    rows = read_csv(path)
    if not rows:
        raise ParseError("no curve rows", path)
    return curve_from_rows(rows, path, include_self_pairs)


def curve_from_rows(
    rows: Sequence[Mapping[str, str]], source: str | Path | None = None, include_self_pairs: bool = True
) -> tuple[CorrelationCurve, np.ndarray]:
    """Build a curve and its fit mask from parsed CSV rows."""
    radii, sums, pairs, mask = [], [], [], []
    try:
        for index, row in enumerate(rows):
            try:
                radii.append(float(row["r"]))
                sums.append(float(row["C"]))
                pairs.append(int(row["pairs"]) if row["pairs"] else -1)
                mask.append(row["in_fit_range"] == "true")
            except ValueError as e:
                raise ParseError(str(e), source, _row_number(index)) from e
        n = int(rows[0]["n"])
        norm = NormKind.parse(rows[0]["norm"])
    except KeyError as e:
        raise ParseError(f"missing column {e.args[0]!r}", source) from None
    pair_counts = None if min(pairs) < 0 else np.array(pairs)
    curve = CorrelationCurve(np.array(radii), np.array(sums), n, norm, pair_counts, include_self_pairs)
    return curve, np.array(mask, dtype=bool)


def write_histogram_csv(path: str | Path, hist: DiagonalHistogram) -> Path:
    """Write ``m, count`` rows of a diagonal-line histogram."""
    write_csv(path, ("m", "count"), ((m, hist.count(m)) for m in range(1, hist.m_max + 1)))
    return Path(path)


#####################
# RECURRENCE PLOTS  #
#####################
def write_pbm(path: str | Path, matrix: RecurrenceMatrix) -> Path:
    """
    Write a recurrence matrix as a plain PBM bitmap.

    Recurrent pairs are black (``1``). Row ``i`` of the image is row ``i`` of
    the matrix; raster lines are wrapped at 70 characters.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    n = matrix.n
    with path.open("w", encoding="ascii") as handle:
        handle.write(f"P1\n{n} {n}\n")
        for row in matrix.bits:
            digits = "".join("1" if bit else "0" for bit in row)
            for start in range(0, n, PBM_LINE_WIDTH):
                handle.write(digits[start : start + PBM_LINE_WIDTH] + "\n")
    return path


def write_recurrence_pairs(path: str | Path, matrix: RecurrenceMatrix) -> Path:
    """Write the ``(i, j)`` indices of every recurrent pair, row-major."""
    write_csv(path, ("i", "j"), matrix.pairs().tolist())
    return Path(path)


#####################
# JSON              #
#####################
def _jsonable(value: Any) -> Any:
    if isinstance(value, Mapping):
        return {str(key): _jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(item) for item in value]
    if isinstance(value, np.ndarray):
        return [_jsonable(item) for item in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    if isinstance(value, NormKind):
        return value.value
    if isinstance(value, Path):
        return str(value)
    return value


def emit_json(record: Mapping[str, Any], stream: TextIO | None = None) -> str:
    """
    Write ``record`` as one compact JSON line.

    Keys are sorted; non-finite floats become ``null``.

    Returns
    -------
    str
        The line written, without the newline.
    """
    line = json.dumps(_jsonable(record), sort_keys=True, separators=(",", ":"), allow_nan=False)
    (stream or sys.stdout).write(line + "\n")
    return line


def write_manifest(
    path: str | Path,
    command: str,
    settings: Mapping[str, Any],
    files: Mapping[str, Mapping[str, Any]],
) -> Path:
    """
    Write the manifest of an experiment.

    Parameters
    ----------
    path : str or Path
        Manifest file.
    command : str
        Sub-command that produced the outputs.
    settings : mapping
        Effective settings.
    files : mapping
        ``file name -> description``; descriptions name the columns and
        plotting axes of the table.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    document = {"command": command, "settings": settings, "files": files}
    path.write_text(json.dumps(_jsonable(document), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path
