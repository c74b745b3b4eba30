import io
import json
import math
import re

import numpy as np
import pytest
from refradius.correlation import correlation_curve, fit_mask, fit_slope, gp_dimension
from refradius.errors import ParseError
from refradius.io import (
    CURVE_HEADER,
    emit_json,
    format_cell,
    parse_series,
    read_csv,
    read_curve_csv,
    read_series,
    write_csv,
    write_curve_csv,
    write_histogram_csv,
    write_manifest,
    write_pbm,
    write_recurrence_pairs,
    write_series,
)
from refradius.norms import NormKind, TimeSeries, Trajectory
from refradius.radius import radius_range, reference_radius_for
from refradius.recurrence import diagonal_histogram, recurrence_matrix


def test_parse_series_skips_blanks_and_comments():
    series = parse_series(["# header", "1.5", "", "  -2e-3 ", "# trailing", "4"], dt=0.1)
    assert series.values.tolist() == [1.5, -0.002, 4.0]
    assert series.dt == 0.1


# fmt: off
bad_series_cases = [
    (["1.0", "abc", "2.0"], "data.txt:2: not a number: 'abc'"),
    (["1.0", "nan"], "data.txt:2: non-finite value: 'nan'"),
    (["1.0", "# only one"], "data.txt: at least 2 samples required, found 1"),
]
# fmt: on


@pytest.mark.parametrize("lines, message", bad_series_cases)
def test_parse_series_rejects(lines, message):
    with pytest.raises(ParseError, match=re.escape(message)):
        parse_series(lines, source="data.txt")


def test_series_file_round_trip_is_exact(tmp_path, rng):
    values = rng.normal(size=50) * 1e-3
    path = write_series(tmp_path / "nested" / "series.txt", values)
    assert read_series(path).values.tolist() == values.tolist()


def test_read_series_with_header(series_file):
    path = series_file([1.0, 2.0, 3.0], header="# x coordinate")
    assert len(read_series(path, dt=0.05)) == 3


# fmt: off
cell_cases = [
    (None, ""),
    (True, "true"),
    (np.bool_(False), "false"),
    (0.1, "0.1"),
    (np.float64(1e-8), "1e-08"),
    (3, "3"),
    (NormKind.LINF, "linf"),
    ("henon", "henon"),
]
# fmt: on


@pytest.mark.parametrize("value, text", cell_cases)
def test_format_cell(value, text):
    assert format_cell(value) == text


def test_write_csv_uses_crlf_and_quotes(tmp_path):
    path = tmp_path / "table.csv"
    write_csv(path, ("name", "value"), [("a,b", 1.5), ("c", None)])
    assert path.read_bytes() == b'name,value\r\n"a,b",1.5\r\nc,\r\n'
    assert read_csv(path) == [{"name": "a,b", "value": "1.5"}, {"name": "c", "value": ""}]


def test_write_csv_to_stream():
    stream = io.StringIO()
    write_csv(stream, ("tau", "mi"), [(1, 0.5)])
    assert stream.getvalue() == "tau,mi\r\n1,0.5\r\n"


def test_curve_csv_reproduces_fit(tmp_path, random_trajectory):
    trajectory = random_trajectory(n=150, d=2)
    fit_range = radius_range(reference_radius_for(trajectory), 0.1)
    curve = correlation_curve(trajectory, np.geomspace(fit_range.lower / 4, fit_range.upper * 2, 20))
    mask = fit_mask(curve, fit_range)
    estimate = gp_dimension(curve, fit_range)

    path = write_curve_csv(tmp_path / "curve.csv", curve, mask)
    assert tuple(read_csv(path)[0]) == CURVE_HEADER
    restored, restored_mask = read_curve_csv(path)
    assert restored.radii.tolist() == curve.radii.tolist()
    assert restored.pair_counts.tolist() == curve.pair_counts.tolist()
    assert restored_mask.tolist() == mask.tolist()
    assert fit_slope(restored, restored_mask).d2 == estimate.d2


def test_curve_csv_leaves_log_of_zero_empty(tmp_path):
    curve = correlation_curve(Trajectory([0.0, 1.0], norm=NormKind.LINF), [0.5, 2.0], include_self_pairs=False)
    rows = read_csv(write_curve_csv(tmp_path / "curve.csv", curve))
    assert rows[0]["log_C"] == ""
    assert float(rows[1]["log_C"]) == 0.0
    assert rows[0]["in_fit_range"] == "false"


def test_read_curve_csv_missing_column(tmp_path):
    path = tmp_path / "curve.csv"
    write_csv(path, ("r", "C"), [(0.1, 0.2)])
    with pytest.raises(ParseError, match="missing column 'pairs'"):
        read_curve_csv(path)


def test_read_curve_csv_bad_cell(tmp_path):
    path = tmp_path / "curve.csv"
    write_csv(path, CURVE_HEADER, [(0.1, -2.3, 0.2, -1.6, 3, 10, "l2", True), ("x", 0, 0.3, 0, 4, 10, "l2", True)])
    with pytest.raises(ParseError, match=re.escape("curve.csv:3:")):
        read_curve_csv(path)


def test_write_histogram_csv(tmp_path):
    hist = diagonal_histogram(TimeSeries([0.0, 10.0, 0.0, 10.0]), 1.0, 2)
    rows = read_csv(write_histogram_csv(tmp_path / "hist.csv", hist))
    assert rows == [{"m": "1", "count": "8"}, {"m": "2", "count": "5"}]


def test_write_pbm(tmp_path):
    matrix = recurrence_matrix(Trajectory([0.0, 10.0, 0.0, 10.0]), 1.0)
    text = write_pbm(tmp_path / "rp.pbm", matrix).read_text(encoding="ascii")
    assert text == "P1\n4 4\n1010\n0101\n1010\n0101\n"


def test_write_pbm_wraps_long_rows(tmp_path):
    matrix = recurrence_matrix(Trajectory(np.zeros(100)), 1.0)
    lines = write_pbm(tmp_path / "rp.pbm", matrix).read_text(encoding="ascii").splitlines()
    assert lines[:2] == ["P1", "100 100"]
    assert max(len(line) for line in lines[2:]) == 70
    assert "".join(lines[2:]) == "1" * 10_000


def test_write_recurrence_pairs(tmp_path):
    matrix = recurrence_matrix(Trajectory([0.0, 10.0, 0.0]), 1.0)
    rows = read_csv(write_recurrence_pairs(tmp_path / "pairs.csv", matrix))
    assert [(row["i"], row["j"]) for row in rows] == [("0", "0"), ("0", "2"), ("1", "1"), ("2", "0"), ("2", "2")]


def test_emit_json_is_compact_and_sorted():
    stream = io.StringIO()
    line = emit_json({"r_opt": np.float64(0.5), "norm": NormKind.L2, "n": np.int64(10), "bad": math.nan}, stream)
    assert line == '{"bad":null,"n":10,"norm":"l2","r_opt":0.5}'
    assert stream.getvalue() == line + "\n"


def test_write_manifest(tmp_path):
    path = write_manifest(
        tmp_path / "run" / "manifest.json", "corrdim", {"seeds": "2"}, {"estimates.csv": {"x": "N"}}
    )
    document = json.loads(path.read_text(encoding="utf-8"))
    assert document == {"command": "corrdim", "settings": {"seeds": "2"}, "files": {"estimates.csv": {"x": "N"}}}
