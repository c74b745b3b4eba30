import json
import re

import numpy as np
import pytest
from refradius.config import ExperimentConfig
from refradius.embedding import EmbeddingSpec
from refradius.errors import ArgumentError, DegenerateInputError
from refradius.experiments import (
    COMPARISON_HEADER,
    ESTIMATE_HEADER,
    K2_REFERENCE_HEADER,
    comparison_rules,
    compare_rules,
    ingest_summary,
    plan_runs,
    radius_summary,
    rqa_export,
    rule_label,
    run_corrdim,
    run_k2,
    run_study,
    simulate,
)
from refradius.io import read_csv
from refradius.norms import NormKind, TimeSeries


@pytest.fixture
def make_config(tmp_path):
    def make(**values):
        values.setdefault("output_dir", str(tmp_path / "out"))
        return ExperimentConfig(values)

    return make


def test_plan_generated_runs(make_config):
    runs = plan_runs(make_config(lengths="200,400", noise_levels="0,0.1", seeds=3))
    assert len(runs) == 12
    assert (runs[0].system, runs[0].length, runs[0].noise, runs[0].seed_index) == ("henon", 200, 0.0, 0)
    assert runs[-1].columns() == ["henon", 400, 0.1, 2]


def test_plan_input_runs(make_config, series_file, random_series):
    first = series_file(random_series(50).values, name="a.txt")
    second = series_file(random_series(50).values, name="b.txt")
    runs = plan_runs(make_config(inputs=f"{first},{second}", noise_levels="0,0.1", seeds=3))
    # clean input runs once, each noise level repeats over seeds
    assert len(runs) == 8
    assert {run.system for run in runs} == {"a.txt", "b.txt"}
    assert all(run.length is None for run in runs)


def test_simulate_writes_series_and_states(make_config):
    config = make_config(lengths="50", noise_levels="0,0.1", seeds=2)
    paths = simulate(config, write_states=True)
    names = sorted(path.name for path in paths)
    assert "henon_N50_s0.txt" in names
    assert "henon_N50_s1_k0.1.txt" in names
    assert len(paths) == 8
    states = read_csv(config.output_dir / "henon_N50_s0.csv")
    assert list(states[0]) == ["t", "x", "y"]
    assert len(states) == 50


def test_simulate_noise_keeps_initial_state(make_config):
    config = make_config(lengths="60", noise_levels="0,0.05")
    simulate(config)
    clean = np.loadtxt(config.output_dir / "henon_N60_s0.txt")
    noisy = np.loadtxt(config.output_dir / "henon_N60_s0_k0.05.txt")
    assert np.std(noisy - clean) == pytest.approx(0.05 * np.std(clean, ddof=1), rel=0.5)


def test_radius_summary(random_series):
    summary = radius_summary(random_series(1000), d=3, delay=2, norm=NormKind.LINF)
    assert (summary["N"], summary["n"], summary["d"], summary["tau"]) == (1000, 996, 3, 2)
    assert summary["norm"] == "linf"
    assert summary["r_opt"] == pytest.approx(summary["alpha"] * summary["spread"] * 996 ** (-1 / 7))


def test_radius_summary_of_constant_series():
    with pytest.raises(DegenerateInputError):
        radius_summary(TimeSeries([1.0] * 20))


def test_ingest_segments(random_series, caplog):
    summaries = ingest_summary(random_series(4100, dt=0.004), segment=1024)
    assert [summary["segment"] for summary in summaries] == [0, 1, 2, 3]
    assert [summary["start"] for summary in summaries] == [0, 1024, 2048, 3072]
    assert all(summary["N"] == 1024 and summary["dt"] == 0.004 for summary in summaries)
    assert "Dropping the last 4 samples" in caplog.text


def test_ingest_whole_recording(random_series):
    (summary,) = ingest_summary(random_series(300))
    assert summary["N"] == 300
    assert summary["sigma"] > 0 and summary["iqr"] > 0


def test_ingest_rejects_long_segment(random_series):
    with pytest.raises(ArgumentError, match="shorter than one segment of 500"):
        ingest_summary(random_series(300), segment=500)


def test_run_corrdim_outputs(make_config):
    config = make_config(lengths="300", seeds=2, betas="0.1,0.5")
    files = run_corrdim(config)
    estimates = read_csv(files["estimates"])
    assert tuple(estimates[0]) == ESTIMATE_HEADER
    # one full-range row plus one per beta, for each run
    assert len(estimates) == 2 * 3
    assert [row["method"] for row in estimates[:3]] == ["full", "range", "range"]
    for row in estimates:
        assert row["error"] == ""
        assert 0.3 < float(row["d2"]) < 2.5
    manifest = json.loads(files["manifest"].read_text(encoding="utf-8"))
    assert manifest["command"] == "corrdim"
    assert manifest["settings"]["betas"] == "0.1,0.5"
    curves = read_csv(files["curves"])
    assert len(curves) == 2 * 3 * 20


def test_run_corrdim_records_failed_runs(make_config, series_file):
    path = series_file([2.0] * 100, name="flat.txt")
    files = run_corrdim(make_config(inputs=str(path), betas="0.5"))
    rows = read_csv(files["estimates"])
    assert [row["error"] for row in rows] == ["DegenerateInputError", "DegenerateInputError"]
    assert rows[0]["system"] == "flat.txt"


def test_run_corrdim_is_independent_of_workers(make_config, tmp_path):
    settings = dict(lengths="200", seeds=3, betas="0.5", noise_levels="0,0.05")
    serial = run_corrdim(make_config(output_dir=str(tmp_path / "serial"), workers=1, **settings))
    pooled = run_corrdim(make_config(output_dir=str(tmp_path / "pooled"), workers=2, **settings))
    assert serial["estimates"].read_bytes() == pooled["estimates"].read_bytes()
    assert serial["curves"].read_bytes() == pooled["curves"].read_bytes()


def test_run_k2_without_truth(make_config):
    config = make_config(estimator="k2", lengths="400", seeds=2, k2_radii=4, log_r_min=-2.5, log_r_max=-0.5)
    files = run_study(config)
    assert "mse" not in files
    assert "k2_curve_N400_k0.csv" in files
    assert len(read_csv(files["estimates"])) == 2 * 4
    curve = read_csv(files["k2_curve_N400_k0.csv"])
    assert len(curve) == 4
    (reference,) = read_csv(files["reference"])
    assert tuple(reference) == K2_REFERENCE_HEADER
    assert reference["runs"] == "2"


def test_run_k2_with_truth(make_config):
    config = make_config(lengths="400", seeds=3, k2_radii=3, log_r_min=-2.0, log_r_max=-0.5, truth=0.42)
    files = run_k2(config)
    mse = read_csv(files["mse"])
    assert 1 <= len(mse) <= 3
    assert all(float(row["mse"]) >= 0 for row in mse)
    (summary,) = read_csv(files["mse_summary"])
    assert summary["N"] == "400"


def test_rqa_export(tmp_path, henon_series):
    summary = rqa_export(henon_series, tmp_path / "rqa", embedding=EmbeddingSpec(2, 1))
    assert summary["reference"]
    assert summary["n"] == 499
    assert 0 < summary["recurrence_rate"] < 1
    assert summary["k2"] is not None
    for name in ("recurrence.pbm", "recurrence_pairs.csv", "diagonal_histogram.csv"):
        assert (tmp_path / "rqa" / name).is_file()
    assert len(read_csv(tmp_path / "rqa" / "diagonal_histogram.csv")) == 9


def test_rqa_export_with_tiny_radius(tmp_path, random_series):
    summary = rqa_export(random_series(100), tmp_path, radius=1e-9, include_self_pairs=False)
    assert summary["k2"] is None
    assert summary["error"] == "InsufficientStatisticsError"


def test_comparison_rules_labels():
    labels = [rule_label(rule) for rule in comparison_rules()]
    assert labels == ["reference", "0.2sigma", "0.1sigma", "0.1max_extent", "rr0.1", "rr0.04"]


def test_compare_rules(make_config, series_file, rng):
    group_a = [series_file(rng.normal(size=300), name=f"a{i}.txt") for i in range(3)]
    group_b = [series_file(np.sin(np.arange(300) / 3.0) + rng.normal(0, 0.05, 300), name=f"b{i}.txt") for i in range(3)]
    rows = compare_rules({"noise": group_a, "sine": group_b}, make_config())
    assert len(rows) == 6
    assert all(len(row) == len(COMPARISON_HEADER) for row in rows)
    reference = rows[0]
    assert reference[:5] == ["reference", "noise", "sine", 3, 3]
    assert reference[8] > 0


def test_compare_rules_needs_two_groups(make_config):
    with pytest.raises(ArgumentError, match=re.escape("Exactly two groups are required, got 1")):
        compare_rules({"only": []}, make_config())


def test_compare_rules_counts_every_segment(make_config, series_file, rng):
    noise = series_file(rng.normal(size=4096), name="noise.txt")
    sine = series_file(np.sin(np.arange(4096) / 3.0) + rng.normal(0, 0.05, 4096), name="sine.txt")
    rows = compare_rules({"noise": [noise], "sine": [sine]}, make_config(), segment=1024)
    assert rows[0][:5] == ["reference", "noise", "sine", 4, 4]
    assert rows[0][8] > 0


def test_compare_rules_skips_unreadable_files(make_config, series_file, rng, tmp_path, caplog):
    good = [series_file(rng.normal(size=300), name=f"a{i}.txt") for i in range(2)]
    broken = tmp_path / "broken.txt"
    broken.write_text("0.5\nnot a number\n", encoding="utf-8")
    missing = tmp_path / "missing.txt"
    group_b = [series_file(rng.normal(size=300) * 3.0, name=f"b{i}.txt") for i in range(2)]
    rows = compare_rules({"a": [*good, broken, missing], "b": group_b}, make_config())
    assert rows[0][3:5] == [2, 2]
    assert f"Skipping {broken}" in caplog.text
    assert f"Skipping {missing}" in caplog.text


def test_compare_rules_rejects_segment(make_config):
    with pytest.raises(ArgumentError, match=re.escape("Segment length must be >= 2, got 1")):
        compare_rules({"a": [], "b": []}, make_config(), segment=1)
