import json

import numpy as np
import pytest
from refradius import __version__
from refradius.cli import build_parser, main
from refradius.io import read_csv
from refradius.radius import ALPHA_1D


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_command_is_required():
    with pytest.raises(SystemExit) as info:
        build_parser().parse_args([])
    assert info.value.code == 2


def test_radius(capsys, series_file):
    path = series_file([1, 2, 3, 4, 5])
    assert main(["radius", str(path)]) == 0
    (summary,) = json_lines(capsys.readouterr().out)
    assert (summary["N"], summary["n"], summary["d"], summary["tau"], summary["norm"]) == (5, 5, 1, 1, "l2")
    assert summary["r_opt"] == pytest.approx(ALPHA_1D * 1.49254 * 5**-0.2, rel=1e-5)


def test_radius_with_embedding(capsys, series_file, rng):
    path = series_file(rng.normal(size=500))
    assert main(["radius", str(path), "-d", "3", "--tau", "4", "--norm", "linf"]) == 0
    (summary,) = json_lines(capsys.readouterr().out)
    assert (summary["n"], summary["norm"]) == (492, "linf")


# fmt: off
exit_code_cases = [
    (["radius", "{constant}"], 5),
    (["radius", "{bad}"], 4),
    (["radius", "{missing}"], 9),
    (["radius", "{constant}", "--dt", "0"], 3),
    (["ingest", "{constant}", "--segment", "1"], 3),
]
# fmt: on


@pytest.mark.parametrize("argv, code", exit_code_cases)
def test_exit_codes(tmp_path, series_file, argv, code):
    files = {
        "constant": series_file([2.0] * 20, name="constant.txt"),
        "missing": tmp_path / "missing.txt",
    }
    bad = tmp_path / "bad.txt"
    bad.write_text("1.0\nnot-a-number\n", encoding="utf-8")
    files["bad"] = bad
    assert main([part.format(**files) for part in argv]) == code


def test_unknown_norm_is_a_usage_error(series_file):
    with pytest.raises(SystemExit) as info:
        main(["radius", str(series_file([1.0, 2.0])), "--norm", "l3"])
    assert info.value.code == 2


def test_alpha_table(capsys):
    assert main(["alpha-table"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "p,d,alpha"
    assert len(lines) == 16
    p, d, alpha = lines[1].split(",")
    assert (p, d) == ("1", "1")
    assert float(alpha) == pytest.approx(1.8431, abs=1e-4)


def test_alpha_table_to_file(tmp_path):
    path = tmp_path / "alpha.csv"
    assert main(["alpha-table", "--max-dim", "2", "-o", str(path)]) == 0
    assert len(read_csv(path)) == 6


def test_ingest_segments(capsys, series_file, rng):
    path = series_file(rng.normal(size=4096))
    assert main(["ingest", str(path), "--segment", "1024", "--dt", "0.002"]) == 0
    summaries = json_lines(capsys.readouterr().out)
    assert [summary["segment"] for summary in summaries] == [0, 1, 2, 3]
    assert all(summary["dt"] == 0.002 for summary in summaries)


def test_embed_delay(capsys, series_file, tmp_path):
    path = series_file(np.sin(2 * np.pi * np.arange(2000) / 40.3))
    curve = tmp_path / "mi.csv"
    assert main(["embed-delay", str(path), "-o", str(curve)]) == 0
    (result,) = json_lines(capsys.readouterr().out)
    assert result["max_tau"] == 200
    assert result["found_minimum"]
    assert 8 <= result["tau"] <= 12
    assert len(read_csv(curve)) == 201


def test_simulate(capsys, tmp_path):
    out = tmp_path / "series"
    assert main(["simulate", "--system", "henon", "--lengths", "40", "--seeds", "2", "--output-dir", str(out)]) == 0
    printed = capsys.readouterr().out.split()
    assert sorted(printed) == sorted(str(out / f"henon_N40_s{i}.txt") for i in range(2))


def test_corrdim_from_config_file(tmp_path):
    out = tmp_path / "corrdim"
    config = tmp_path / "study.cfg"
    config.write_text(f"lengths = 200\nbetas = 0.5\noutput_dir = {out}\n", encoding="utf-8")
    assert main(["corrdim", "-c", str(config), "--seeds", "2"]) == 0
    assert len(read_csv(out / "estimates.csv")) == 4
    assert (out / "manifest.json").is_file()


def test_corrdim_rejects_bad_config_line(tmp_path):
    config = tmp_path / "study.cfg"
    config.write_text("lengths 200\n", encoding="utf-8")
    assert main(["corrdim", "-c", str(config)]) == 4


def test_k2(tmp_path):
    out = tmp_path / "k2"
    grid = ["--k2-radii", "3", "--log-r-min", "-2", "--log-r-max", "-1"]
    argv = ["k2", "--lengths", "300", *grid, "--output-dir", str(out)]
    assert main(argv) == 0
    assert (out / "k2_curve_N300_k0.csv").is_file()


def test_rqa_export(capsys, tmp_path, series_file, rng):
    path = series_file(rng.normal(size=120))
    out = tmp_path / "rqa"
    assert main(["rqa-export", str(path), "-o", str(out), "--radius", "0.5"]) == 0
    (summary,) = json_lines(capsys.readouterr().out)
    assert summary["epsilon"] == 0.5
    assert not summary["reference"]
    assert (out / "recurrence.pbm").read_text(encoding="ascii").startswith("P1\n120 120\n")


def test_compare_rules(capsys, series_file, rng):
    group_a = [str(series_file(rng.normal(size=200), name=f"a{i}.txt")) for i in range(2)]
    group_b = [str(series_file(rng.normal(size=200) * 3.0, name=f"b{i}.txt")) for i in range(2)]
    argv = ["compare-rules", "--group-a", *group_a, "--group-b", *group_b, "--labels", "rest", "task"]
    assert main(argv) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 7
    assert lines[1].startswith("reference,rest,task,2,2,")


def test_compare_rules_segments(capsys, series_file, rng):
    noise = str(series_file(rng.normal(size=800), name="noise.txt"))
    wide = str(series_file(rng.normal(size=800) * 3.0, name="wide.txt"))
    assert main(["compare-rules", "--group-a", noise, "--group-b", wide, "--segment", "200"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].startswith("reference,A,B,4,4,")
