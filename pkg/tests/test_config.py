import argparse
import re

import numpy as np
import pytest
from refradius.config import AUTO_DELAY, ExperimentConfig
from refradius.errors import ArgumentError, ParseError
from refradius.norms import NormKind
from refradius.systems import Lorenz


def write_config(tmp_path, text):
    path = tmp_path / "experiment.cfg"
    path.write_text(text, encoding="utf-8")
    return path


def test_defaults():
    config = ExperimentConfig()
    assert config.system == "henon"
    assert config.lengths == [200]
    assert config.betas == [0.01, 0.1, 0.5]
    assert config.delay == 1
    assert config.norm is NormKind.L2
    assert config.truth is None
    assert config.include_self_pairs is True
    assert str(config.output_dir) == "out"
    config.validate()


def test_from_file(tmp_path):
    path = write_config(
        tmp_path,
        "# Hénon K2 sweep\n"
        "system = lorenz\n"
        "\n"
        "lengths = 500, 2000   # two lengths\n"
        "noise-levels = 0,0.05\n"
        "delay = auto-mi\n"
        "norm = Linf\n"
        "truth = 0.9\n",
    )
    config = ExperimentConfig.from_file(path)
    assert config.system == "lorenz"
    assert config.lengths == [500, 2000]
    assert config.noise_levels == [0.0, 0.05]
    assert config.delay == AUTO_DELAY
    assert config.norm is NormKind.LINF
    assert config.truth == 0.9
    assert isinstance(config.system_instance(), Lorenz)


# fmt: off
bad_file_cases = [
    ("seeds = 2\nlengths\n", ":2: expected 'key = value'"),
    ("seeds = 2\nseeds = 3\n", ":2: duplicate setting 'seeds'"),
    ("\n\nwindow = 3\n", ":3: Unknown setting 'window'"),
    ("seeds = two\n", ":1: Invalid value 'two' for seeds"),
]
# fmt: on


@pytest.mark.parametrize("text, message", bad_file_cases)
def test_from_file_reports_line(tmp_path, text, message):
    path = write_config(tmp_path, text)
    with pytest.raises(ParseError, match=re.escape(message)) as info:
        ExperimentConfig.from_file(path)
    assert info.value.path == path


def test_from_file_out_of_range_value(tmp_path):
    with pytest.raises(ArgumentError, match=re.escape("betas must lie in (0, 1), got 1.5")):
        ExperimentConfig.from_file(write_config(tmp_path, "betas = 0.1,1.5\n"))


def test_overrides_skip_none():
    config = ExperimentConfig({"seeds": 5, "truth": None, "norm": NormKind.L1})
    assert config.seeds == 5
    assert config.truth is None
    assert config.norm is NormKind.L1
    assert config.as_dict()["norm"] == "l1"


def test_delay_validation():
    config = ExperimentConfig()
    config.delay = 4
    assert config.delay == 4
    with pytest.raises(ArgumentError, match="delay must be an integer >= 1 or 'auto-mi', got 0"):
        config.delay = 0


def test_command_line_layer(tmp_path):
    path = write_config(tmp_path, "seeds = 3\nsystem = rossler\n")
    parser = argparse.ArgumentParser()
    parser.add_argument("-c", "--config")
    ExperimentConfig.add_arguments(parser)
    arguments = parser.parse_args(["-c", str(path), "--seeds", "7", "--grid-points", "30"])
    config = ExperimentConfig.from_arguments(arguments)
    assert (config.seeds, config.system, config.grid_points) == (7, "rossler", 30)


def test_k2_grid():
    config = ExperimentConfig({"log_r_min": -2.0, "log_r_max": 0.0, "k2_radii": 5})
    np.testing.assert_allclose(np.log(config.k2_grid()), [-2.0, -1.5, -1.0, -0.5, 0.0])


# fmt: off
bad_combination_cases = [
    ({"m_lo": 5, "m_hi": 5}, "m_hi must exceed m_lo, got m_lo=5, m_hi=5"),
    ({"log_r_min": 0.5, "log_r_max": 0.5}, "log_r_min must be below log_r_max"),
    ({"grid_min": 0.0}, "grid_min must be positive, got 0.0"),
    ({"dt": 0.0}, "dt must be positive, got 0.0"),
    ({"inputs": "missing-file.txt"}, "Input file(s) not found: missing-file.txt"),
]
# fmt: on


@pytest.mark.parametrize("values, message", bad_combination_cases)
def test_validate_rejects(values, message):
    config = ExperimentConfig(values)
    with pytest.raises(ArgumentError, match=re.escape(message)):
        config.validate()
