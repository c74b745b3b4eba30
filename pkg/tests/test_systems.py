import re

import numpy as np
import pytest
from refradius.errors import ArgumentError, DivergenceError
from refradius.norms import TimeSeries
from refradius.systems import (
    Henon,
    Lorenz,
    Rossler,
    SystemSpec,
    add_observational_noise,
    draw_initial_state,
    generate,
    system_by_name,
)


def test_henon_from_origin_without_transient():
    result = generate(SystemSpec(Henon(), length=3, transient=0, initial_state=(0.0, 0.0)))
    assert result.series.values.tolist() == pytest.approx([0.0, 1.0, -0.4])
    np.testing.assert_allclose(result.states, [[0.0, 0.0], [1.0, 0.0], [-0.4, 0.3]])
    assert result.series.dt == 1.0


def test_lorenz_stays_at_origin_equilibrium():
    result = generate(SystemSpec(Lorenz(), length=50, transient=0, initial_state=(0.0, 0.0, 0.0)))
    assert np.all(result.states == 0.0)
    assert result.times[-1] == pytest.approx(49 * 0.01)


@pytest.mark.parametrize("system", [Henon(), Lorenz(), Rossler()])
def test_generation_is_deterministic(system):
    first = generate(SystemSpec(system, length=200, seed=11))
    again = generate(SystemSpec(system, length=200, seed=11))
    other = generate(SystemSpec(system, length=200, seed=12))
    assert np.array_equal(first.series.values, again.series.values)
    assert not np.array_equal(first.series.values, other.series.values)


def test_henon_orbit_stays_on_attractor():
    result = generate(SystemSpec(Henon(), length=5000, seed=3))
    assert np.all(np.abs(result.series.values) <= 1.5)
    assert np.all(np.abs(result.states[:, 1]) <= 0.45)


def test_rossler_converges_with_tolerance():
    start = (1.0, -1.0, 0.5)
    coarse = generate(SystemSpec(Rossler(), length=100, transient=0, initial_state=start, rtol=1e-9, atol=1e-12))
    fine = generate(SystemSpec(Rossler(), length=100, transient=0, initial_state=start, rtol=1e-11, atol=1e-13))
    np.testing.assert_allclose(coarse.series.values, fine.series.values, atol=1e-6)


def test_flow_sampling_steps():
    assert generate(SystemSpec(Rossler(), length=10, seed=1)).series.dt == 0.05
    assert generate(SystemSpec(Lorenz(), length=10, seed=1)).series.dt == 0.01


def test_default_transients():
    assert SystemSpec(Lorenz(), length=10).discarded == 1000
    assert SystemSpec(Henon(), length=10).discarded == 100
    assert SystemSpec(Henon(), length=10, transient=5).discarded == 5


def test_initial_state_draw_is_inside_box():
    low, high = Lorenz().initial_box()
    for seed in range(20):
        state = draw_initial_state(Lorenz(), seed)
        assert np.all(state >= low)
        assert np.all(state <= high)


def test_divergent_map_is_reported():
    with pytest.raises(DivergenceError, match="left the region"):
        generate(SystemSpec(Henon(a=5.0), length=50, transient=0, initial_state=(0.0, 0.0)))


# fmt: off
bad_spec_cases = [
    (dict(length=1), "Length must be an integer >= 2, got 1"),
    (dict(length=10, transient=-1), "Transient must be a nonnegative integer, got -1"),
    (dict(length=10, initial_state=(0.0,)), "henon needs a 2-dimensional initial state, got 1"),
]
# fmt: on


@pytest.mark.parametrize("kwargs, message", bad_spec_cases)
def test_system_spec_validation(kwargs, message):
    with pytest.raises(ArgumentError, match=re.escape(message)):
        SystemSpec(Henon(), **kwargs)


@pytest.mark.parametrize("name, cls", [("henon", Henon), ("Lorenz", Lorenz), (" rossler ", Rossler)])
def test_system_by_name(name, cls):
    assert isinstance(system_by_name(name), cls)


def test_system_by_name_unknown():
    with pytest.raises(ArgumentError, match="Unknown system 'duffing'"):
        system_by_name("duffing")


def test_noise_standard_deviation(rng):
    series = TimeSeries(rng.normal(0.0, 2.0, size=20_000))
    noisy = add_observational_noise(series, 0.1, seed=5)
    noise = noisy.values - series.values
    assert np.std(noise, ddof=1) == pytest.approx(0.1 * np.std(series.values, ddof=1), rel=0.03)
    assert abs(np.mean(noise)) < 0.01


def test_noise_is_seeded(random_series):
    series = random_series(100)
    first = add_observational_noise(series, 0.2, seed=9)
    assert np.array_equal(first.values, add_observational_noise(series, 0.2, seed=9).values)
    assert add_observational_noise(series, 0.0, seed=9) is series


def test_noise_rejects_negative_level(random_series):
    with pytest.raises(ArgumentError, match=re.escape("Noise level must be >= 0, got -0.1")):
        add_observational_noise(random_series(), -0.1, seed=1)
