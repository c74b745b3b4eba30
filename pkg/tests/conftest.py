import numpy as np
import pytest
from refradius.norms import NormKind, TimeSeries, Trajectory
from refradius.seeding import make_rng
from refradius.systems import Henon, SystemSpec, generate


@pytest.fixture
def rng():
    return make_rng(12345)


@pytest.fixture
def henon_series():
    """Hénon x series of 500 samples after the default transient."""
    return generate(SystemSpec(Henon(), length=500, seed=7)).series


@pytest.fixture
def random_trajectory(rng):
    def make(n=40, d=2, norm=NormKind.L2, scale=1.0):
        return Trajectory(rng.uniform(0.0, scale, size=(n, d)), norm=norm)

    return make


@pytest.fixture
def random_series(rng):
    def make(n=200, dt=1.0):
        return TimeSeries(rng.normal(size=n), dt)

    return make


@pytest.fixture
def series_file(tmp_path):
    """Write values one per line and return the path."""

    def write(values, name="series.txt", header=None):
        path = tmp_path / name
        lines = [] if header is None else [header]
        lines.extend(repr(float(value)) for value in values)
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return write


# Counting by definition, used as the reference for the vectorised counts
def _brute_force_correlation_sum(points, r, norm, include_self_pairs=True):
    points = np.asarray(points, dtype=float).reshape(len(points), -1)
    n = len(points)
    count = 0
    for i in range(n):
        for j in range(n):
            if i == j and not include_self_pairs:
                continue
            if np.linalg.norm(points[i] - points[j], ord=norm.p) < r:
                count += 1
    return count / (n * n if include_self_pairs else n * (n - 1))


def _brute_force_diagonal_counts(values, epsilon, m_max, include_self_pairs=True):
    values = list(values)
    length = len(values)
    counts = []
    for m in range(1, m_max + 1):
        count = 0
        for i in range(length - m + 1):
            for j in range(length - m + 1):
                if i == j and not include_self_pairs:
                    continue
                if all(abs(values[i + k] - values[j + k]) < epsilon for k in range(m)):
                    count += 1
        counts.append(count)
    return counts


@pytest.fixture
def brute_force_correlation_sum():
    return _brute_force_correlation_sum


@pytest.fixture
def brute_force_diagonal_counts():
    return _brute_force_diagonal_counts
