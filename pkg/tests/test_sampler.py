import numpy as np
import pytest
from scipy import stats

from covering_lab.common.exceptions import UnsupportedDimensionError
from covering_lab.sampler import RngStream, derive, haar_rotation, haar_rotations, uniform_at, uniform_point, \
    uniform_points


def test_streams_are_keyed_by_path():
    root = RngStream(42)
    a = uniform_points(derive(root, 3).derive(5), 4, 2)
    # drawing from an unrelated stream first changes nothing
    uniform_points(root.derive(7), 100, 2)
    b = uniform_points(RngStream(42, (3, 5)), 4, 2)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, uniform_points(root.derive(3).derive(6), 4, 2))
    assert not np.array_equal(a, uniform_points(RngStream(43, (3, 5)), 4, 2))


def test_seed_must_be_u64():
    with pytest.raises(ValueError):
        RngStream(-1)
    with pytest.raises(ValueError):
        RngStream(1 << 64)
    RngStream((1 << 64) - 1)


def test_truncated_batches_agree():
    stream = RngStream(9)
    assert np.array_equal(uniform_points(stream, 10, 2)[:4], uniform_points(stream, 4, 2))
    assert np.array_equal(uniform_point(stream, 2), uniform_points(stream, 1, 2)[0])


def test_uniform_points_moments_and_ks():
    points = uniform_points(RngStream(1), 10 ** 5, 2)
    assert points.min() >= -0.5
    assert points.max() < 0.5
    assert np.all(np.abs(points.mean(axis=0)) <= 0.005)
    assert np.all(np.abs(points.var(axis=0) - 1 / 12) <= 0.002)
    statistic = stats.kstest(points[:10 ** 4, 0] + 0.5, "uniform").statistic
    # 1% critical value for n = 10^4
    assert statistic < 1.63 / np.sqrt(10 ** 4)


@pytest.mark.parametrize("d", [2, 3])
def test_haar_rotations_are_orthogonal(d):
    rotations = haar_rotations(RngStream(2), 10 ** 4, d)
    gram = np.einsum("nki,nkj->nij", rotations, rotations)
    assert np.abs(gram - np.eye(d)).max() < 1e-12
    determinants = np.linalg.det(rotations)
    assert np.allclose(np.abs(determinants), 1.0)
    reflections = np.mean(determinants < 0)
    assert abs(reflections - 0.5) < 0.03


@pytest.mark.parametrize("d", [2, 3])
def test_haar_columns_are_uniform_on_the_sphere(d):
    rotations = haar_rotations(RngStream(3), 10 ** 4, d)
    assert np.abs(rotations.mean(axis=0)).max() < 0.05
    first = rotations[:, :, 0]
    assert np.allclose((first ** 2).mean(axis=0), 1 / d, atol=0.02)


def test_haar_angle_is_uniform():
    rotations = haar_rotations(RngStream(4), 10 ** 4, 2)
    angles = np.arctan2(rotations[:, 1, 0], rotations[:, 0, 0]) / (2 * np.pi) + 0.5
    assert stats.kstest(angles, "uniform").statistic < 1.63 / np.sqrt(10 ** 4)


def test_haar_unsupported_dimension():
    with pytest.raises(UnsupportedDimensionError, match="unsupported dimension"):
        haar_rotation(RngStream(0), 4)


def test_uniform_at_is_counter_based():
    stream = RngStream(6, (1,))
    values = uniform_at(stream, np.arange(10 ** 4))
    assert np.array_equal(values[[5, 17]], uniform_at(stream, [5, 17]))
    assert values.min() >= 0.0
    assert values.max() < 1.0
    assert stats.kstest(values, "uniform").statistic < 1.63 / np.sqrt(10 ** 4)
    assert not np.array_equal(values[:10], uniform_at(stream.derive(0), np.arange(10)))


def test_derived_streams_are_uncorrelated():
    root = RngStream(7)
    draws = np.stack([uniform_points(root.derive(child), 10 ** 6, 1)[:, 0] for child in range(4)])
    correlations = np.corrcoef(draws)
    assert np.abs(correlations[np.triu_indices(4, k=1)]).max() < 0.01


def test_consecutive_draws_are_independent():
    x = uniform_points(RngStream(8), 10 ** 5, 1)[:, 0] + 0.5
    bins = np.minimum((x * 10).astype(int), 9)
    table = np.zeros((10, 10), dtype=np.int64)
    np.add.at(table, (bins[:-1], bins[1:]), 1)
    assert stats.chi2_contingency(table)[1] > 1e-3
