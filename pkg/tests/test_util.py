import pytest
import numpy as np
from gcmiss._core.util import (
    ensure_rng, stable_seed, named_streams, symmetrize, ordered_sum,
    occasion_moments, pooled_occasion_variance)


def test_ensure_rng_passes_generators_through():
    rng = np.random.default_rng(1)
    assert ensure_rng(rng) is rng


def test_ensure_rng_from_seed_is_reproducible():
    assert ensure_rng(5).random() == ensure_rng(5).random()


def test_stable_seed_is_deterministic_and_distinct():
    assert stable_seed('n200-MAR-mr15-normal', 3, 1) == stable_seed(
        'n200-MAR-mr15-normal', 3, 1)
    assert stable_seed('a', 1) != stable_seed('a', 2)
    assert 0 <= stable_seed('a') < 2**64


def test_named_streams_are_distinct():
    rngs = named_streams(0, ('a', 'b'))
    assert set(rngs.keys()) == {'a', 'b'}
    assert rngs['a'].random() != rngs['b'].random()


def test_symmetrize():
    matrix = np.array([[1., 2.], [0., 1.]])
    assert np.all(symmetrize(matrix) == [[1., 1.], [1., 1.]])


def test_ordered_sum_ignores_order():
    values = np.array([1e16, 1., -1e16, 3.5, 0.1])
    assert ordered_sum(values) == ordered_sum(values[::-1])


def test_occasion_moments():
    values = np.array([[1., 2.], [3., 0.], [5., 6.]])
    mask = np.array([[True, True], [True, False], [True, True]])
    means, variances = occasion_moments(values, mask)
    assert np.allclose(means, [3., 4.])
    assert np.allclose(variances, [8. / 3., 4.])


def test_occasion_moments_too_few_observations():
    values = np.array([[1., 2.], [3., 0.]])
    mask = np.array([[True, False], [True, False]])
    means, variances = occasion_moments(values, mask)
    assert np.isnan(means[1])
    assert np.isnan(variances[1])


def test_pooled_variance_falls_back_to_one():
    values = np.array([[1., 1.], [1., 1.]])
    mask = np.ones((2, 2), dtype=bool)
    assert pooled_occasion_variance(values, mask) == 1.


if __name__ == '__main__':
    pytest.main([__file__])
