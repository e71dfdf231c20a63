import pytest
import numpy as np
from scipy import stats
from gcmiss import (
    GrowthModelSpec, ParameterSet, ErrorKind, Mechanism, ErrorDistribution,
    MissingSpec, SimulatedDataset, LongitudinalDataset, gen_complete,
    impose_mar, impose_mnar, impose_missingness, InvalidConfigError,
    InvalidDataError, DimensionMismatchError, set_setting)
from gcmiss._components.datagen import (
    gen_errors, gen_random_effects, cumulative_dropout_targets,
    mar_cutoff_levels, mnar_thresholds)

spec = GrowthModelSpec.linear(4)
params = ParameterSet([6., 2.], np.eye(2), 1.)


def complete(N, kind='normal', seed=0):
    return gen_complete(
        spec, params, ErrorDistribution(kind), N, np.random.default_rng(seed))


def test_error_kind_parsing():
    assert ErrorDistribution('t5').kind is ErrorKind.STUDENT_T5
    assert ErrorDistribution('OUTLIERS').kind is ErrorKind.NORMAL_WITH_OUTLIERS
    assert ErrorDistribution(ErrorKind.LOGNORMAL).kind is ErrorKind.LOGNORMAL
    with pytest.raises(InvalidConfigError):
        ErrorDistribution('cauchy')


def test_outlier_rate_only_for_outlier_kind():
    assert ErrorDistribution('normal', outlier_rate=0.2).outlier_rate == 0.
    assert ErrorDistribution('outliers').outlier_rate == 0.05


def test_gen_complete_is_fully_observed():
    sim = complete(50)
    assert sim.data.values.shape == (50, 4)
    assert sim.data.mask.all()
    assert sim.true_effects.shape == (50, 2)
    assert np.all(sim.data.values == sim.complete_values)


def test_gen_complete_is_reproducible():
    assert np.all(complete(20, seed=4).complete_values ==
                  complete(20, seed=4).complete_values)
    assert not np.all(complete(20, seed=4).complete_values ==
                      complete(20, seed=5).complete_values)


def test_gen_complete_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        gen_complete(spec, ParameterSet([1.], [[1.]], 1.),
                     ErrorDistribution('normal'), 10, 0)


def test_random_effects_moments():
    effects = gen_random_effects(params, 100000, np.random.default_rng(1))
    assert np.allclose(effects.mean(axis=0), [6., 2.], atol=0.02)
    assert np.allclose(np.cov(effects, rowvar=False), np.eye(2), atol=0.02)


@pytest.mark.parametrize('kind', ['normal', 't5', 'lognormal'])
def test_standardized_errors_have_mean_zero_and_unit_variance(kind):
    errors = gen_errors(ErrorDistribution(kind), 50000, 4, 1.,
                        np.random.default_rng(2))
    assert abs(errors.mean()) < 0.02
    assert abs(errors.var() - 1.) < 0.15


def test_raw_errors_when_standardization_is_off():
    set_setting('standardize_errors', False)
    dist = ErrorDistribution('lognormal')
    assert not dist.standardize
    errors = gen_errors(dist, 50000, 4, 1., np.random.default_rng(2))
    assert abs(errors.mean() - np.exp(0.5)) < 0.05
    assert errors.min() > 0
    assert ErrorDistribution('t5', standardize=True).standardize
    assert ErrorDistribution('lognormal', standardize=False).median(4.) == 2.



def test_outlier_errors_are_shifted():
    dist = ErrorDistribution('outliers', outlier_rate=0.1, outlier_shift=50.)
    errors = gen_errors(dist, 10000, 4, 1., np.random.default_rng(3))
    assert abs(np.mean(errors > 25.) - 0.1) < 0.01


def test_error_medians():
    assert ErrorDistribution('normal').median(4.) == 0.
    lognormal = ErrorDistribution('lognormal').median(1.)
    assert lognormal < 0.
    draws = gen_errors(ErrorDistribution('lognormal'), 50000, 2, 1.,
                       np.random.default_rng(4))
    assert abs(np.median(draws) - lognormal) < 0.02
    outliers = ErrorDistribution('outliers', outlier_rate=0.2, outlier_shift=5.)
    median = outliers.median(1.)
    assert 0. < median < 5.


def test_cumulative_targets_average_to_rate():
    targets = cumulative_dropout_targets(4, 0.15)
    assert np.allclose(targets, [0.1, 0.2, 0.3])
    assert np.isclose(np.sum(targets) / 4., 0.15)
    assert np.allclose(mar_cutoff_levels(4, 0.15), [0.9, 0.8, 0.7])


def test_mar_levels_reject_large_rate():
    with pytest.raises(InvalidConfigError):
        mar_cutoff_levels(4, 0.6)


def test_mar_hits_target_rates():
    sim = impose_mar(complete(1000), 0.15)
    mask = sim.data.mask
    assert mask[:, 0].all()
    assert np.allclose(sim.data.missing_rates(), [0., 0.1, 0.2, 0.3],
                       atol=0.005)
    assert abs(sim.data.overall_missing_rate() - 0.15) < 0.005


def test_mar_is_monotone_and_outcome_driven():
    sim = impose_mar(complete(500, seed=7), 0.30)
    mask = sim.data.mask
    assert np.all(mask[:, 1:] <= mask[:, :-1])
    values = sim.complete_values
    dropped = ~mask[:, 1]
    assert values[dropped, 0].min() > values[~dropped, 0].max()


def test_mar_zero_rate_keeps_everything():
    sim = impose_mar(complete(100), 0.)
    assert sim.data.mask.all()


def test_mnar_thresholds():
    thresholds = mnar_thresholds(4, 0.15, 0.8)
    scale = np.sqrt(0.8**2 + 1.)
    assert np.all(np.isfinite(thresholds))
    assert np.allclose(
        thresholds, stats.norm.ppf([0.9, 0.8, 0.7], scale=scale))
    assert thresholds[0] > thresholds[1] > thresholds[2]


def test_mnar_rates_grow_over_occasions_and_store_aux():
    sim = impose_mnar(complete(5000), params, 0.8, 0.15,
                      np.random.default_rng(8))
    mask = sim.data.mask
    assert mask[:, 0].all()
    assert np.all(mask[:, 2] <= mask[:, 1])
    assert np.all(mask[:, 3] <= mask[:, 2])
    assert np.allclose(sim.data.missing_rates(), [0., 0.1, 0.2, 0.3],
                       atol=0.02)
    assert abs(sim.data.overall_missing_rate() - 0.15) < 0.01
    assert sim.data.aux is not None
    assert sim.data.without_aux().aux is None


def test_mnar_aux_tracks_slope():
    sim = impose_mnar(complete(50000, seed=3), params, 0.8, 0.15,
                      np.random.default_rng(9))
    slope = sim.true_effects[:, 1]
    expected = 0.8 / np.sqrt(0.8**2 + 1.)
    assert abs(np.corrcoef(sim.data.aux, slope)[0, 1] - expected) < 0.01



def test_impose_missingness_dispatch():
    sim = complete(200)
    none = impose_missingness(sim, MissingSpec('none'), params, 0)
    assert none.data.mask.all()
    mar = impose_missingness(sim, MissingSpec('MAR', 0.15), params, 0)
    assert not mar.data.mask.all()
    mnar = impose_missingness(sim, MissingSpec('MNAR', 0.15), params, 0)
    assert mnar.data.aux is not None


def test_missing_spec_validation():
    with pytest.raises(InvalidConfigError):
        MissingSpec('none', 0.1)
    with pytest.raises(InvalidConfigError):
        MissingSpec('MAR', 1.)
    assert MissingSpec('mnar').mechanism is Mechanism.MNAR
    assert MissingSpec('MNAR', 0.1).r == 0.8


def test_simulated_dataset_checks_observed_values():
    data = LongitudinalDataset([[1., 2.]])
    with pytest.raises(InvalidDataError):
        SimulatedDataset(data, np.zeros((1, 2)), np.array([[1., 3.]]))


if __name__ == '__main__':
    pytest.main([__file__])
