import pytest
import numpy as np
from gcmiss import (
    GrowthModelSpec, ParameterSet, LongitudinalDataset, FitResult,
    implied_mean, implied_covariance, parameter_names,
    DimensionMismatchError, NonPositiveDefiniteError, InvalidDataError,
    DroppedSubjectWarning)
from gcmiss._core.model import missingness_patterns, observed_subproblem
from gcmiss._core.parameterization import pack, unpack, n_free_parameters


def test_linear_spec_loadings():
    spec = GrowthModelSpec.linear(4)
    assert spec.T == 4
    assert spec.q == 2
    assert np.all(spec.loadings[:, 0] == 1.)
    assert np.all(spec.loadings[:, 1] == [0., 1., 2., 3.])


def test_spec_needs_two_occasions():
    with pytest.raises(DimensionMismatchError):
        GrowthModelSpec([[1., 0.]])


def test_spec_needs_full_rank():
    with pytest.raises(DimensionMismatchError):
        GrowthModelSpec([[1., 1.], [1., 1.], [1., 1.]])


def test_spec_loadings_are_read_only():
    spec = GrowthModelSpec.linear(3)
    with pytest.raises(ValueError):
        spec.loadings[0, 0] = 5.


def test_parameter_names_order():
    assert parameter_names(2) == [
        'beta_L', 'beta_S', 'psi_LL', 'psi_LS', 'psi_SS', 'sigma2_e']


def test_parameter_set_rejects_non_positive_definite_psi():
    with pytest.raises(NonPositiveDefiniteError):
        ParameterSet([6., 2.], [[1., 2.], [2., 1.]], 1.)


def test_parameter_set_rejects_zero_error_variance():
    with pytest.raises(NonPositiveDefiniteError):
        ParameterSet([6., 2.], np.eye(2), 0.)


def test_parameter_set_unchecked_accepts_indefinite_psi():
    params = ParameterSet([6., 2.], [[1., 2.], [2., 1.]], 1., check=False)
    assert params.psi[0, 1] == 2.


def test_parameter_set_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        ParameterSet([6., 2.], np.eye(3), 1.)


def test_parameter_vector_order():
    params = ParameterSet([6., 2.], [[1., 0.3], [0.3, 0.5]], 0.8)
    assert np.allclose(params.as_vector(), [6., 2., 1., 0.3, 0.5, 0.8])
    assert params.as_dict()['psi_LS'] == 0.3
    back = ParameterSet.from_vector(params.as_vector(), 2)
    assert np.allclose(back.psi, params.psi)


def test_implied_moments_at_identity():
    spec = GrowthModelSpec.linear(4)
    params = ParameterSet([6., 2.], np.eye(2), 1.)
    assert np.allclose(implied_mean(spec, params), [6., 8., 10., 12.])
    sigma = implied_covariance(spec, params)
    assert np.allclose(np.diag(sigma), [2., 3., 6., 11.])
    assert sigma[0, 3] == 1.
    assert sigma[1, 2] == 3.


def test_implied_covariance_psi_zero_is_error_only():
    spec = GrowthModelSpec.linear(3)
    params = ParameterSet([0., 0.], np.zeros((2, 2)), 2., check=False)
    with pytest.raises(NonPositiveDefiniteError):
        implied_covariance(spec, params)


def test_implied_moments_dimension_mismatch():
    spec = GrowthModelSpec.linear(4)
    params = ParameterSet([1.], [[1.]], 1.)
    with pytest.raises(DimensionMismatchError):
        implied_mean(spec, params)


def test_subsetting_commutes_with_implied_moments():
    rng = np.random.default_rng(11)
    spec = GrowthModelSpec.linear(5)
    for _ in range(200):
        factor = rng.standard_normal((2, 2))
        params = ParameterSet(
            rng.standard_normal(2), factor.dot(factor.T) + 0.1 * np.eye(2),
            rng.uniform(0.1, 2.))
        mask = rng.random(5) < 0.6
        if mask.sum() < 2:
            continue
        index = np.flatnonzero(mask)
        sub_spec = GrowthModelSpec(spec.loadings[index])
        assert np.allclose(implied_mean(spec, params)[index],
                           implied_mean(sub_spec, params))
        assert np.allclose(
            implied_covariance(spec, params)[np.ix_(index, index)],
            implied_covariance(sub_spec, params))



def test_dataset_zeroes_masked_cells():
    data = LongitudinalDataset([[1., 99.], [3., 4.]], [[True, False], [True, True]])
    assert data.values[0, 1] == 0.
    assert np.isnan(data.to_array()[0, 1])
    assert data.subject_ids == ('1', '2')


def test_dataset_mask_from_nan():
    data = LongitudinalDataset([[1., np.nan], [3., 4.]])
    assert data.mask.tolist() == [[True, False], [True, True]]
    assert data.overall_missing_rate() == 0.25
    assert np.allclose(data.missing_rates(), [0., 0.5])


def test_dataset_rejects_all_missing_subject():
    with pytest.raises(InvalidDataError):
        LongitudinalDataset([[1., 2.], [np.nan, np.nan]])


def test_from_arrays_drops_all_missing_subject():
    with pytest.warns(DroppedSubjectWarning):
        data = LongitudinalDataset.from_arrays(
            [[1., 2.], [np.nan, np.nan], [3., np.nan]],
            subject_ids=['a', 'b', 'c'])
    assert data.subject_ids == ('a', 'c')
    assert data.N == 2


def test_from_arrays_all_missing_raises():
    with pytest.raises(InvalidDataError):
        with pytest.warns(DroppedSubjectWarning):
            LongitudinalDataset.from_arrays([[np.nan, np.nan]])


def test_dataset_with_mask_only_removes():
    data = LongitudinalDataset([[1., 2.], [3., np.nan]])
    masked = data.with_mask([[True, False], [True, True]])
    assert masked.mask.tolist() == [[True, False], [True, False]]


def test_observed_subproblem():
    data = LongitudinalDataset([[1., np.nan, 3.]])
    values, index = observed_subproblem(data, 0)
    assert values.tolist() == [1., 3.]
    assert index.tolist() == [0, 2]


def test_missingness_patterns_group_rows():
    mask = np.array([[True, True], [True, False], [True, True]])
    patterns = missingness_patterns(mask)
    assert len(patterns) == 2
    by_pattern = dict(
        (tuple(index.tolist()), rows.tolist()) for index, rows in patterns)
    assert by_pattern[(0, 1)] == [0, 2]
    assert by_pattern[(0,)] == [1]


def test_pack_unpack_recovers_parameters():
    params = ParameterSet([6., 2.], [[1.5, 0.2], [0.2, 0.7]], 0.9)
    theta = pack(params)
    assert theta.size == n_free_parameters(2)
    back = unpack(theta, 2)
    assert np.allclose(back.beta, params.beta)
    assert np.allclose(back.psi, params.psi, atol=1e-10)
    assert np.isclose(back.sigma2_e, params.sigma2_e)


def test_unpack_always_gives_valid_parameters():
    back = unpack(np.array([0., 0., -30., 5., -30., -50.]), 2)
    assert np.all(np.linalg.eigvalsh(back.psi) > 0)
    assert back.sigma2_e > 0


def test_fit_result_to_dict_serializes_arrays():
    result = FitResult(
        'fiml', ParameterSet([6., 2.], np.eye(2), 1.),
        diagnostics={'loglik': -10.}, extras={'weights': np.ones(3)})
    output = result.to_dict()
    assert output['method'] == 'fiml'
    assert output['estimates']['beta_L'] == 6.
    assert output['extras']['weights'] == [1., 1., 1.]


if __name__ == '__main__':
    pytest.main([__file__])
