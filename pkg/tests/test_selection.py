import pytest
import numpy as np
from scipy.special import expit
from gcmiss import SelectionParams, InvalidConfigError
from gcmiss._components.selection import (
    selection_logit, selection_loglik, initial_alpha, mh_update_missing_mnar,
    mh_update_alpha)
from gcmiss._components.laplace import al_cdf


def test_selection_params_round_trip():
    params = SelectionParams(-1., 0.2, 0.3)
    assert params.as_array().tolist() == [-1., 0.2, 0.3]
    assert SelectionParams.from_array([-1., 0.2, 0.3]).to_dict() == {
        'alpha0': -1., 'alpha1': 0.2, 'alpha2': 0.3}


def test_selection_params_must_be_finite():
    with pytest.raises(InvalidConfigError):
        SelectionParams(np.inf, 0., 0.)


def test_selection_logit():
    assert selection_logit([0., 0., 0.], 1., 1.) == 0.5
    assert np.isclose(selection_logit(SelectionParams(-1., 0.5, 0.25), 2., 4.),
                      expit(1.))


def test_selection_loglik_counts_occasions_after_first():
    y = np.zeros((3, 4))
    missing = np.zeros((3, 4), dtype=bool)
    missing[0, 3] = True
    # every indicator has probability one half at alpha = 0
    assert np.isclose(selection_loglik(np.zeros(3), y, missing),
                      9 * np.log(0.5))


def test_selection_loglik_is_stable_for_large_predictors():
    y = np.full((2, 3), 1e4)
    missing = np.zeros((2, 3), dtype=bool)
    value = selection_loglik(np.array([0., 1., 1.]), y, missing)
    assert np.isfinite(value)
    assert value < -1e4


def test_selection_loglik_empty():
    assert selection_loglik(np.zeros(3), np.zeros((0, 4)),
                            np.zeros((0, 4), dtype=bool)) == 0.


def test_initial_alpha_matches_missing_rate():
    missing = np.zeros((10, 3), dtype=bool)
    missing[:5, 2] = True
    alpha = initial_alpha(missing)
    assert np.isclose(expit(alpha[0]), 0.25)
    assert alpha[1] == alpha[2] == 0.


def test_missing_update_leaves_observed_cells():
    rng = np.random.default_rng(0)
    y = rng.standard_normal((20, 4))
    missing = rng.random((20, 4)) < 0.3
    new_y, accepted, proposed = mh_update_missing_mnar(
        y, missing, np.zeros((20, 4)), 1., np.zeros(3), 1., rng)
    assert np.all(new_y[~missing] == y[~missing])
    assert np.all(proposed == missing.sum(axis=0))
    assert np.all(accepted <= proposed)


def test_missing_update_without_selection_targets_laplace():
    rng = np.random.default_rng(1)
    N = 4000
    y = np.zeros((N, 2))
    missing = np.zeros((N, 2), dtype=bool)
    missing[:, 1] = True
    location = np.full((N, 2), 3.)
    for _ in range(200):
        y = mh_update_missing_mnar(
            y, missing, location, 1., np.zeros(3), 2., rng)[0]
    draws = y[:, 1]
    assert abs(np.median(draws) - 3.) < 0.15
    assert abs(np.mean(draws < 2.) - al_cdf(2., 3., 1., 0.5)) < 0.03


def test_missing_update_with_selection_shifts_imputations():
    rng = np.random.default_rng(2)
    N = 2000
    y = np.zeros((N, 2))
    missing = np.zeros((N, 2), dtype=bool)
    missing[:, 1] = True
    location = np.zeros((N, 2))
    # missingness more likely for large outcomes pulls imputations up
    for _ in range(200):
        y = mh_update_missing_mnar(
            y, missing, location, 1., np.array([0., 0., 1.]), 2., rng)[0]
    assert np.median(y[:, 1]) > 0.3


def test_alpha_update_concentrates_on_missing_rate():
    rng = np.random.default_rng(3)
    N = 500
    y = 0.1 * rng.standard_normal((N, 3))
    missing = np.zeros((N, 3), dtype=bool)
    missing[:, 1:] = rng.random((N, 2)) < 0.2
    alpha = np.zeros(3)
    draws = []
    accepted = 0
    for i in range(2000):
        alpha, was_accepted = mh_update_alpha(
            alpha, y, missing, rng, 0.01 * np.eye(3), 100.)
        accepted += was_accepted
        if i >= 1000:
            draws.append(alpha)
    intercept = np.mean(np.array(draws)[:, 0])
    assert abs(intercept - np.log(0.25)) < 0.25
    assert 0 < accepted < 2000


def test_alpha_update_recovers_coefficients():
    rng = np.random.default_rng(4)
    truth = np.array([-1., 0.1, 0.])
    N = 500
    y = 2. * rng.standard_normal((N, 4))
    missing = np.zeros((N, 4), dtype=bool)
    for t in range(1, 4):
        missing[:, t] = rng.random(N) < selection_logit(
            truth, y[:, t - 1], y[:, t])
    alpha = np.zeros(3)
    draws = []
    for i in range(4000):
        alpha = mh_update_alpha(
            alpha, y, missing, rng, 0.005 * np.eye(3), 100.)[0]
        if i >= 1000:
            draws.append(alpha)
    medians = np.median(np.array(draws), axis=0)
    assert np.all(np.abs(medians - truth) < 0.3)


if __name__ == '__main__':
    pytest.main([__file__])
