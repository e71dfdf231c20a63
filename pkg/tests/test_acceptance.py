"""
Monte Carlo checks of the estimators against the behaviour of the full
simulation study. Most are marked slow; run them with GCM_RUN_SLOW=1.
"""
import pytest
import os
import numpy as np
from scipy import stats
from gcmiss import (
    GrowthModelSpec, ParameterSet, ErrorDistribution, RmbPriors, Condition,
    gen_complete, fiml_fit, ingest_csv, tsre_fit, rmb_fit, ChainConfig,
    implied_covariance, geweke_z, effective_sample_size,
    run_condition, set_profile)
from gcmiss._components.diagnostics import geweke_passes
from gcmiss._components.rmb import SamplerContext, build_sweep
from gcmiss._core.util import named_streams

slow = pytest.mark.slow
base_seed = 20240101
spec = GrowthModelSpec.linear(4)
truth = ParameterSet([6., 2.], np.eye(2), 1.)


def slope_table(condition, methods, reps):
    result = run_condition(condition, methods, reps, base_seed, n_jobs=-1)
    table = result.table()
    return table[table['parameter'] == 'beta_S'].set_index('method')


def test_fiml_matches_grid_search():
    data = gen_complete(spec, truth, ErrorDistribution('normal'), 20,
                        np.random.default_rng(0)).data
    fit = fiml_fit(spec, data)
    covariance = implied_covariance(spec, fit.estimates)
    grid = np.arange(-10, 11) * 0.01
    centre = np.round(fit.estimates.beta, 2)
    best, best_beta = -np.inf, None
    for intercept in centre[0] + grid:
        for slope in centre[1] + grid:
            beta = np.array([intercept, slope])
            loglik = stats.multivariate_normal.logpdf(
                data.values, spec.loadings.dot(beta), covariance).sum()
            if loglik > best:
                best, best_beta = loglik, beta
    assert np.all(np.abs(best_beta - fit.estimates.beta) <= 0.02)


@slow
def test_normal_mar_baseline_has_small_bias():
    table = slope_table(Condition(200, 'MAR', 0.15, 'normal'),
                        ('fiml', 'tsre', 'rmb'), 200)
    for method in ('fiml', 'tsre', 'rmb'):
        assert table.loc[method, 'rb'] < 5.


@slow
def test_lognormal_high_missingness_favours_rmb():
    table = slope_table(Condition(500, 'MAR', 0.30, 'lognormal'),
                        ('fiml', 'tsre', 'rmb'), 100)
    assert table.loc['fiml', 'rb'] > 10. - 1.5
    assert table.loc['tsre', 'rb'] > 10. - 1.5
    assert table.loc['rmb', 'rb'] < 10. + 1.5
    assert table.loc['rmb', 'rb'] < table.loc['fiml', 'rb']
    assert table.loc['rmb', 'rb'] < table.loc['tsre', 'rb']


@slow
def test_outliers_with_mnar_favour_rmb():
    table = slope_table(Condition(500, 'MNAR', 0.15, 'outliers'),
                        ('fiml', 'tsre', 'rmb'), 100)
    for method in ('fiml', 'tsre'):
        assert table.loc['rmb', 'rb'] < table.loc[method, 'rb']
        assert table.loc['rmb', 'mse'] < table.loc[method, 'mse']


@slow
def test_mnar_error_shrinks_with_sample_size():
    errors = []
    for n in (100, 200, 500):
        table = slope_table(Condition(n, 'MNAR', 0.15, 'normal'),
                            ('fiml', 'tsre', 'rmb'), 100)
        errors.append(table['mse'])
    for method in ('fiml', 'tsre', 'rmb'):
        assert errors[0][method] >= errors[1][method] >= errors[2][method]


@slow
def test_selection_model_agrees_on_mar_data():
    result = run_condition(Condition(200, 'MAR', 0.15, 'normal'),
                           ('rmb', 'rmb-selection'), 50, base_seed, n_jobs=-1)
    for parameter in ('beta_L', 'beta_S'):
        plain = result.estimates('rmb', parameter, converged_only=False)
        selection = result.estimates(
            'rmb-selection', parameter, converged_only=False)
        standard_error = np.sqrt(
            plain.var(ddof=1) / plain.size +
            selection.var(ddof=1) / selection.size)
        assert abs(plain.mean() - selection.mean()) < 2 * standard_error


@slow
def test_geweke_calibration():
    rng = np.random.default_rng(1)
    passes = [geweke_passes(geweke_z(rng.standard_normal(10000)))
              for _ in range(1000)]
    assert 0.93 <= np.mean(passes) <= 0.97
    ramp = np.linspace(0., 1., 2000)
    drifting = [geweke_passes(geweke_z(ramp + 0.1 * rng.standard_normal(2000)))
                for _ in range(100)]
    assert not any(drifting)


def _forward_draw(priors, N, rng):
    q, T = spec.q, spec.T
    beta = priors.beta_mean + np.sqrt(priors.beta_var) * rng.standard_normal(q)
    psi = np.atleast_2d(stats.invwishart.rvs(
        df=priors.psi_df(q), scale=priors.psi_scale * np.eye(q),
        random_state=rng))
    sigma = priors.sigma_rate / rng.gamma(priors.sigma_shape)
    u = rng.multivariate_normal(np.zeros(q), psi, size=N)
    w = rng.exponential(sigma, size=(N, T))
    return {'beta': beta, 'psi': psi, 'sigma': sigma, 'u': u, 'w': w,
            'y': _outcomes(beta, u, sigma, w, rng)}


def _outcomes(beta, u, sigma, w, rng):
    locations = (beta[None, :] + u).dot(spec.loadings.T)
    return locations + np.sqrt(8. * sigma * w) * rng.standard_normal(w.shape)


def _moments(state):
    return [state['beta'][0], state['beta'][1], state['psi'][0, 0],
            state['psi'][1, 1], state['sigma']]


@slow
def test_sampler_joint_distribution():
    priors = RmbPriors(beta_mean=0., beta_var=1., psi_scale=1.,
                       psi_df_offset=6, sigma_shape=3., sigma_rate=2.)
    N, draws = 5, 20000
    rng = np.random.default_rng(2)
    forward = np.array([_moments(_forward_draw(priors, N, rng))
                        for _ in range(draws)])
    state = _forward_draw(priors, N, rng)
    context = SamplerContext(spec, state['y'], np.ones((N, spec.T), bool),
                             priors)
    sweep = build_sweep(context)
    rngs = named_streams(3, ('w', 'u', 'beta', 'psi', 'sigma', 'impute'))
    successive = []
    for _ in range(draws):
        state = sweep(state, context, rngs)
        state['y'] = _outcomes(state['beta'], state['u'], state['sigma'],
                               state['w'], rng)
        successive.append(_moments(state))
    successive = np.array(successive)
    for j in range(forward.shape[1]):
        chain = successive[:, j]
        standard_error = np.sqrt(
            forward[:, j].var() / draws +
            chain.var() / effective_sample_size(chain))
        assert abs(forward[:, j].mean() - chain.mean()) < 3 * standard_error


@pytest.mark.skipif('GCM_TABLE_DATA' not in os.environ,
                    reason='set GCM_TABLE_DATA to the wide-format scores CSV')
@slow
def test_empirical_estimates():
    set_profile('paper')
    data = ingest_csv(os.environ['GCM_TABLE_DATA'])
    model = GrowthModelSpec.linear(data.T)
    fiml = fiml_fit(model, data).estimates
    assert np.allclose(fiml.beta, [60.62, 3.10], atol=0.05)
    tsre = tsre_fit(model, data).estimates
    assert np.allclose(tsre.beta, [61.04, 3.20], atol=0.05)
    rmb = rmb_fit(model, data, config=ChainConfig(seed=base_seed),
                  selection=True).estimates
    assert np.allclose(rmb.beta, [60.60, 3.17], atol=0.2)
    assert abs(rmb.psi[1, 1] - 0.44) < 0.2


if __name__ == '__main__':
    pytest.main([__file__])
