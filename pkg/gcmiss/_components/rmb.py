"""
Robust median-based Bayesian estimation of growth curve models.

The working likelihood of every outcome is asymmetric Laplace at the median,
written as a normal scale mixture y_it = b_i' Lambda_t + eta Z sqrt(sigma W_it)
so that every block except the missing outcomes and the selection
coefficients has a standard full conditional. docs/derivations.rst lists
them.
"""
import warnings
import numpy as np
import xarray as xr
from scipy import stats
from .._core.base_components import Estimator, GibbsBlock
from .._core.composite import GibbsSweep
from .._core.model import effect_labels, parameter_names, missingness_patterns
from .._core.settings import get_setting
from .._core.exceptions import (
    InvalidConfigError, InvalidStateError, ConstantChainError,
    ConvergenceWarning)
from .._core.util import (
    named_streams, symmetrize, occasion_moments, pooled_occasion_variance)
from .laplace import al_mixture_draw, mixture_constants, sample_gig
from .selection import (
    SelectionParams, initial_alpha, mh_update_missing_mnar, mh_update_alpha)
from .diagnostics import geweke_z, geweke_passes
from .monitors import DrawMonitor

median_level = 0.5
stream_names = ('w', 'u', 'beta', 'psi', 'sigma', 'impute', 'alpha')
selection_names = ('alpha0', 'alpha1', 'alpha2')
# sigma2_e reported by the sampler is the AL variance, median_eta2 sigma^2
median_eta2 = mixture_constants(median_level)[1]


class RmbPriors(object):
    """
    Prior hyperparameters.

    Attributes
    ----------
    beta_mean : float
        Prior mean of every fixed effect.
    beta_var : float
        Prior variance of every fixed effect.
    psi_scale : float
        The inverse-Wishart scale matrix is psi_scale times the identity.
    psi_df_offset : int
        Inverse-Wishart degrees of freedom are q plus this offset.
    sigma_shape, sigma_rate : float
        Inverse-gamma prior of the asymmetric Laplace scale.
    alpha_var : float
        Normal prior variance of each selection coefficient.
    """

    def __init__(self, beta_mean=None, beta_var=None, psi_scale=None,
                 psi_df_offset=None, sigma_shape=None, sigma_rate=None,
                 alpha_var=None):
        def pick(value, name):
            return get_setting(name) if value is None else value
        self.beta_mean = float(pick(beta_mean, 'beta_prior_mean'))
        self.beta_var = float(pick(beta_var, 'beta_prior_variance'))
        self.psi_scale = float(pick(psi_scale, 'psi_prior_scale'))
        self.psi_df_offset = pick(psi_df_offset, 'psi_prior_df_offset')
        self.sigma_shape = float(pick(sigma_shape, 'sigma_prior_shape'))
        self.sigma_rate = float(pick(sigma_rate, 'sigma_prior_rate'))
        self.alpha_var = float(pick(alpha_var, 'alpha_prior_variance'))
        for name in ('beta_var', 'psi_scale', 'sigma_shape', 'sigma_rate',
                     'alpha_var'):
            if not getattr(self, name) > 0:
                raise InvalidConfigError(
                    'Prior hyperparameter {} must be positive'.format(name))
        if self.psi_df_offset <= 0:
            raise InvalidConfigError('psi_df_offset must be positive')

    def beta_mean_vector(self, q):
        return np.full(q, self.beta_mean)

    def psi_df(self, q):
        return q + self.psi_df_offset

    def __repr__(self):
        return ('RmbPriors(beta=N({}, {}), psi=IW({} I, q+{}), '
                'sigma=IG({}, {}), alpha=N(0, {}))').format(
            self.beta_mean, self.beta_var, self.psi_scale, self.psi_df_offset,
            self.sigma_shape, self.sigma_rate, self.alpha_var)


class ChainConfig(object):
    """
    Chain length and Metropolis settings.

    Attributes
    ----------
    n_iter : int
        Total iterations including burn-in.
    burnin : int
        Iterations discarded. Defaults to burnin_fraction of n_iter.
    seed : int
    mh_step : float
        Initial random-walk scale of the Metropolis updates.
    adapt_interval : int
        Burn-in iterations between step size adaptations.
    keep_draws : bool
        If True, the post burn-in draws are returned in the result extras.
    """

    def __init__(self, n_iter=None, burnin=None, seed=0, mh_step=None,
                 adapt_interval=50, keep_draws=False):
        self.n_iter = int(get_setting('chain_iterations') if n_iter is None
                          else n_iter)
        if burnin is None:
            burnin = int(self.n_iter * get_setting('burnin_fraction'))
        self.burnin = int(burnin)
        self.seed = seed
        self.mh_step = float(get_setting('mh_step') if mh_step is None
                             else mh_step)
        self.adapt_interval = int(adapt_interval)
        self.keep_draws = keep_draws
        if not 0 <= self.burnin < self.n_iter:
            raise InvalidConfigError(
                'burnin ({}) must be smaller than n_iter ({})'.format(
                    self.burnin, self.n_iter))
        if self.n_iter - self.burnin < 100:
            raise InvalidConfigError(
                'At least 100 post burn-in iterations are needed, got '
                '{}'.format(self.n_iter - self.burnin))
        if not self.mh_step > 0 or self.adapt_interval < 1:
            raise InvalidConfigError(
                'mh_step and adapt_interval must be positive')

    def __repr__(self):
        return 'ChainConfig(n_iter={}, burnin={}, seed={})'.format(
            self.n_iter, self.burnin, self.seed)


class SamplerContext(object):
    """
    Everything held fixed while sampling.

    Attributes
    ----------
    spec : GrowthModelSpec
    values : ndarray
        N x T outcomes, zero in missing cells.
    mask : ndarray
        N x T booleans, True where observed.
    priors : RmbPriors
    selection : bool
        If True, missing outcomes follow the selection model.
    tau : float
        Quantile level of the working likelihood.
    """

    def __init__(self, spec, values, mask, priors=None, selection=False):
        self.spec = spec
        self.values = np.asarray(values, dtype=float)
        self.mask = np.asarray(mask, dtype=bool)
        self.missing = ~self.mask
        self.priors = priors or RmbPriors()
        self.selection = selection
        self.tau = median_level
        self.zeta, self.eta2 = mixture_constants(self.tau)

    @property
    def N(self):
        return self.values.shape[0]

    @property
    def T(self):
        return self.values.shape[1]


def _locations(state, context):
    """N x T conditional medians Lambda (beta + u_i)."""
    effects = state['beta'][None, :] + state['u']
    return effects.dot(context.spec.loadings.T)


def check_state(state, context):
    """
    Raises InvalidStateError if the augmented state violates its invariants.
    """
    if np.any(state['w'] <= 0):
        raise InvalidStateError('Latent scales w must be positive')
    if not state['sigma'] > 0:
        raise InvalidStateError('sigma must be positive')
    try:
        np.linalg.cholesky(state['psi'])
    except np.linalg.LinAlgError:
        raise InvalidStateError('psi is not positive definite')
    if not np.array_equal(state['y'][context.mask], context.values[context.mask]):
        raise InvalidStateError('Observed outcomes were overwritten')


class LatentScaleBlock(GibbsBlock):
    """
    W_it given everything else is generalized inverse Gaussian with
    p = 1/2, a = 2 / sigma + zeta^2 / (eta^2 sigma) and
    b = (y_it - m_it)^2 / (eta^2 sigma).
    """

    input_names = ('beta', 'u', 'sigma', 'y')
    output_names = ('w',)

    def conditional_parameters(self, state, context):
        sigma = state['sigma']
        residuals = state['y'] - _locations(state, context)
        a = 2. / sigma + context.zeta**2 / (context.eta2 * sigma)
        b = residuals**2 / (context.eta2 * sigma)
        return np.full(residuals.shape, a), b

    def array_call(self, state, context, rng):
        a, b = self.conditional_parameters(state, context)
        return {'w': sample_gig(0.5, a, b, rng)}


class RandomEffectsBlock(GibbsBlock):
    """
    u_i given W is normal with precision Psi^-1 + Lambda' D_i^-1 Lambda,
    D_i = diag(eta^2 sigma W_i).
    """

    input_names = ('beta', 'psi', 'sigma', 'w', 'y')
    output_names = ('u',)

    def conditional_parameters(self, state, context):
        loadings = context.spec.loadings
        inverse_d = 1. / (context.eta2 * state['sigma'] * state['w'])
        residuals = (state['y'] - loadings.dot(state['beta'])[None, :] -
                     context.zeta * state['w'])
        precision = (np.linalg.inv(state['psi'])[None, :, :] +
                     np.einsum('tj,it,tk->ijk', loadings, inverse_d, loadings))
        rhs = np.einsum('tj,it->ij', loadings, inverse_d * residuals)
        means = np.linalg.solve(precision, rhs[:, :, None])[:, :, 0]
        return means, precision

    def array_call(self, state, context, rng):
        means, precision = self.conditional_parameters(state, context)
        chol = np.linalg.cholesky(precision)
        z = rng.standard_normal(means.shape)
        # chol' x = z gives x with covariance precision^-1
        offsets = np.linalg.solve(np.swapaxes(chol, 1, 2), z[:, :, None])[:, :, 0]
        return {'u': means + offsets}


class FixedEffectsBlock(GibbsBlock):
    """beta given u and W: normal, conjugate to the normal prior."""

    input_names = ('u', 'sigma', 'w', 'y')
    output_names = ('beta',)

    def conditional_parameters(self, state, context):
        loadings = context.spec.loadings
        q = context.spec.q
        priors = context.priors
        inverse_d = 1. / (context.eta2 * state['sigma'] * state['w'])
        residuals = (state['y'] - state['u'].dot(loadings.T) -
                     context.zeta * state['w'])
        precision = (np.eye(q) / priors.beta_var +
                     np.einsum('tj,it,tk->jk', loadings, inverse_d, loadings))
        rhs = (priors.beta_mean_vector(q) / priors.beta_var +
               np.einsum('tj,it->j', loadings, inverse_d * residuals))
        covariance = symmetrize(np.linalg.inv(precision))
        return covariance.dot(rhs), covariance

    def array_call(self, state, context, rng):
        mean, covariance = self.conditional_parameters(state, context)
        return {'beta': rng.multivariate_normal(mean, covariance)}


class CovarianceBlock(GibbsBlock):
    """Psi given u: inverse-Wishart(df0 + N, S0 + sum u_i u_i')."""

    input_names = ('u',)
    output_names = ('psi',)

    def conditional_parameters(self, state, context):
        q = context.spec.q
        u = state['u']
        scale = context.priors.psi_scale * np.eye(q) + u.T.dot(u)
        return context.priors.psi_df(q) + u.shape[0], symmetrize(scale)

    def array_call(self, state, context, rng):
        df, scale = self.conditional_parameters(state, context)
        draw = stats.invwishart.rvs(df=df, scale=scale, random_state=rng)
        q = context.spec.q
        return {'psi': symmetrize(np.atleast_2d(draw).reshape(q, q))}


class ScaleBlock(GibbsBlock):
    """
    sigma given W and the residuals: inverse-gamma with shape
    a0 + 3 N T / 2 and rate b0 + sum W + sum (r - zeta W)^2 / (2 eta^2 W).
    """

    input_names = ('beta', 'u', 'w', 'y')
    output_names = ('sigma',)

    def conditional_parameters(self, state, context):
        w = state['w']
        residuals = state['y'] - _locations(state, context) - context.zeta * w
        shape = context.priors.sigma_shape + 1.5 * w.size
        rate = (context.priors.sigma_rate + w.sum() +
                np.sum(residuals**2 / (2. * context.eta2 * w)))
        return shape, rate

    def array_call(self, state, context, rng):
        shape, rate = self.conditional_parameters(state, context)
        return {'sigma': rate / rng.gamma(shape)}


def impute_missing_ignorable(state, context, rng):
    """
    Completed outcomes with every missing cell drawn from its asymmetric
    Laplace conditional around Lambda_t (beta + u_i).
    """
    y = np.array(state['y'], dtype=float)
    missing = context.missing
    if not missing.any():
        return y
    locations = _locations(state, context)[missing]
    y[missing] = al_mixture_draw(locations, state['sigma'], context.tau, rng)
    return y


class IgnorableImputationBlock(GibbsBlock):

    input_names = ('beta', 'u', 'sigma', 'y')
    output_names = ('y',)

    def __init__(self, name='impute'):
        super(IgnorableImputationBlock, self).__init__(name)

    def array_call(self, state, context, rng):
        return {'y': impute_missing_ignorable(state, context, rng)}


class _AdaptiveAcceptance(object):
    """Acceptance bookkeeping shared by the Metropolis blocks."""

    def _reset_counts(self, shape):
        self.batch_accepted = np.zeros(shape)
        self.batch_proposed = np.zeros(shape)
        self.total_accepted = np.zeros(shape)
        self.total_proposed = np.zeros(shape)
        self.adapting = True

    def _count(self, accepted, proposed):
        self.batch_accepted += accepted
        self.batch_proposed += proposed
        self.total_accepted += accepted
        self.total_proposed += proposed

    def _scale_factors(self):
        low = get_setting('mh_target_acceptance_low')
        high = get_setting('mh_target_acceptance_high')
        rates = self.batch_accepted / np.maximum(self.batch_proposed, 1)
        factors = np.ones(np.shape(rates))
        seen = self.batch_proposed > 0
        factors[seen & (rates < low)] = 0.7
        factors[seen & (rates > high)] = 1.3
        self.batch_accepted = np.zeros(np.shape(rates))
        self.batch_proposed = np.zeros(np.shape(rates))
        return factors

    def freeze(self):
        """Stops adaptation and restarts the acceptance totals."""
        self.adapting = False
        shape = np.shape(self.total_accepted)
        self.total_accepted = np.zeros(shape)
        self.total_proposed = np.zeros(shape)

    @property
    def acceptance_rate(self):
        proposed = np.sum(self.total_proposed)
        if proposed == 0:
            return np.nan
        return float(np.sum(self.total_accepted) / proposed)


class SelectionImputationBlock(GibbsBlock, _AdaptiveAcceptance):
    """
    Missing outcomes under the selection model, by random-walk Metropolis
    with one step size per occasion.
    """

    input_names = ('beta', 'u', 'sigma', 'y', 'alpha')
    output_names = ('y',)

    def __init__(self, T, mh_step=None, name='impute'):
        super(SelectionImputationBlock, self).__init__(name)
        if mh_step is None:
            mh_step = get_setting('mh_step')
        self.step = np.full(T, float(mh_step))
        self._reset_counts(T)

    def adapt(self):
        if self.adapting:
            self.step = self.step * self._scale_factors()

    def array_call(self, state, context, rng):
        y, accepted, proposed = mh_update_missing_mnar(
            state['y'], context.missing, _locations(state, context),
            state['sigma'], state['alpha'], self.step, rng, context.tau)
        self._count(accepted, proposed)
        return {'y': y}


class SelectionBlock(GibbsBlock, _AdaptiveAcceptance):
    """
    Selection coefficients by random-walk Metropolis. During burn-in the
    proposal covariance follows 2.38^2 / 3 times the covariance of the
    draws so far, times a factor tuned toward the target acceptance band.
    """

    input_names = ('y', 'alpha')
    output_names = ('alpha',)

    def __init__(self, outcome_scale=1., mh_step=None, name='alpha'):
        super(SelectionBlock, self).__init__(name)
        if mh_step is None:
            mh_step = get_setting('mh_step')
        slope_step = 0.1 * mh_step / max(1., outcome_scale)
        self.proposal_covariance = np.diag(
            [(0.1 * mh_step)**2, slope_step**2, slope_step**2])
        self.factor = 1.
        self.history = []
        self._reset_counts(())

    def adapt(self):
        if not self.adapting:
            return
        self.factor *= float(self._scale_factors())
        if len(self.history) >= 100:
            empirical = np.cov(np.array(self.history), rowvar=False)
            self.proposal_covariance = (
                2.38**2 / 3. * empirical + 1e-10 * np.eye(3))

    def array_call(self, state, context, rng):
        alpha, accepted = mh_update_alpha(
            state['alpha'], state['y'], context.missing, rng,
            self.factor * self.proposal_covariance, context.priors.alpha_var)
        self._count(float(accepted), 1.)
        if self.adapting:
            self.history.append(alpha)
        return {'alpha': alpha}


def build_sweep(context, mh_step=None):
    """
    The Gibbs sweep in update order: W, u, beta, psi, sigma, the missing
    outcomes and, with selection, the selection coefficients.
    """
    blocks = [
        LatentScaleBlock(name='w'), RandomEffectsBlock(name='u'),
        FixedEffectsBlock(name='beta'), CovarianceBlock(name='psi'),
        ScaleBlock(name='sigma')]
    if context.selection:
        observed = context.values[context.mask]
        blocks.append(SelectionImputationBlock(context.T, mh_step))
        blocks.append(SelectionBlock(float(np.mean(np.abs(observed))), mh_step))
    else:
        blocks.append(IgnorableImputationBlock())
    return GibbsSweep(*blocks)


def initial_state(context):
    """
    Deterministic starting point: beta from the observed occasion means,
    u = 0, psi = I, sigma matched to the pooled variance, W at its prior
    mean and missing outcomes at the implied mean.
    """
    spec = context.spec
    means = occasion_moments(context.values, context.mask)[0]
    usable = np.isfinite(means)
    if usable.sum() >= spec.q:
        beta = np.linalg.lstsq(spec.loadings[usable], means[usable], rcond=None)[0]
    else:
        beta = context.priors.beta_mean_vector(spec.q)
    sigma = np.sqrt(
        pooled_occasion_variance(context.values, context.mask) / context.eta2)
    y = np.where(context.mask, context.values, spec.loadings.dot(beta)[None, :])
    state = {
        'beta': beta,
        'u': np.zeros((context.N, spec.q)),
        'psi': np.eye(spec.q),
        'sigma': sigma,
        'w': np.full((context.N, context.T), sigma),
        'y': y,
    }
    if context.selection:
        state['alpha'] = initial_alpha(context.missing)
    return state


def gibbs_step(state, context, rngs, sweep=None):
    """
    One full sweep of the sampler.

    Args
    ----
    state : dict
        The augmented state.
    context : SamplerContext
    rngs : dict
        Block name to Generator, as made by named_streams(seed, stream_names).
    sweep : GibbsSweep, optional
        Reused across calls to keep Metropolis adaptation. Built from the
        context when not given.
    """
    if sweep is None:
        sweep = build_sweep(context)
    return sweep(state, context, rngs)


def draw_names(q, selection):
    names = parameter_names(q) + ['sigma']
    if selection:
        names += list(selection_names)
    return names


def monitored_values(state, q, selection):
    """Scalar summaries of a state, keyed by draw_names."""
    lower = np.tril_indices(q)
    values = (list(state['beta']) + list(state['psi'][lower]) +
              [median_eta2 * state['sigma']**2, state['sigma']])
    if selection:
        values += list(state['alpha'])
    return dict(zip(draw_names(q, selection), values))


def log_parameters(q):
    """Positive draw columns whose Geweke z is computed on the log scale."""
    labels = effect_labels(q)
    return ['psi_{0}{0}'.format(label) for label in labels] + [
        'sigma2_e', 'sigma']


def convergence_checks(q):
    """
    Pairs of (diagnostic name, draw column) of the quantities that must pass
    the Geweke diagnostic: fixed effects, log diagonal of psi and log sigma.
    """
    labels = effect_labels(q)
    checks = [('beta_{}'.format(label), 'beta_{}'.format(label))
              for label in labels]
    checks += [('log_psi_{0}{0}'.format(label), 'psi_{0}{0}'.format(label))
               for label in labels]
    checks.append(('log_sigma', 'sigma'))
    return checks


class PosteriorSummary(object):
    """
    Per-parameter posterior median, mean, standard deviation, 2.5% and
    97.5% quantiles and Geweke z, held in an xarray.Dataset indexed by
    parameter.
    """

    statistics = ('median', 'mean', 'sd', 'lower', 'upper', 'geweke')

    def __init__(self, dataset):
        self.dataset = dataset

    @classmethod
    def from_draws(cls, draws, log_parameters=()):
        """
        Args
        ----
        draws : xarray.DataArray
            Post burn-in draws with dimensions (draw, parameter).
        log_parameters : iterable of str, optional
            Positive parameters whose Geweke z is computed on the log scale.
        """
        quantiles = draws.quantile([0.025, 0.5, 0.975], dim='draw')
        log_parameters = set(log_parameters)
        geweke = []
        for name in draws['parameter'].values:
            chain = draws.sel(parameter=name).values
            if name in log_parameters:
                chain = np.log(chain)
            try:
                geweke.append(geweke_z(chain))
            except ConstantChainError:
                geweke.append(np.nan)
        dataset = xr.Dataset({
            'median': quantiles.sel(quantile=0.5, drop=True),
            'mean': draws.mean(dim='draw'),
            'sd': draws.std(dim='draw', ddof=1),
            'lower': quantiles.sel(quantile=0.025, drop=True),
            'upper': quantiles.sel(quantile=0.975, drop=True),
            'geweke': ('parameter', np.array(geweke)),
        })
        return cls(dataset)

    @property
    def parameters(self):
        return [str(name) for name in self.dataset['parameter'].values]

    def get(self, parameter, statistic):
        return float(self.dataset[statistic].sel(parameter=parameter))

    def to_dict(self):
        return dict(
            (name, dict((statistic, self.get(name, statistic))
                        for statistic in self.statistics))
            for name in self.parameters)

    def to_dataframe(self):
        return self.dataset.to_dataframe()

    def __repr__(self):
        return 'PosteriorSummary(parameters={})'.format(self.parameters)


def run_chain(context, config, monitor=None):
    """
    Runs the sampler, adapting Metropolis steps during burn-in and storing
    every post burn-in state in the monitor.

    Returns
    -------
    monitor : DrawMonitor
    sweep : GibbsSweep
        The sweep, with its final step sizes and acceptance counts.
    """
    q = context.spec.q
    if monitor is None:
        monitor = DrawMonitor(draw_names(q, context.selection))
    rngs = named_streams(config.seed, stream_names)
    sweep = build_sweep(context, config.mh_step)
    adaptive = [block for block in sweep.component_list
                if hasattr(block, 'adapt')]
    state = initial_state(context)
    for iteration in range(config.n_iter):
        state = sweep(state, context, rngs)
        if iteration < config.burnin:
            if (iteration + 1) % config.adapt_interval == 0:
                for block in adaptive:
                    block.adapt()
            if iteration + 1 == config.burnin:
                for block in adaptive:
                    block.freeze()
        else:
            monitor.store(monitored_values(state, q, context.selection))
    if config.burnin == 0:
        for block in adaptive:
            block.freeze()
    check_state(state, context)
    return monitor, sweep


class RmbEstimator(Estimator):
    """
    Gibbs sampler for the median growth curve model. Point estimates are
    posterior medians. The fit counts as converged when every monitored
    quantity (fixed effects, log diagonal of psi, log sigma) passes the
    Geweke diagnostic.
    """

    def __init__(self, spec, priors=None, config=None, selection=False):
        self.priors = priors or RmbPriors()
        self.config = config or ChainConfig()
        self.selection = selection
        super(RmbEstimator, self).__init__(spec)

    @property
    def method(self):
        return 'rmb-selection' if self.selection else 'rmb'

    def array_call(self, values, mask):
        context = SamplerContext(
            self.spec, values, mask, self.priors, self.selection)
        monitor, sweep = run_chain(context, self.config)
        draws = monitor.to_dataarray()
        q = self.spec.q
        summary = PosteriorSummary.from_draws(draws, log_parameters(q))
        diagnostics = {
            'n_iter': self.config.n_iter,
            'burnin': self.config.burnin,
            'n_patterns': len(missingness_patterns(mask)),
            'sigma': summary.get('sigma', 'median'),
        }
        converged = True
        for name, column in convergence_checks(q):
            z = summary.get(column, 'geweke')
            diagnostics['geweke_{}'.format(name)] = z
            converged = converged and geweke_passes(z)
        for block in sweep.component_list:
            if hasattr(block, 'acceptance_rate'):
                diagnostics['acceptance_{}'.format(block.name)] = (
                    block.acceptance_rate)
        if not converged:
            warnings.warn(
                '{} chain did not pass the Geweke diagnostic'.format(
                    self.method), ConvergenceWarning)
        names = parameter_names(q)
        medians = [summary.get(name, 'median') for name in names]
        psi = np.zeros((q, q))
        psi[np.tril_indices(q)] = medians[q:-1]
        psi = psi + np.tril(psi, -1).T
        table = summary.to_dict()
        extras = {'summary': summary}
        if self.selection:
            extras['selection'] = SelectionParams(*[
                summary.get(name, 'median') for name in selection_names])
        if self.config.keep_draws:
            extras['draws'] = draws
        return {
            'beta': np.array(medians[:q]),
            'psi': psi,
            'sigma2_e': medians[-1],
            'uncertainty': dict((name, table[name]) for name in names),
            'converged': converged,
            'diagnostics': diagnostics,
            'extras': extras,
        }


def rmb_fit(spec, data, priors=None, config=None, selection=False):
    """
    Fits the median growth curve model by Gibbs sampling.

    Args
    ----
    spec : GrowthModelSpec
    data : LongitudinalDataset
    priors : RmbPriors, optional
    config : ChainConfig, optional
    selection : bool, optional
        If True, missing outcomes are modeled as nonignorable through the
        logistic selection model.
    """
    return RmbEstimator(spec, priors, config, selection)(data)
