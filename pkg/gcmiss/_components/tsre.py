import warnings
import numpy as np
from scipy import linalg, stats
from .._core.base_components import Estimator
from .._core.model import (
    FitResult, ParameterSet, LongitudinalDataset, implied_mean,
    implied_covariance, missingness_patterns)
from .._core.settings import get_setting
from .._core.exceptions import (
    InvalidDataError, InvalidConfigError, NonPositiveDefiniteError,
    ConvergenceWarning)
from .._core.util import occasion_moments, symmetrize
from .fiml import (
    FimlOptions, optimize_parameters, hessian_standard_errors, finish_fit)


class TsreOptions(object):
    """
    Settings of two-stage robust estimation.

    Attributes
    ----------
    huber_prob : float
        Tail probability of the chi-square quantile used as the Huber tuning
        constant. 0 disables downweighting.
    tol : float
        Convergence tolerance of stage 1 on the largest change in mean and
        covariance entries.
    max_iter : int
        Iteration limit of stage 1.
    stage2 : FimlOptions
        Optimizer settings of stage 2.
    """

    def __init__(self, huber_prob=None, tol=None, max_iter=None, stage2=None):
        if huber_prob is None:
            huber_prob = get_setting('huber_tail_probability')
        if not 0 <= huber_prob < 1:
            raise InvalidConfigError(
                'huber_prob must be in [0, 1), got {}'.format(huber_prob))
        self.huber_prob = float(huber_prob)
        self.tol = get_setting('robust_tolerance') if tol is None else tol
        self.max_iter = (
            get_setting('robust_max_iterations') if max_iter is None
            else max_iter)
        self.stage2 = stage2 or FimlOptions()

    def __repr__(self):
        return 'TsreOptions(huber_prob={}, tol={}, max_iter={})'.format(
            self.huber_prob, self.tol, self.max_iter)


class RobustSaturated(object):
    """
    Robust estimates of the saturated mean and covariance.

    Attributes
    ----------
    mu_hat : ndarray
        T means.
    sigma_hat : ndarray
        T x T covariance.
    weights : ndarray
        Per-subject weights applied to the mean, in (0, 1].
    iterations : int
    converged : bool
    n_subjects : int
    """

    def __init__(self, mu_hat, sigma_hat, weights, iterations, converged=True,
                 n_subjects=None):
        sigma_hat = np.asarray(sigma_hat, dtype=float)
        try:
            np.linalg.cholesky(sigma_hat)
        except np.linalg.LinAlgError:
            raise NonPositiveDefiniteError(
                'Robust covariance estimate is not positive definite')
        self.mu_hat = np.asarray(mu_hat, dtype=float)
        self.sigma_hat = sigma_hat
        self.weights = np.asarray(weights, dtype=float)
        self.iterations = iterations
        self.converged = converged
        self.n_subjects = len(self.weights) if n_subjects is None else n_subjects

    @classmethod
    def from_moments(cls, mu, sigma, n_subjects):
        """Moments taken as given, all weights 1."""
        return cls(mu, sigma, np.ones(n_subjects), 0, True, n_subjects)

    def __repr__(self):
        return 'RobustSaturated(mu_hat={}, iterations={}, converged={})'.format(
            self.mu_hat.tolist(), self.iterations, self.converged)


def huber_constants(dimension, huber_prob):
    """
    Returns
    -------
    radius : float
        Square root of the (1 - huber_prob) chi-square quantile, infinite
        when huber_prob is 0.
    kappa : float
        Consistency factor E[min(d^2, r^2)] / p for d^2 chi-square(p), which
        makes the weighted covariance unbiased at the normal.
    """
    if huber_prob == 0:
        return np.inf, 1.
    r2 = stats.chi2.ppf(1. - huber_prob, dimension)
    kappa = (dimension * stats.chi2.cdf(r2, dimension + 2) +
             r2 * stats.chi2.sf(r2, dimension)) / dimension
    return np.sqrt(r2), kappa


def _initial_moments(values, mask):
    means, variances = occasion_moments(values, mask)
    if not (np.all(np.isfinite(variances)) and np.all(variances > 0)):
        raise InvalidDataError(
            'Every occasion needs at least two distinct observed values')
    return means, np.diag(variances)


def _expectation_step(values, patterns, mu, sigma, huber_prob):
    """
    Conditional-mean imputation, conditional covariances and Huber weights
    under the current moments.
    """
    N, T = values.shape
    completed = np.zeros((N, T))
    conditional_sum = np.zeros((N, T, T))
    first = np.ones(N)
    second = np.ones(N)
    for index, rows in patterns:
        missing = np.setdiff1d(np.arange(T), index)
        sigma_oo = sigma[np.ix_(index, index)]
        try:
            factor = linalg.cho_factor(sigma_oo, lower=True)
        except linalg.LinAlgError:
            raise NonPositiveDefiniteError(
                'Robust covariance is singular on occasions {}'.format(
                    index.tolist()))
        residuals = values[np.ix_(rows, index)] - mu[index]
        solved = linalg.cho_solve(factor, residuals.T)
        distances = np.sqrt(np.maximum(np.sum(residuals.T * solved, axis=0), 0.))
        radius, kappa = huber_constants(index.size, huber_prob)
        w1 = np.ones(rows.size)
        far = distances > radius
        w1[far] = radius / distances[far]
        first[rows] = w1
        second[rows] = w1**2 / kappa
        completed[np.ix_(rows, index)] = values[np.ix_(rows, index)]
        if missing.size > 0:
            sigma_mo = sigma[np.ix_(missing, index)]
            completed[np.ix_(rows, missing)] = mu[missing] + solved.T.dot(
                sigma_mo.T)
            block = sigma[np.ix_(missing, missing)] - sigma_mo.dot(
                linalg.cho_solve(factor, sigma_mo.T))
            conditional = np.zeros((T, T))
            conditional[np.ix_(missing, missing)] = block
            conditional_sum[rows] = conditional
    return completed, conditional_sum, first, second


def stage1_robust(data, options=None):
    """
    Robust saturated moments of incomplete data by expectation-reweighting.

    Each iteration imputes the conditional means of missing outcomes under
    the current moments, computes each subject's Mahalanobis distance d on
    its observed occasions and Huber weights w1 = min(1, r / d) with r^2 the
    (1 - huber_prob) chi-square quantile for the observed dimension. Means
    are weighted by w1 and covariance terms, including the conditional
    covariance of the imputed part, by w1^2 / kappa.

    Raises
    ------
    InvalidDataError
        If there are not more subjects than occasions.
    NonPositiveDefiniteError
        If the covariance estimate degenerates.
    """
    options = options or TsreOptions()
    values = np.asarray(data.values, dtype=float)
    mask = np.asarray(data.mask, dtype=bool)
    N, T = values.shape
    if N <= T:
        raise InvalidDataError(
            'Stage 1 needs more subjects ({}) than occasions ({})'.format(N, T))
    patterns = missingness_patterns(mask)
    mu, sigma = _initial_moments(values, mask)
    converged = False
    iterations = 0
    first = np.ones(N)
    for iterations in range(1, options.max_iter + 1):
        completed, conditional, first, second = _expectation_step(
            values, patterns, mu, sigma, options.huber_prob)
        new_mu = first.dot(completed) / first.sum()
        centred = completed - new_mu
        new_sigma = (
            np.einsum('i,ij,ik->jk', second, centred, centred) +
            np.einsum('i,ijk->jk', second, conditional)) / N
        new_sigma = symmetrize(new_sigma)
        change = max(np.max(np.abs(new_mu - mu)), np.max(np.abs(new_sigma - sigma)))
        mu, sigma = new_mu, new_sigma
        if change < options.tol:
            converged = True
            break
    if not converged:
        warnings.warn(
            'Robust stage 1 did not converge in {} iterations'.format(
                options.max_iter), ConvergenceWarning)
    # weights reported under the final moments
    first = _expectation_step(values, patterns, mu, sigma, options.huber_prob)[2]
    return RobustSaturated(mu, sigma, first, iterations, converged, N)


def ml_discrepancy(rob, spec, params):
    """
    Normal-theory discrepancy between the robust moments and the implied
    moments of params:

        F = tr(S C^-1) - log|S C^-1| - T + (m - mu)' C^-1 (m - mu)

    with m, S the robust mean and covariance and mu, C the implied ones.
    F is zero when they agree and positive otherwise.

    Raises
    ------
    NonPositiveDefiniteError
        If the implied covariance is singular.
    """
    mu = implied_mean(spec, params)
    sigma = implied_covariance(spec, params)
    try:
        factor = linalg.cho_factor(sigma, lower=True)
    except linalg.LinAlgError:
        raise NonPositiveDefiniteError('Implied covariance is singular')
    product = linalg.cho_solve(factor, rob.sigma_hat)
    sign, log_det = np.linalg.slogdet(product)
    if sign <= 0:
        raise NonPositiveDefiniteError('Robust covariance is singular')
    difference = rob.mu_hat - mu
    return float(np.trace(product) - log_det - spec.T +
                 difference.dot(linalg.cho_solve(factor, difference)))


def _moment_start(spec, rob):
    beta = np.linalg.lstsq(spec.loadings, rob.mu_hat, rcond=None)[0]
    return ParameterSet(beta, np.eye(spec.q), float(np.mean(np.diag(rob.sigma_hat))))


def _stage2_outputs(rob, spec, options):
    def objective(params):
        return ml_discrepancy(rob, spec, params)
    estimate, outcome = optimize_parameters(
        spec, objective, _moment_start(spec, rob), options)

    def negative_loglik(params):
        return 0.5 * rob.n_subjects * objective(params)
    output = finish_fit(
        'tsre', estimate, outcome,
        hessian_standard_errors(negative_loglik, estimate),
        {'discrepancy': outcome.fun, 'stage1_iterations': rob.iterations})
    output['converged'] = bool(output['converged'] and rob.converged)
    return output


def stage2_fit(rob, spec, options=None):
    """
    Fits the growth curve model to robust saturated moments by minimizing
    ml_discrepancy. Standard errors use the normal-theory information
    N F / 2. The fit is flagged as not converged if stage 1 did not converge.
    """
    options = options or TsreOptions()
    output = _stage2_outputs(rob, spec, options.stage2)
    return FitResult(
        'tsre', ParameterSet(
            output['beta'], output['psi'], output['sigma2_e'], check=False),
        uncertainty=output['uncertainty'], converged=output['converged'],
        diagnostics=output['diagnostics'],
        extras={'weights': rob.weights.copy(), 'mu_hat': rob.mu_hat.copy(),
                'sigma_hat': rob.sigma_hat.copy()})


class TsreEstimator(Estimator):
    """Two-stage robust estimation: stage1_robust then stage2_fit."""

    method = 'tsre'

    def __init__(self, spec, options=None):
        self.options = options or TsreOptions()
        super(TsreEstimator, self).__init__(spec)

    def array_call(self, values, mask):
        rob = stage1_robust(LongitudinalDataset(values, mask), self.options)
        output = _stage2_outputs(rob, self.spec, self.options.stage2)
        output['diagnostics']['huber_prob'] = self.options.huber_prob
        output['extras'] = {
            'weights': rob.weights.copy(), 'mu_hat': rob.mu_hat.copy(),
            'sigma_hat': rob.sigma_hat.copy()}
        return output


def tsre_fit(spec, data, options=None):
    return TsreEstimator(spec, options)(data)
