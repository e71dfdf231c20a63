import warnings
import numpy as np
from scipy import linalg
from .._core.base_components import Estimator
from .._core.model import (
    ParameterSet, implied_mean, implied_covariance, missingness_patterns,
    parameter_names)
from .._core.parameterization import pack, unpack
from .._core.optimize import minimize_with_restarts, numerical_hessian
from .._core.settings import get_setting
from .._core.exceptions import (
    NonPositiveDefiniteError, InvalidConfigError, ConvergenceWarning,
    BoundaryEstimateWarning)
from .._core.util import occasion_moments, pooled_occasion_variance, ordered_sum

boundary_eigenvalue = 1e-6


class FimlOptions(object):
    """
    Optimizer settings shared by FIML and the second stage of TSRE.

    Attributes
    ----------
    tol : float
        Gradient max-norm convergence tolerance.
    max_iter : int
        Iteration limit of one optimizer run.
    restarts : int
        Jittered restarts tried when a run does not converge.
    stall_tol : float
        Looser gradient tolerance accepted when the line search stalls on
        floating point precision.
    """

    def __init__(self, tol=None, max_iter=None, restarts=None, stall_tol=None):
        self.tol = get_setting('optimizer_tolerance') if tol is None else tol
        self.max_iter = (
            get_setting('optimizer_max_iterations') if max_iter is None
            else max_iter)
        self.restarts = (
            get_setting('optimizer_restarts') if restarts is None else restarts)
        self.stall_tol = (
            get_setting('optimizer_stall_tolerance') if stall_tol is None
            else stall_tol)
        if not self.tol > 0:
            raise InvalidConfigError('tol must be positive, got {}'.format(tol))
        if self.max_iter < 1 or self.restarts < 0:
            raise InvalidConfigError(
                'max_iter must be positive and restarts non-negative')

    def __repr__(self):
        return 'FimlOptions(tol={}, max_iter={}, restarts={})'.format(
            self.tol, self.max_iter, self.restarts)


def _pattern_loglik(values, rows, index, mu, sigma):
    """Log-likelihood terms of the subjects sharing one observed index set."""
    sub_sigma = sigma[np.ix_(index, index)]
    try:
        chol = linalg.cholesky(sub_sigma, lower=True)
    except linalg.LinAlgError:
        raise NonPositiveDefiniteError(
            'Observed-data covariance for occasions {} is singular'.format(
                index.tolist()))
    residuals = values[np.ix_(rows, index)] - mu[index]
    scaled = linalg.solve_triangular(chol, residuals.T, lower=True)
    log_det = 2. * np.sum(np.log(np.diag(chol)))
    return (-0.5 * index.size * np.log(2 * np.pi) - 0.5 * log_det -
            0.5 * np.sum(scaled**2, axis=0))


def fiml_loglik(spec, params, data):
    """
    Observed-data log-likelihood summed over subjects.

    Each subject contributes the multivariate normal log-density of its
    observed outcomes under the rows and columns of the implied moments
    that correspond to its observed occasions.

    Raises
    ------
    NonPositiveDefiniteError
        If an observed-data covariance is singular or params are invalid.
    """
    return _loglik_arrays(spec, params, data.values, data.mask)


def _loglik_arrays(spec, params, values, mask, patterns=None):
    mu = implied_mean(spec, params)
    sigma = implied_covariance(spec, params)
    if patterns is None:
        patterns = missingness_patterns(mask)
    terms = [_pattern_loglik(values, rows, index, mu, sigma)
             for index, rows in patterns]
    return ordered_sum(np.concatenate(terms))


def start_values(spec, values, mask):
    """
    beta from the observed occasion means regressed on the loadings, psi = I
    and sigma2_e the pooled within-occasion variance.
    """
    means = occasion_moments(values, mask)[0]
    usable = np.isfinite(means)
    if usable.sum() >= spec.q:
        beta = np.linalg.lstsq(
            spec.loadings[usable], means[usable], rcond=None)[0]
    else:
        beta = np.zeros(spec.q)
    return ParameterSet(
        beta, np.eye(spec.q), pooled_occasion_variance(values, mask))


def hessian_standard_errors(objective, params):
    """
    Standard errors from the inverse of the numerical Hessian of objective,
    a negative log-likelihood over the natural parameter vector. Entries
    that cannot be computed are NaN.
    """
    q = params.q
    names = parameter_names(q)

    def natural(vector):
        return objective(ParameterSet.from_vector(vector, q, check=False))

    def safe(vector):
        try:
            value = natural(vector)
        except (ValueError, np.linalg.LinAlgError):
            return np.nan
        return value
    standard_errors = np.full(len(names), np.nan)
    hessian = numerical_hessian(safe, params.as_vector())
    if np.all(np.isfinite(hessian)):
        try:
            covariance = np.linalg.inv(hessian)
        except np.linalg.LinAlgError:
            covariance = None
        if covariance is not None:
            variances = np.diag(covariance)
            positive = variances > 0
            standard_errors[positive] = np.sqrt(variances[positive])
    return dict(
        (name, {'se': float(se)}) for name, se in zip(names, standard_errors))


def at_boundary(psi):
    eigenvalues = np.linalg.eigvalsh(psi)
    return bool(eigenvalues.min() < boundary_eigenvalue * max(1., eigenvalues.max()))


def optimize_parameters(spec, objective, start, options):
    """
    Minimizes objective(ParameterSet) over the unconstrained
    parameterization, returning the estimate and the optimizer outcome.
    """
    q = spec.q

    def unconstrained(theta):
        return objective(unpack(theta, q))
    outcome = minimize_with_restarts(
        unconstrained, pack(start), tol=options.tol,
        max_iter=options.max_iter, restarts=options.restarts,
        stall_tol=options.stall_tol)
    return unpack(outcome.x, q), outcome


def finish_fit(method, estimate, outcome, uncertainty, diagnostics):
    boundary = at_boundary(estimate.psi)
    if boundary:
        warnings.warn(
            '{} estimate of psi is at the boundary of the parameter '
            'space'.format(method), BoundaryEstimateWarning)
    if not outcome.converged:
        warnings.warn(
            '{} optimizer did not converge (gradient norm {:.3g})'.format(
                method, outcome.gradient_norm), ConvergenceWarning)
    diagnostics.update({
        'gradient_norm': outcome.gradient_norm,
        'n_starts': outcome.n_starts,
        'iterations': outcome.n_iterations,
        'boundary': float(boundary),
    })
    return {
        'beta': estimate.beta,
        'psi': estimate.psi,
        'sigma2_e': estimate.sigma2_e,
        'uncertainty': uncertainty,
        'converged': outcome.converged,
        'diagnostics': diagnostics,
    }


class FimlEstimator(Estimator):
    """
    Full-information maximum likelihood over each subject's observed
    outcomes.
    """

    method = 'fiml'

    def __init__(self, spec, options=None):
        self.options = options or FimlOptions()
        super(FimlEstimator, self).__init__(spec)

    def array_call(self, values, mask):
        patterns = missingness_patterns(mask)
        n_subjects = values.shape[0]

        def negative_loglik(params):
            return -_loglik_arrays(self.spec, params, values, mask, patterns)

        def objective(params):
            return negative_loglik(params) / n_subjects
        estimate, outcome = optimize_parameters(
            self.spec, objective, start_values(self.spec, values, mask),
            self.options)
        loglik = -negative_loglik(estimate)
        output = finish_fit(
            self.method, estimate, outcome,
            hessian_standard_errors(negative_loglik, estimate),
            {'loglik': loglik})
        output['extras'] = {}
        return output


def fiml_fit(spec, data, options=None):
    """
    Fits the growth curve model to incomplete data by maximum likelihood.

    Non-convergence and boundary estimates are flagged on the result and
    warned about, never raised.
    """
    return FimlEstimator(spec, options)(data)
