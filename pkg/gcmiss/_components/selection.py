"""
Logistic selection model for nonignorable missingness.

R_it = 1 marks y_it as missing, and for occasions t >= 2

    logit Pr(R_it = 1) = alpha0 + alpha1 y_i(t-1) + alpha2 y_it

where y values are the current imputations when missing.
"""
import numpy as np
from scipy.special import expit
from .._core.exceptions import InvalidConfigError
from .._core.util import ensure_rng
from .laplace import check_loss


class SelectionParams(object):
    """
    Coefficients of the selection model.

    Attributes
    ----------
    alpha0 : float
        Baseline log-odds of missingness.
    alpha1 : float
        Effect of the previous outcome.
    alpha2 : float
        Effect of the current, possibly unobserved, outcome.
    """

    def __init__(self, alpha0=0., alpha1=0., alpha2=0.):
        values = np.array([alpha0, alpha1, alpha2], dtype=float)
        if not np.all(np.isfinite(values)):
            raise InvalidConfigError('Selection coefficients must be finite')
        self.alpha0, self.alpha1, self.alpha2 = values.tolist()

    @classmethod
    def from_array(cls, values):
        return cls(*np.asarray(values, dtype=float).tolist())

    def as_array(self):
        return np.array([self.alpha0, self.alpha1, self.alpha2])

    def to_dict(self):
        return {'alpha0': self.alpha0, 'alpha1': self.alpha1,
                'alpha2': self.alpha2}

    def __repr__(self):
        return 'SelectionParams(alpha0={}, alpha1={}, alpha2={})'.format(
            self.alpha0, self.alpha1, self.alpha2)


def selection_logit(alpha, y_prev, y_curr):
    """Probability that y_curr is missing given the previous outcome."""
    if isinstance(alpha, SelectionParams):
        alpha = alpha.as_array()
    return expit(alpha[0] + alpha[1] * np.asarray(y_prev, dtype=float) +
                 alpha[2] * np.asarray(y_curr, dtype=float))


def _log_bernoulli(linear_predictor, indicator):
    """log Pr(R = indicator) for a logistic model, stable for large |eta|."""
    signed = np.where(indicator, -linear_predictor, linear_predictor)
    return -np.logaddexp(0., signed)


def selection_loglik(alpha, y, missing):
    """
    Bernoulli log-likelihood of the indicators of occasions 2..T under the
    completed outcomes y.
    """
    y = np.asarray(y, dtype=float)
    if y.shape[0] == 0:
        return 0.
    eta = alpha[0] + alpha[1] * y[:, :-1] + alpha[2] * y[:, 1:]
    return float(np.sum(_log_bernoulli(eta, missing[:, 1:])))


def initial_alpha(missing):
    """Intercept at the logit of the missing rate of occasions 2..T."""
    if missing.shape[0] == 0 or missing.shape[1] < 2:
        rate = 0.5
    else:
        rate = np.clip(missing[:, 1:].mean(), 0.01, 0.99)
    return np.array([np.log(rate / (1. - rate)), 0., 0.])


def mh_update_missing_mnar(y, missing, location, sigma, alpha, step, rng,
                           tau=0.5):
    """
    One random-walk Metropolis sweep over the missing cells, occasion by
    occasion and vectorized over subjects.

    The target of a missing y_it is the asymmetric Laplace density around
    location_it times the selection probabilities of R_it and R_i(t+1),
    the two indicators whose linear predictors involve y_it.

    Args
    ----
    y : ndarray
        N x T completed outcomes.
    missing : ndarray
        N x T booleans, True where y is imputed.
    location : ndarray
        N x T conditional medians.
    sigma : float
        Asymmetric Laplace scale.
    alpha : array_like
        Selection coefficients.
    step : ndarray
        Proposal standard deviation per occasion.
    rng : numpy.random.Generator

    Returns
    -------
    y : ndarray
        A new completed outcome matrix.
    accepted : ndarray
        Accepted proposals per occasion.
    proposed : ndarray
        Proposals per occasion.
    """
    rng = ensure_rng(rng)
    y = np.array(y, dtype=float)
    N, T = y.shape
    step = np.broadcast_to(np.asarray(step, dtype=float), (T,))
    accepted = np.zeros(T, dtype=int)
    proposed = np.zeros(T, dtype=int)

    def log_target(values, rows, t):
        result = -check_loss(values - location[rows, t], tau) / sigma
        if t >= 1:
            eta = alpha[0] + alpha[1] * y[rows, t - 1] + alpha[2] * values
            result = result + _log_bernoulli(eta, missing[rows, t])
        if t + 1 < T:
            eta = alpha[0] + alpha[1] * values + alpha[2] * y[rows, t + 1]
            result = result + _log_bernoulli(eta, missing[rows, t + 1])
        return result

    for t in range(T):
        rows = np.flatnonzero(missing[:, t])
        if rows.size == 0:
            continue
        current = y[rows, t]
        candidate = current + step[t] * rng.standard_normal(rows.size)
        log_ratio = log_target(candidate, rows, t) - log_target(current, rows, t)
        accept = np.log(rng.random(rows.size)) < log_ratio
        y[rows[accept], t] = candidate[accept]
        accepted[t] = accept.sum()
        proposed[t] = rows.size
    return y, accepted, proposed


def mh_update_alpha(alpha, y, missing, rng, proposal_covariance, prior_variance):
    """
    Joint random-walk Metropolis update of the selection coefficients
    against the indicators of occasions 2..T and a N(0, prior_variance I)
    prior.

    Returns
    -------
    alpha : ndarray
        The new coefficients.
    accepted : bool
    """
    rng = ensure_rng(rng)
    alpha = np.asarray(alpha, dtype=float)
    chol = np.linalg.cholesky(proposal_covariance)
    candidate = alpha + chol.dot(rng.standard_normal(alpha.size))

    def log_posterior(values):
        return (selection_loglik(values, y, missing) -
                0.5 * values.dot(values) / prior_variance)
    log_ratio = log_posterior(candidate) - log_posterior(alpha)
    if np.log(rng.random()) < log_ratio:
        return candidate, True
    return alpha.copy(), False
