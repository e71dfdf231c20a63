"""
Asymmetric Laplace distribution and the draws its normal-exponential mixture
representation needs.

For quantile level tau, y ~ AL(mu, sigma, tau) can be written as
y = mu + zeta W + eta Z sqrt(sigma W), W ~ Exp(mean sigma), Z ~ N(0, 1),
with zeta = (1 - 2 tau) / (tau (1 - tau)) and eta^2 = 2 / (tau (1 - tau)).
"""
import numpy as np
from scipy import stats
from .._core.settings import get_setting
from .._core.exceptions import InvalidConfigError, NonPositiveDefiniteError
from .._core.util import ensure_rng


def _check(sigma, tau):
    if not 0 < tau < 1:
        raise InvalidConfigError('tau must be in (0, 1), got {}'.format(tau))
    if not np.all(np.asarray(sigma) > 0):
        raise NonPositiveDefiniteError('sigma must be positive')


def mixture_constants(tau):
    """
    Returns
    -------
    zeta, eta2 : float
        Location and squared scale multipliers of the mixture. For tau = 0.5
        these are 0 and 8.
    """
    _check(1., tau)
    zeta = (1. - 2. * tau) / (tau * (1. - tau))
    eta2 = 2. / (tau * (1. - tau))
    return zeta, eta2


def check_loss(residual, tau):
    residual = np.asarray(residual, dtype=float)
    return residual * (tau - (residual < 0))


def al_density(y, mu, sigma, tau):
    """Density tau (1 - tau) / sigma exp(-check_loss(y - mu) / sigma)."""
    _check(sigma, tau)
    return tau * (1. - tau) / sigma * np.exp(
        -check_loss(np.asarray(y, dtype=float) - mu, tau) / sigma)


def al_cdf(y, mu, sigma, tau):
    _check(sigma, tau)
    z = (np.asarray(y, dtype=float) - mu) / sigma
    below = tau * np.exp((1. - tau) * np.minimum(z, 0.))
    above = 1. - (1. - tau) * np.exp(-tau * np.maximum(z, 0.))
    return np.where(z < 0, below, above)


def al_mixture_draw(mu, sigma, tau, rng, size=None):
    """
    Draws from AL(mu, sigma, tau) through the exponential-normal mixture.

    Args
    ----
    mu : float or ndarray
        Location (the tau-quantile).
    sigma : float
        Scale.
    tau : float
        Quantile level in (0, 1).
    rng : numpy.random.Generator
    size : int or tuple, optional
        Output shape. Defaults to the broadcast shape of mu.

    Raises
    ------
    InvalidConfigError
        If tau is outside (0, 1).
    NonPositiveDefiniteError
        If sigma is not positive.
    """
    zeta, eta2 = mixture_constants(tau)
    _check(sigma, tau)
    rng = ensure_rng(rng)
    if size is None:
        size = np.shape(mu)
    w = rng.exponential(sigma, size)
    z = rng.standard_normal(size)
    return mu + zeta * w + np.sqrt(eta2 * sigma * w) * z


def sample_gig(p, a, b, rng, floor=None):
    """
    Draws from the generalized inverse Gaussian with density proportional to
    x^(p-1) exp(-(a x + b / x) / 2), elementwise over broadcast a and b.

    p = 1/2 uses 1/x ~ InverseGaussian(mean sqrt(a / b), shape a), which is
    vectorized. Other p go through scipy.stats.geninvgauss. Values of b and
    of the draws below floor are raised to floor.
    """
    if floor is None:
        floor = get_setting('gig_floor')
    rng = ensure_rng(rng)
    a = np.asarray(a, dtype=float)
    b = np.maximum(np.asarray(b, dtype=float), floor)
    if not np.all(a > 0):
        raise NonPositiveDefiniteError('GIG parameter a must be positive')
    a, b = np.broadcast_arrays(a, b)
    if p == 0.5:
        inverse = rng.wald(np.sqrt(a / b), a)
        draws = 1. / np.maximum(inverse, floor)
    else:
        draws = stats.geninvgauss.rvs(
            p, np.sqrt(a * b), scale=np.sqrt(b / a), size=a.shape,
            random_state=rng)
    return np.maximum(draws, floor)
