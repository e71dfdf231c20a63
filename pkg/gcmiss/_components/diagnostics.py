import numpy as np
from .._core.settings import get_setting
from .._core.exceptions import ConstantChainError, InvalidDataError

minimum_chain_length = 100


def _as_chain(chain):
    chain = np.asarray(chain, dtype=float).reshape(-1)
    if not np.all(np.isfinite(chain)):
        raise InvalidDataError('Chain contains non-finite values')
    return chain


def spectral_variance(chain, bandwidth=None):
    """
    Spectral density of a chain at frequency zero, estimated with a Bartlett
    lag window:

        S(0) = g_0 + 2 sum_{s=1}^{b-1} (1 - s / b) g_s

    where g_s is the lag-s autocovariance and b defaults to floor(sqrt(n)).
    S(0) / n is the squared Monte Carlo standard error of the chain mean.
    """
    chain = _as_chain(chain)
    n = chain.size
    if bandwidth is None:
        bandwidth = max(1, int(np.floor(np.sqrt(n))))
    centred = chain - chain.mean()
    spectrum = centred.dot(centred) / n
    for s in range(1, min(int(bandwidth), n)):
        autocovariance = centred[:n - s].dot(centred[s:]) / n
        spectrum += 2. * (1. - s / float(bandwidth)) * autocovariance
    return max(spectrum, 0.)


def geweke_z(chain, first_frac=None, last_frac=None):
    """
    Geweke's convergence diagnostic.

    Compares the mean of the first first_frac of the chain with the mean of
    the last last_frac, standardized by spectral standard errors of both
    windows. Values within +/- geweke_critical_value indicate convergence.

    Args
    ----
    chain : array_like
        Draws of one scalar quantity, burn-in already removed.
    first_frac : float, optional
        Fraction of the chain in the first window. Defaults to the
        geweke_first setting (0.1).
    last_frac : float, optional
        Fraction of the chain in the last window. Defaults to the
        geweke_last setting (0.5).

    Returns
    -------
    z : float

    Raises
    ------
    InvalidDataError
        If the chain has fewer than 100 draws or the windows overlap.
    ConstantChainError
        If either window has zero variance.
    """
    if first_frac is None:
        first_frac = get_setting('geweke_first')
    if last_frac is None:
        last_frac = get_setting('geweke_last')
    chain = _as_chain(chain)
    if chain.size < minimum_chain_length:
        raise InvalidDataError(
            'Geweke diagnostic needs at least {} draws, got {}'.format(
                minimum_chain_length, chain.size))
    if not (0 < first_frac and 0 < last_frac and first_frac + last_frac <= 1):
        raise InvalidDataError(
            'Geweke windows {} and {} must be positive and not overlap'.format(
                first_frac, last_frac))
    n = chain.size
    first = chain[:int(np.floor(first_frac * n))]
    last = chain[n - int(np.floor(last_frac * n)):]
    if np.ptp(first) == 0 or np.ptp(last) == 0:
        raise ConstantChainError('A Geweke window of the chain is constant')
    variance = (spectral_variance(first) / first.size +
                spectral_variance(last) / last.size)
    if not variance > 0:
        raise ConstantChainError('Chain windows have zero spectral variance')
    return float((first.mean() - last.mean()) / np.sqrt(variance))


def geweke_passes(z, critical_value=None):
    if critical_value is None:
        critical_value = get_setting('geweke_critical_value')
    return bool(np.isfinite(z) and abs(z) < critical_value)


def effective_sample_size(chain):
    """n Var(chain) / S(0), capped at n."""
    chain = _as_chain(chain)
    if np.ptp(chain) == 0:
        raise ConstantChainError('Chain is constant')
    spectrum = spectral_variance(chain)
    if not spectrum > 0:
        return float(chain.size)
    return float(min(chain.size, chain.size * chain.var() / spectrum))
