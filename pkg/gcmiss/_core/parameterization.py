"""
Unconstrained parameterization shared by the optimizing estimators.

The vector holds beta, the lower triangle of the Cholesky factor of psi with
its diagonal on the log scale, and log(sigma2_e). Every vector maps to a
valid ParameterSet.
"""
import numpy as np
from .model import ParameterSet
from .exceptions import NonPositiveDefiniteError


def n_free_parameters(q):
    return q + q * (q + 1) // 2 + 1


def pack(params):
    """ParameterSet to unconstrained vector."""
    q = params.q
    try:
        chol = np.linalg.cholesky(params.psi)
    except np.linalg.LinAlgError:
        raise NonPositiveDefiniteError('psi is not positive definite')
    lower = chol[np.tril_indices(q)]
    diagonal = np.array([j * (j + 1) // 2 + j for j in range(q)])
    lower[diagonal] = np.log(lower[diagonal])
    return np.concatenate([params.beta, lower, [np.log(params.sigma2_e)]])


def unpack(theta, q):
    """Unconstrained vector to ParameterSet."""
    theta = np.asarray(theta, dtype=float)
    chol = np.zeros((q, q))
    chol[np.tril_indices(q)] = theta[q:q + q * (q + 1) // 2]
    chol[np.diag_indices(q)] = np.exp(chol[np.diag_indices(q)])
    psi = chol.dot(chol.T)
    # floors keep extreme optimizer trial points inside the valid region
    psi[np.diag_indices(q)] += 1e-12
    sigma2_e = max(np.exp(theta[-1]), 1e-300)
    return ParameterSet(theta[:q], psi, sigma2_e, check=False)
