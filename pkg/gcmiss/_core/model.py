import warnings
import numpy as np
from six import string_types
from .exceptions import (
    DimensionMismatchError, NonPositiveDefiniteError, InvalidDataError,
    DroppedSubjectWarning)


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


def effect_labels(q):
    """Labels of the random effects: L/S for intercept-slope models."""
    if q == 2:
        return ('L', 'S')
    return tuple(str(j) for j in range(q))


def parameter_names(q):
    """
    Names of the model parameters in reporting order: fixed effects, the
    lower triangle of the random-effect covariance, then the error variance.
    """
    labels = effect_labels(q)
    names = ['beta_{}'.format(label) for label in labels]
    for j in range(q):
        for k in range(j + 1):
            names.append('psi_{}{}'.format(labels[k], labels[j]))
    names.append('sigma2_e')
    return names


class GrowthModelSpec(object):
    """
    Time structure of a growth curve model.

    Attributes
    ----------
    loadings : ndarray
        The T x q factor loading matrix.
    T : int
        Number of measurement occasions.
    q : int
        Number of random effects.
    """

    def __init__(self, loadings):
        loadings = np.atleast_2d(np.asarray(loadings, dtype=float))
        if loadings.ndim != 2:
            raise DimensionMismatchError(
                'loadings must be a 2-d matrix, got {} dimensions'.format(
                    loadings.ndim))
        T, q = loadings.shape
        if T < 2:
            raise DimensionMismatchError(
                'At least 2 measurement occasions are required, got {}'.format(T))
        if q < 1:
            raise DimensionMismatchError('At least one random effect is required')
        if np.linalg.matrix_rank(loadings) < q:
            raise DimensionMismatchError(
                'loadings of shape {} do not have full column rank'.format(
                    loadings.shape))
        self.loadings = _frozen(loadings)

    @classmethod
    def linear(cls, T):
        """Linear growth loadings [1, t] for t = 0, ..., T-1."""
        return cls(np.column_stack([np.ones(T), np.arange(T, dtype=float)]))

    @property
    def T(self):
        return self.loadings.shape[0]

    @property
    def q(self):
        return self.loadings.shape[1]

    def __repr__(self):
        return 'GrowthModelSpec(T={}, q={}, loadings={})'.format(
            self.T, self.q, self.loadings.tolist())

    def __eq__(self, other):
        return (isinstance(other, GrowthModelSpec) and
                np.array_equal(self.loadings, other.loadings))

    def __ne__(self, other):
        return not self == other


class ParameterSet(object):
    """
    Fixed effects, random-effect covariance and error variance.

    Attributes
    ----------
    beta : ndarray
        The q fixed effects.
    psi : ndarray
        The q x q random-effect covariance.
    sigma2_e : float
        The within-subject error variance.
    """

    def __init__(self, beta, psi, sigma2_e, check=True):
        """
        Args
        ----
        beta : array_like
            The q fixed effects.
        psi : array_like
            The q x q random-effect covariance.
        sigma2_e : float
            The error variance.
        check : bool, optional
            If True (default), psi must be symmetric positive definite and
            sigma2_e positive. Summaries of posterior draws pass False, since
            elementwise medians need not be positive definite.

        Raises
        ------
        DimensionMismatchError
            If beta and psi disagree in size.
        NonPositiveDefiniteError
            If check is True and psi or sigma2_e are invalid.
        """
        beta = np.atleast_1d(np.asarray(beta, dtype=float))
        psi = np.atleast_2d(np.asarray(psi, dtype=float))
        if beta.ndim != 1 or psi.shape != (beta.size, beta.size):
            raise DimensionMismatchError(
                'beta has {} elements but psi has shape {}'.format(
                    beta.size, psi.shape))
        if check:
            if not np.allclose(psi, psi.T, rtol=0., atol=1e-10):
                raise NonPositiveDefiniteError('psi is not symmetric')
            if not np.all(np.linalg.eigvalsh(psi) > 0):
                raise NonPositiveDefiniteError(
                    'psi is not positive definite: eigenvalues {}'.format(
                        np.linalg.eigvalsh(psi)))
            if not sigma2_e > 0:
                raise NonPositiveDefiniteError(
                    'sigma2_e must be positive, got {}'.format(sigma2_e))
        self.beta = _frozen(beta)
        self.psi = _frozen(psi)
        self.sigma2_e = float(sigma2_e)

    @property
    def q(self):
        return self.beta.size

    @classmethod
    def from_vector(cls, vector, q, check=True):
        """Inverse of as_vector."""
        vector = np.asarray(vector, dtype=float)
        beta = vector[:q]
        psi = np.zeros((q, q))
        psi[np.tril_indices(q)] = vector[q:q + q * (q + 1) // 2]
        psi = psi + np.tril(psi, -1).T
        return cls(beta, psi, vector[-1], check=check)

    def as_vector(self):
        """Parameters in the order given by parameter_names."""
        lower = np.tril_indices(self.q)
        return np.concatenate(
            [self.beta, self.psi[lower], [self.sigma2_e]])

    def as_dict(self):
        return dict(zip(parameter_names(self.q), self.as_vector().tolist()))

    def scaled(self, k):
        """Parameters of data multiplied by k."""
        return ParameterSet(k * self.beta, k**2 * self.psi, k**2 * self.sigma2_e)

    def __repr__(self):
        return 'ParameterSet(beta={}, psi={}, sigma2_e={})'.format(
            self.beta.tolist(), self.psi.tolist(), self.sigma2_e)


class LongitudinalDataset(object):
    """
    An N x T outcome matrix with its missingness mask.

    Masked cells of values are stored as zero and are never read.

    Attributes
    ----------
    values : ndarray
        N x T outcomes.
    mask : ndarray
        N x T booleans, True where the outcome is observed.
    subject_ids : tuple of str
        One label per subject.
    aux : ndarray or None
        The auxiliary variable used to generate MNAR missingness.
    """

    def __init__(self, values, mask=None, subject_ids=None, aux=None):
        values = np.atleast_2d(np.asarray(values, dtype=float))
        if mask is None:
            mask = np.isfinite(values)
        mask = np.atleast_2d(np.asarray(mask, dtype=bool))
        if mask.shape != values.shape:
            raise DimensionMismatchError(
                'mask has shape {} but values have shape {}'.format(
                    mask.shape, values.shape))
        if not np.all(np.isfinite(values[mask])):
            raise InvalidDataError('Observed cells must hold finite values')
        empty = np.flatnonzero(~mask.any(axis=1))
        if len(empty) > 0:
            raise InvalidDataError(
                'Subjects at rows {} have no observed occasion'.format(
                    empty.tolist()))
        if subject_ids is None:
            subject_ids = ['{}'.format(i + 1) for i in range(values.shape[0])]
        subject_ids = tuple(subject_ids)
        if len(subject_ids) != values.shape[0]:
            raise DimensionMismatchError(
                '{} subject ids given for {} subjects'.format(
                    len(subject_ids), values.shape[0]))
        if not all(isinstance(label, string_types) for label in subject_ids):
            raise TypeError('subject_ids must be strings')
        if aux is not None:
            aux = np.asarray(aux, dtype=float)
            if aux.shape != (values.shape[0],):
                raise DimensionMismatchError(
                    'aux must have one value per subject')
            aux = _frozen(aux)
        self.values = _frozen(np.where(mask, values, 0.))
        self.mask = mask.copy()
        self.mask.setflags(write=False)
        self.subject_ids = subject_ids
        self.aux = aux

    @classmethod
    def from_arrays(cls, values, mask=None, subject_ids=None, aux=None):
        """
        Like the constructor, but subjects without any observed occasion are
        dropped with a DroppedSubjectWarning instead of raising.
        """
        values = np.atleast_2d(np.asarray(values, dtype=float))
        if mask is None:
            mask = np.isfinite(values)
        mask = np.atleast_2d(np.asarray(mask, dtype=bool))
        keep = mask.any(axis=1)
        if not np.all(keep):
            if subject_ids is None:
                subject_ids = ['{}'.format(i + 1) for i in range(values.shape[0])]
            dropped = [subject_ids[i] for i in np.flatnonzero(~keep)]
            warnings.warn(
                'Dropping {} subject(s) with no observed occasion: {}'.format(
                    len(dropped), ', '.join(dropped)), DroppedSubjectWarning)
            subject_ids = [subject_ids[i] for i in np.flatnonzero(keep)]
            if aux is not None:
                aux = np.asarray(aux)[keep]
        if not np.any(keep):
            raise InvalidDataError('No subject has an observed occasion')
        return cls(values[keep], mask[keep], subject_ids, aux)

    @property
    def N(self):
        return self.values.shape[0]

    @property
    def T(self):
        return self.values.shape[1]

    def missing_rates(self):
        """Fraction of subjects missing at each occasion."""
        return 1. - self.mask.mean(axis=0)

    def overall_missing_rate(self):
        return 1. - self.mask.mean()

    def with_mask(self, mask):
        """A copy of this dataset observed only where mask is True."""
        mask = np.asarray(mask, dtype=bool) & self.mask
        return LongitudinalDataset(
            self.values, mask, self.subject_ids, self.aux)

    def without_aux(self):
        return LongitudinalDataset(self.values, self.mask, self.subject_ids)

    def take(self, indices):
        """Subjects at the given row indices, in that order."""
        indices = np.asarray(indices, dtype=int)
        aux = None if self.aux is None else self.aux[indices]
        return LongitudinalDataset(
            self.values[indices], self.mask[indices],
            [self.subject_ids[i] for i in indices], aux)

    def scaled(self, k):
        return LongitudinalDataset(
            k * self.values, self.mask, self.subject_ids, self.aux)

    def to_array(self):
        """Values with NaN in masked cells, for display and export only."""
        return np.where(self.mask, self.values, np.nan)

    def __eq__(self, other):
        return (isinstance(other, LongitudinalDataset) and
                self.subject_ids == other.subject_ids and
                np.array_equal(self.mask, other.mask) and
                np.array_equal(self.values, other.values))

    def __ne__(self, other):
        return not self == other

    def __repr__(self):
        return 'LongitudinalDataset(N={}, T={}, missing={:.4f})'.format(
            self.N, self.T, self.overall_missing_rate())


class FitResult(object):
    """
    Outcome of one estimator on one dataset.

    Attributes
    ----------
    method : str
        Tag of the estimator that produced this result.
    estimates : ParameterSet
        Point estimates. Reported even when converged is False.
    uncertainty : dict
        Parameter name to a dict holding 'se' (optimizers) or 'sd', 'lower',
        'upper' (posterior summaries).
    converged : bool
        Convergence flag.
    diagnostics : dict
        Free-form name to number map.
    extras : dict
        Method-specific arrays, such as robust weights or posterior summaries.
    """

    def __init__(self, method, estimates, uncertainty=None, converged=True,
                 diagnostics=None, extras=None):
        self.method = method
        self.estimates = estimates
        self.uncertainty = uncertainty or {}
        self.converged = bool(converged)
        self.diagnostics = diagnostics or {}
        self.extras = extras or {}

    def to_dict(self):
        """A JSON-serializable representation."""
        extras = {}
        for key, value in self.extras.items():
            if isinstance(value, np.ndarray):
                extras[key] = value.tolist()
            elif hasattr(value, 'to_dict'):
                extras[key] = value.to_dict()
            else:
                extras[key] = value
        return {
            'method': self.method,
            'converged': self.converged,
            'estimates': self.estimates.as_dict(),
            'uncertainty': self.uncertainty,
            'diagnostics': {
                key: float(value) for key, value in self.diagnostics.items()},
            'extras': extras,
        }

    def __repr__(self):
        return 'FitResult(method={}, converged={}, estimates={})'.format(
            self.method, self.converged, self.estimates)


def _check_dimensions(spec, params):
    if params.q != spec.q:
        raise DimensionMismatchError(
            'Model has {} random effects but parameters have {}'.format(
                spec.q, params.q))


def implied_mean(spec, params):
    """
    Model-implied mean vector Lambda beta.

    Raises
    ------
    DimensionMismatchError
        If spec and params disagree in the number of random effects.
    """
    _check_dimensions(spec, params)
    return spec.loadings.dot(params.beta)


def implied_covariance(spec, params):
    """
    Model-implied covariance Lambda Psi Lambda' + sigma2_e I.

    Raises
    ------
    DimensionMismatchError
        If spec and params disagree in the number of random effects.
    NonPositiveDefiniteError
        If psi is not positive definite or sigma2_e is not positive.
    """
    _check_dimensions(spec, params)
    if not params.sigma2_e > 0:
        raise NonPositiveDefiniteError(
            'sigma2_e must be positive, got {}'.format(params.sigma2_e))
    try:
        np.linalg.cholesky(params.psi)
    except np.linalg.LinAlgError:
        raise NonPositiveDefiniteError('psi is not positive definite')
    loadings = spec.loadings
    sigma = loadings.dot(params.psi).dot(loadings.T)
    sigma = 0.5 * (sigma + sigma.T)
    sigma[np.diag_indices(spec.T)] += params.sigma2_e
    return sigma


def observed_subproblem(data, i):
    """
    Observed outcomes of subject i in time order and their occasion indices.

    Raises
    ------
    InvalidDataError
        If the subject has no observed occasion.
    """
    index = np.flatnonzero(data.mask[i])
    if len(index) == 0:
        raise InvalidDataError(
            'Subject {} has no observed occasion'.format(data.subject_ids[i]))
    return data.values[i, index], index


def missingness_patterns(mask):
    """
    Groups subjects by missingness pattern.

    Returns
    -------
    patterns : list of (ndarray, ndarray)
        Pairs of (observed occasion indices, subject row indices), ordered by
        pattern so the grouping does not depend on subject order.
    """
    unique, inverse = np.unique(
        np.asarray(mask, dtype=bool), axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    return [
        (np.flatnonzero(pattern), np.flatnonzero(inverse == k))
        for k, pattern in enumerate(unique)]
