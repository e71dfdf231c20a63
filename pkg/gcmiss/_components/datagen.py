import enum
import numpy as np
from scipy import optimize, stats
from .._core.model import LongitudinalDataset, implied_mean
from .._core.settings import get_setting
from .._core.exceptions import (
    NonPositiveDefiniteError, InvalidConfigError, InvalidDataError)
from .._core.util import ensure_rng


class ErrorKind(enum.Enum):
    NORMAL = 'normal'
    STUDENT_T5 = 't5'
    NORMAL_WITH_OUTLIERS = 'outliers'
    LOGNORMAL = 'lognormal'


class Mechanism(enum.Enum):
    NONE = 'none'
    MAR = 'MAR'
    MNAR = 'MNAR'


def _kind(value, enum_class):
    if isinstance(value, enum_class):
        return value
    for member in enum_class:
        if str(value).lower() in (member.value.lower(), member.name.lower()):
            return member
    raise InvalidConfigError(
        '{} is not one of {}'.format(
            value, ', '.join(member.value for member in enum_class)))


class ErrorDistribution(object):
    """
    Distribution of the within-subject errors.

    Attributes
    ----------
    kind : ErrorKind
        The distribution family.
    outlier_rate : float
        Fraction of contaminated observations (outliers kind only, else 0).
    outlier_shift : float
        Mean of the contaminating normal.
    standardize : bool
        If True, t draws are scaled and lognormal draws centred and scaled so
        that every kind has mean 0 (outliers aside) and variance sigma2_e.
        Defaults to the standardize_errors setting.
    """

    def __init__(self, kind, outlier_rate=None, outlier_shift=None,
                 standardize=None):
        self.kind = _kind(kind, ErrorKind)
        if self.kind is ErrorKind.NORMAL_WITH_OUTLIERS:
            if outlier_rate is None:
                outlier_rate = get_setting('outlier_rate')
        else:
            outlier_rate = 0.
        if outlier_shift is None:
            outlier_shift = get_setting('outlier_shift')
        if not 0 <= outlier_rate < 1:
            raise InvalidConfigError(
                'outlier_rate must be in [0, 1), got {}'.format(outlier_rate))
        if not np.isfinite(outlier_shift):
            raise InvalidConfigError('outlier_shift must be finite')
        self.outlier_rate = float(outlier_rate)
        self.outlier_shift = float(outlier_shift)
        if standardize is None:
            standardize = get_setting('standardize_errors')
        self.standardize = bool(standardize)

    def __repr__(self):
        return 'ErrorDistribution({})'.format(self.kind.value)

    def median(self, sigma2_e):
        """Analytic median of one error draw."""
        sd = np.sqrt(sigma2_e)
        if self.kind in (ErrorKind.NORMAL, ErrorKind.STUDENT_T5):
            return 0.
        elif self.kind is ErrorKind.LOGNORMAL:
            if self.standardize:
                return sd * (1. - np.exp(0.5)) / np.sqrt((np.e - 1) * np.e)
            return sd
        rate, shift = self.outlier_rate, self.outlier_shift

        def excess(x):
            return ((1 - rate) * stats.norm.cdf(x / sd) +
                    rate * stats.norm.cdf((x - shift) / sd) - 0.5)
        return optimize.brentq(excess, -10 * sd, shift + 10 * sd)


class MissingSpec(object):
    """
    Missing data mechanism and its target rate.

    Attributes
    ----------
    mechanism : Mechanism
    rate : float
        Target missingness rate mr over the whole N x T matrix.
    r : float
        Coefficient of the slope effect in the auxiliary variable (MNAR).
    """

    def __init__(self, mechanism, rate=0., r=None):
        self.mechanism = _kind(mechanism, Mechanism)
        if not 0 <= rate < 1:
            raise InvalidConfigError(
                'missingness rate must be in [0, 1), got {}'.format(rate))
        if self.mechanism is Mechanism.NONE and rate > 0:
            raise InvalidConfigError(
                'A positive missingness rate needs a mechanism')
        if r is None:
            r = get_setting('auxiliary_coefficient')
        if not np.isfinite(r):
            raise InvalidConfigError('r must be finite')
        self.rate = float(rate)
        self.r = float(r)

    def __repr__(self):
        return 'MissingSpec({}, rate={}, r={})'.format(
            self.mechanism.value, self.rate, self.r)


class SimulatedDataset(object):
    """
    A generated dataset with its ground truth.

    Attributes
    ----------
    data : LongitudinalDataset
        What estimators see (aux is kept here but stripped before fitting).
    true_effects : ndarray
        N x q subject effects b_i.
    complete_values : ndarray
        N x T outcomes before deletion.
    """

    def __init__(self, data, true_effects, complete_values):
        observed = data.mask
        if not np.array_equal(data.values[observed], complete_values[observed]):
            raise InvalidDataError(
                'Observed values disagree with the complete values')
        self.data = data
        self.true_effects = true_effects
        self.complete_values = complete_values

    def with_mask(self, mask, aux=None):
        data = LongitudinalDataset(
            self.complete_values, mask, self.data.subject_ids,
            aux if aux is not None else self.data.aux)
        return SimulatedDataset(data, self.true_effects, self.complete_values)


def gen_random_effects(params, N, rng):
    """
    Subject effects b_i = beta + u_i with u_i ~ MVN(0, psi).

    Returns
    -------
    effects : ndarray
        N x q matrix.

    Raises
    ------
    NonPositiveDefiniteError
        If psi has no Cholesky factor.
    """
    rng = ensure_rng(rng)
    try:
        chol = np.linalg.cholesky(params.psi)
    except np.linalg.LinAlgError:
        raise NonPositiveDefiniteError('psi is not positive definite')
    z = rng.standard_normal((N, params.q))
    return params.beta[None, :] + z.dot(chol.T)


def gen_errors(dist, N, T, sigma2_e, rng):
    """
    N x T within-subject errors from the given distribution.

    The t draws are scaled by sqrt((df - 2) / df) and lognormal draws are
    centred by exp(0.5) and scaled by sqrt((e - 1) e), so that both have
    variance sigma2_e when dist.standardize is True. Outliers are drawn per
    observation from N(shift, sigma2_e).
    """
    if not sigma2_e > 0:
        raise NonPositiveDefiniteError(
            'sigma2_e must be positive, got {}'.format(sigma2_e))
    rng = ensure_rng(rng)
    sd = np.sqrt(sigma2_e)
    shape = (N, T)
    if dist.kind is ErrorKind.NORMAL:
        return sd * rng.standard_normal(shape)
    elif dist.kind is ErrorKind.STUDENT_T5:
        df = get_setting('t_degrees_of_freedom')
        draws = rng.standard_t(df, shape)
        if dist.standardize:
            draws = draws * np.sqrt((df - 2.) / df)
        return sd * draws
    elif dist.kind is ErrorKind.NORMAL_WITH_OUTLIERS:
        draws = sd * rng.standard_normal(shape)
        outlying = rng.random(shape) < dist.outlier_rate
        return draws + dist.outlier_shift * outlying
    draws = np.exp(rng.standard_normal(shape))
    if dist.standardize:
        draws = (draws - np.exp(0.5)) / np.sqrt((np.e - 1) * np.e)
    return sd * draws


def gen_complete(spec, params, dist, N, rng):
    """
    Complete trajectories y_i = Lambda b_i + e_i, all observed.
    """
    rng = ensure_rng(rng)
    implied_mean(spec, params)
    effects = gen_random_effects(params, N, rng)
    values = effects.dot(spec.loadings.T) + gen_errors(
        dist, N, spec.T, params.sigma2_e, rng)
    data = LongitudinalDataset(values, np.ones(values.shape, dtype=bool))
    return SimulatedDataset(data, effects, values)


def cumulative_dropout_targets(T, mr):
    """
    Target fraction of subjects missing at occasions 2..T: 2t mr / (T - 1)
    for t = 1..T-1. Their average over all T occasions is mr.
    """
    return np.array([2. * t * mr / (T - 1) for t in range(1, T)])


def mar_cutoff_levels(T, mr):
    """
    Nominal quantile levels of the MAR cutoffs c_1..c_{T-1}: the upper
    (1 - 2t mr / (T - 1)) percentiles.

    Raises
    ------
    InvalidConfigError
        If a level is not positive.
    """
    levels = 1. - cumulative_dropout_targets(T, mr)
    if np.any(levels <= 0):
        raise InvalidConfigError(
            'Missingness rate {} is too large for {} occasions: cutoff '
            'percentile levels {}'.format(mr, T, levels.tolist()))
    return levels


def impose_mar(sim, mr, rng=None):
    """
    Monotone dropout driven by observed outcomes.

    Subjects still observed at occasion t whose y_t exceeds the cutoff c_t
    lose occasions t+1..T. c_t is the empirical quantile of the still
    observed y_t at the level that brings the cumulative dropout fraction to
    2t mr / (T - 1). Occasion 1 is never deleted. rng is accepted for a
    uniform interface; deletion is deterministic given the outcomes.
    """
    values = sim.complete_values
    N, T = values.shape
    mask = sim.data.mask.copy()
    if mr == 0:
        return sim.with_mask(mask)
    targets = cumulative_dropout_targets(T, mr)
    mar_cutoff_levels(T, mr)
    observed = np.ones(N, dtype=bool)
    dropped_before = 0.
    for t in range(T - 1):
        remaining = observed.sum()
        if remaining == 0:
            break
        # share of the still-observed subjects that must drop now
        share = (targets[t] - dropped_before) / (1. - dropped_before)
        cutoff = np.quantile(values[observed, t], 1. - share)
        drops = observed & (values[:, t] > cutoff)
        mask[drops, t + 1:] = False
        observed = observed & ~drops
        dropped_before = 1. - observed.mean()
    return sim.with_mask(mask)


def mnar_thresholds(T, mr, r, psi_slope=1.):
    """
    Thresholds on the auxiliary variable for occasions 2..T: the lower
    (1 - 2(t-1) mr / (T - 1)) percentiles of its marginal N(0, r^2 psi_SS + 1).
    """
    levels = 1. - np.array([2. * (t - 1) * mr / (T - 1) for t in range(2, T + 1)])
    if np.any(levels <= 0):
        raise InvalidConfigError(
            'Missingness rate {} is too large for {} occasions'.format(mr, T))
    scale = np.sqrt(r**2 * psi_slope + 1.)
    return stats.norm.ppf(levels, scale=scale)


def impose_mnar(sim, params, r, mr, rng):
    """
    Missingness driven by the unobserved slope effect through
    Aux_i = r (b_iS - beta_S) + eps_i, eps_i ~ N(0, 1). Occasion t >= 2 is
    missing when Aux_i exceeds its threshold. Aux is stored on the dataset
    but estimators never see it.
    """
    rng = ensure_rng(rng)
    N, T = sim.complete_values.shape
    slope = sim.true_effects[:, -1] - params.beta[-1]
    aux = r * slope + rng.standard_normal(N)
    mask = sim.data.mask.copy()
    if mr == 0:
        return sim.with_mask(mask, aux=aux)
    thresholds = mnar_thresholds(T, mr, r, params.psi[-1, -1])
    for t in range(1, T):
        mask[aux > thresholds[t - 1], t] = False
    return sim.with_mask(mask, aux=aux)


def impose_missingness(sim, missing, params, rng):
    """Applies a MissingSpec."""
    if missing.mechanism is Mechanism.MAR:
        return impose_mar(sim, missing.rate, rng)
    elif missing.mechanism is Mechanism.MNAR:
        return impose_mnar(sim, params, missing.r, missing.rate, rng)
    return sim
