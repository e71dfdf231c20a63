import logging
import json
import os
import warnings
import numpy as np
import pandas as pd
import scipy
import xarray
import joblib
from joblib import Parallel, delayed
from .._core.model import GrowthModelSpec, ParameterSet, parameter_names
from .._core.settings import (
    get_setting, profile_iterations, settings_snapshot, apply_settings)
from .._core.exceptions import (
    InvalidConfigError, InvalidDataError, InvalidStateError, ConvergenceWarning,
    BoundaryEstimateWarning)
from .._core.util import stable_seed
from .datagen import (
    ErrorDistribution, ErrorKind, Mechanism, MissingSpec, gen_complete,
    impose_missingness, _kind)
from .datafiles import emit_replication_data
from .fiml import FimlEstimator
from .tsre import TsreEstimator
from .rmb import RmbEstimator, ChainConfig
from .monitors import CheckpointMonitor

logger = logging.getLogger(__name__)

harness_methods = ('fiml', 'tsre', 'rmb')
default_sizes = (100, 200, 500)
default_rates = (0.05, 0.15, 0.30)
result_columns = [
    'condition', 'n', 'mechanism', 'mr', 'dist', 'method', 'parameter',
    'truth', 'mean_estimate', 'rb', 'mse', 'n_converged', 'n_reps',
    'n_failed', 'convergence_rate']


def population_spec(T=4):
    """Linear growth over T occasions."""
    return GrowthModelSpec.linear(T)


def population_parameters():
    """beta = (6, 2), unit intercept and slope variances, zero covariance,
    unit error variance."""
    return ParameterSet([6., 2.], np.eye(2), 1.)


class Condition(object):
    """
    One cell of the simulation design.

    Attributes
    ----------
    n : int
        Sample size.
    mechanism : Mechanism
        Missingness mechanism, NONE exactly when mr is 0.
    mr : float
        Target missingness rate.
    dist : ErrorKind
        Error distribution.
    """

    def __init__(self, n, mechanism, mr, dist):
        self.n = int(n)
        self.mechanism = _kind(mechanism, Mechanism)
        self.mr = float(mr)
        self.dist = _kind(dist, ErrorKind)
        if self.n < 2:
            raise InvalidConfigError('n must be at least 2, got {}'.format(n))
        if (self.mr == 0) != (self.mechanism is Mechanism.NONE):
            raise InvalidConfigError(
                'Conditions without missingness carry no mechanism and '
                'conditions with missingness need one, got {} at mr={}'.format(
                    self.mechanism.value, self.mr))

    @property
    def id(self):
        return 'n{}-{}-mr{:02d}-{}'.format(
            self.n, self.mechanism.value, int(round(100 * self.mr)),
            self.dist.value)

    def missing_spec(self):
        return MissingSpec(self.mechanism, self.mr)

    def as_dict(self):
        return {'condition': self.id, 'n': self.n,
                'mechanism': self.mechanism.value, 'mr': self.mr,
                'dist': self.dist.value}

    def __eq__(self, other):
        return isinstance(other, Condition) and self.id == other.id

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.id)

    def __repr__(self):
        return 'Condition({})'.format(self.id)


def default_grid():
    """
    The full design: every sample size, mechanism, positive rate and error
    distribution, plus one no-missingness baseline per sample size and
    distribution. 84 conditions.
    """
    return grid_from_config({})


def grid_from_config(config):
    """
    Builds a grid from factor lists.

    Args
    ----
    config : dict
        Optional keys n, mechanism, mr and dist, each a list. Missing keys
        take the full design's levels. A rate of 0 yields one baseline
        condition per sample size and distribution.

    Raises
    ------
    InvalidConfigError
        If a factor is not a list or holds an invalid level.
    """
    factors = {
        'n': list(default_sizes),
        'mechanism': [Mechanism.MAR.value, Mechanism.MNAR.value],
        'mr': [0.] + list(default_rates),
        'dist': [kind.value for kind in ErrorKind],
    }
    for key, value in config.items():
        if key not in factors:
            continue
        if not isinstance(value, (list, tuple)):
            raise InvalidConfigError(
                'Factor {} must be a list, got {}'.format(key, value))
        factors[key] = list(value)
    grid = []
    for n in factors['n']:
        for mechanism in factors['mechanism']:
            for mr in factors['mr']:
                if mr == 0:
                    continue
                for dist in factors['dist']:
                    grid.append(Condition(n, mechanism, mr, dist))
        if 0 in factors['mr']:
            for dist in factors['dist']:
                grid.append(Condition(n, Mechanism.NONE, 0., dist))
    return grid


class Budget(object):
    """
    Computing budget of one run.

    Attributes
    ----------
    n_iter : int
        Gibbs iterations of every RMB fit, burn-in half.
    """

    def __init__(self, n_iter=None):
        self.n_iter = int(
            profile_iterations['test'] if n_iter is None else n_iter)

    @classmethod
    def from_profile(cls, name):
        if name not in profile_iterations:
            raise InvalidConfigError('Unknown profile {}'.format(name))
        return cls(profile_iterations[name])

    def chain_config(self, seed):
        return ChainConfig(n_iter=self.n_iter, seed=seed)

    def __repr__(self):
        return 'Budget(n_iter={})'.format(self.n_iter)


def replication_seed(condition, rep, base_seed):
    return stable_seed(condition.id, rep, base_seed)


def make_estimator(method, spec, condition, budget, seed):
    """
    Estimator for a method name. Plain rmb uses the selection model exactly
    in MNAR conditions.
    """
    if method == 'fiml':
        return FimlEstimator(spec)
    elif method == 'tsre':
        return TsreEstimator(spec)
    elif method in ('rmb', 'rmb-selection'):
        selection = (method == 'rmb-selection' or
                     condition.mechanism is Mechanism.MNAR)
        return RmbEstimator(
            spec, config=budget.chain_config(seed), selection=selection)
    raise InvalidConfigError('Unknown method {}'.format(method))


def generate_replication(condition, rep, base_seed, spec=None, params=None):
    """The dataset of one replication, identical for every method."""
    spec = spec or population_spec()
    params = params or population_parameters()
    rng = np.random.default_rng(replication_seed(condition, rep, base_seed))
    sim = gen_complete(
        spec, params, ErrorDistribution(condition.dist), condition.n, rng)
    return impose_missingness(sim, condition.missing_spec(), params, rng)


def run_replication(condition, methods, rep, base_seed, budget,
                    emit_dir=None, settings=None):
    """
    Generates one dataset and fits every method to it. settings, a
    settings_snapshot, is applied first; worker processes start from the
    defaults.

    Returns
    -------
    record : dict
        rep, seed, and per method the estimates, the convergence flag and,
        for failed fits, the error message. Failures are logged, not raised.
    """
    if settings is not None:
        apply_settings(settings)
    spec = population_spec()
    params = population_parameters()
    seed = replication_seed(condition, rep, base_seed)
    sim = generate_replication(condition, rep, base_seed, spec, params)
    data = sim.data.without_aux()
    record = {'rep': rep, 'seed': seed, 'estimates': {}, 'converged': {},
              'failed': {}}
    if emit_dir is not None:
        record['truth'] = emit_replication_data(
            emit_dir, condition.id, rep, data, params)
    for method in methods:
        estimator = make_estimator(method, spec, condition, budget, seed)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter('ignore', ConvergenceWarning)
                warnings.simplefilter('ignore', BoundaryEstimateWarning)
                result = estimator(data)
        except (ValueError, InvalidStateError, np.linalg.LinAlgError) as error:
            logger.warning(
                'Condition %s replication %d: %s failed: %s',
                condition.id, rep, method, error)
            record['failed'][method] = str(error)
            continue
        record['estimates'][method] = result.estimates.as_dict()
        record['converged'][method] = result.converged
    return record


def relative_bias(estimates, theta):
    """
    Relative bias in percent, 100 |(mean - theta) / theta|, or the absolute
    bias |mean - theta| when theta is 0.

    Raises
    ------
    InvalidDataError
        If estimates is empty.
    """
    estimates = np.asarray(estimates, dtype=float)
    if estimates.size == 0:
        raise InvalidDataError('Relative bias of no estimates')
    bias = estimates.mean() - theta
    if theta == 0:
        return float(abs(bias))
    return float(100. * abs(bias / theta))


def mse(estimates, theta):
    """Mean squared deviation of estimates from theta."""
    estimates = np.asarray(estimates, dtype=float)
    if estimates.size == 0:
        raise InvalidDataError('MSE of no estimates')
    return float(np.mean((estimates - theta)**2))


class ConditionResult(object):
    """
    Aggregated outcome of one condition.

    Attributes
    ----------
    condition : Condition
    methods : tuple of str
    records : list of dict
        Per-replication records, sorted by replication index.
    reps : int
        Replications requested.
    """

    def __init__(self, condition, methods, records, reps):
        self.condition = condition
        self.methods = tuple(methods)
        self.records = sorted(records, key=lambda record: record['rep'])
        self.reps = reps
        if len(self.records) > reps:
            raise InvalidDataError(
                '{} records for {} replications'.format(
                    len(self.records), reps))

    def estimates(self, method, parameter, converged_only=True):
        return np.array([
            record['estimates'][method][parameter] for record in self.records
            if method in record['estimates'] and (
                record['converged'][method] or not converged_only)])

    def n_converged(self, method):
        return sum(1 for record in self.records
                   if record['converged'].get(method, False))

    def n_failed(self, method):
        return sum(1 for record in self.records if method in record['failed'])

    def table(self):
        """Long format: one row per method and parameter."""
        truth = population_parameters().as_dict()
        rows = []
        for method in self.methods:
            n_converged = self.n_converged(method)
            for parameter in parameter_names(2):
                estimates = self.estimates(method, parameter)
                row = self.condition.as_dict()
                row.update({
                    'method': method,
                    'parameter': parameter,
                    'truth': truth[parameter],
                    'mean_estimate': (
                        float(estimates.mean()) if estimates.size else np.nan),
                    'rb': (relative_bias(estimates, truth[parameter])
                           if estimates.size else np.nan),
                    'mse': (mse(estimates, truth[parameter])
                            if estimates.size else np.nan),
                    'n_converged': n_converged,
                    'n_reps': len(self.records),
                    'n_failed': self.n_failed(method),
                    'convergence_rate': (
                        n_converged / float(len(self.records))
                        if self.records else np.nan),
                })
                rows.append(row)
        return pd.DataFrame(rows, columns=result_columns)

    def estimates_table(self):
        """Raw per-replication estimates, converged or not."""
        rows = []
        for record in self.records:
            for method in self.methods:
                if method not in record['estimates']:
                    continue
                for parameter, value in sorted(
                        record['estimates'][method].items()):
                    row = self.condition.as_dict()
                    row.update({
                        'rep': record['rep'], 'method': method,
                        'parameter': parameter, 'estimate': value,
                        'converged': record['converged'][method]})
                    rows.append(row)
        return pd.DataFrame(rows, columns=[
            'condition', 'n', 'mechanism', 'mr', 'dist', 'rep', 'method',
            'parameter', 'estimate', 'converged'])

    def __repr__(self):
        return 'ConditionResult({}, reps={})'.format(
            self.condition.id, len(self.records))


def _checkpoint_path(checkpoint_dir, condition):
    return os.path.join(checkpoint_dir, '{}.json'.format(condition.id))


def run_condition(condition, methods, reps, base_seed, budget=None, n_jobs=1,
                  checkpoint_dir=None, emit_dir=None, chunk_size=None):
    """
    Runs every replication of a condition.

    Replication seeds come from a stable hash of the condition, the
    replication index and base_seed, so each method sees the same datasets
    and results do not depend on n_jobs. With a checkpoint directory, the
    records are saved after every chunk of replications and a later call
    resumes from them.

    Returns
    -------
    result : ConditionResult
    """
    budget = budget or Budget()
    methods = tuple(methods)
    settings = settings_snapshot()
    for method in methods:
        if method not in harness_methods + ('rmb-selection',):
            raise InvalidConfigError('Unknown method {}'.format(method))
    records = []
    checkpoint = None
    if checkpoint_dir is not None:
        if not os.path.isdir(checkpoint_dir):
            os.makedirs(checkpoint_dir)
        checkpoint = CheckpointMonitor(_checkpoint_path(checkpoint_dir, condition))
        stored = checkpoint.load()
        if stored is not None:
            if (stored['condition'] != condition.id or
                    tuple(stored['methods']) != methods or
                    stored['base_seed'] != base_seed or
                    stored['n_iter'] != budget.n_iter or
                    stored.get('settings') != settings):
                raise InvalidConfigError(
                    'Checkpoint {} was written by a different run'.format(
                        checkpoint.filename))
            records = [record for record in stored['records']
                       if record['rep'] < reps]
            logger.info('Condition %s: resuming with %d of %d replications',
                        condition.id, len(records), reps)
    done = set(record['rep'] for record in records)
    remaining = [rep for rep in range(reps) if rep not in done]
    logger.info('Condition %s: running %d replications',
                condition.id, len(remaining))
    if chunk_size is None:
        chunk_size = max(1, 4 * abs(n_jobs)) if checkpoint else max(1, len(remaining))
    for start in range(0, len(remaining), chunk_size):
        chunk = remaining[start:start + chunk_size]
        if n_jobs == 1:
            new_records = [
                run_replication(condition, methods, rep, base_seed, budget,
                                emit_dir, settings)
                for rep in chunk]
        else:
            new_records = Parallel(n_jobs=n_jobs)(
                delayed(run_replication)(
                    condition, methods, rep, base_seed, budget, emit_dir,
                    settings)
                for rep in chunk)
        records.extend(new_records)
        if checkpoint is not None:
            checkpoint.store({
                'condition': condition.id, 'methods': list(methods),
                'base_seed': base_seed, 'n_iter': budget.n_iter,
                'settings': settings,
                'records': sorted(records, key=lambda record: record['rep'])})
    result = ConditionResult(condition, methods, records, reps)
    logger.info('Condition %s: finished', condition.id)
    return result


def run_grid(grid, methods, reps, base_seed=None, budget=None, n_jobs=1,
             checkpoint_dir=None, emit_dir=None):
    """
    Runs every condition of a grid in order.

    Returns
    -------
    results : list of ConditionResult
    """
    if base_seed is None:
        base_seed = get_setting('base_seed')
    return [
        run_condition(condition, methods, reps, base_seed, budget, n_jobs,
                      checkpoint_dir, emit_dir)
        for condition in grid]


def results_table(results):
    """RB and MSE of every condition, method and parameter."""
    if len(results) == 0:
        return pd.DataFrame(columns=result_columns)
    return pd.concat([result.table() for result in results], ignore_index=True)


def convergence_table(results):
    """Convergence rate and failure count of every condition and method."""
    columns = ['condition', 'n', 'mechanism', 'mr', 'dist', 'method',
               'n_converged', 'n_failed', 'n_reps', 'convergence_rate']
    table = results_table(results)
    if table.shape[0] == 0:
        return pd.DataFrame(columns=columns)
    return table[columns].drop_duplicates().reset_index(drop=True)


def estimates_table(results):
    frames = [result.estimates_table() for result in results]
    if len(frames) == 0:
        return pd.DataFrame()
    return pd.concat(frames, ignore_index=True)


def audit_results(results, estimates):
    """
    Recomputes RB and MSE from the raw estimate dump and returns the largest
    absolute difference from the reported values.

    Args
    ----
    results : pandas.DataFrame
        As made by results_table.
    estimates : pandas.DataFrame
        As made by estimates_table.
    """
    if results.shape[0] == 0:
        return 0.
    truth = population_parameters().as_dict()
    kept = estimates[estimates['converged'].astype(bool)].copy()
    kept['error'] = kept['estimate'] - kept['parameter'].map(truth)
    grouped = kept.groupby(['condition', 'method', 'parameter'])['error']
    recomputed = pd.DataFrame({
        'bias': grouped.mean(),
        'mse': grouped.apply(lambda errors: np.mean(errors**2)),
    }).reset_index()
    merged = results.merge(
        recomputed, on=['condition', 'method', 'parameter'], how='inner')
    nonzero = merged['truth'] != 0
    recomputed_rb = np.where(
        nonzero, 100. * np.abs(merged['bias'] / merged['truth'].where(nonzero, 1.)),
        np.abs(merged['bias']))
    discrepancy = np.concatenate([
        np.abs(recomputed_rb - merged['rb'].values),
        np.abs(merged['mse_y'].values - merged['mse_x'].values)])
    return float(np.nanmax(discrepancy)) if discrepancy.size else 0.


def run_manifest(grid, methods, reps, base_seed, budget, profile=None,
                 version=None):
    """Everything needed to repeat a run. Holds no timestamps."""
    return {
        'gcmiss': version,
        'versions': {
            'numpy': np.__version__, 'scipy': scipy.__version__,
            'pandas': pd.__version__, 'xarray': xarray.__version__,
            'joblib': joblib.__version__},
        'profile': profile,
        'n_iter': budget.n_iter,
        'methods': list(methods),
        'replications': reps,
        'base_seed': base_seed,
        'conditions': [condition.id for condition in grid],
        'settings': settings_snapshot(),
    }


def write_outputs(directory, results, manifest):
    """
    Writes results.csv, convergence.csv, estimates.csv and manifest.json.

    Returns
    -------
    discrepancy : float
        The audit_results discrepancy of the written tables.
    """
    if not os.path.isdir(directory):
        os.makedirs(directory)
    table = results_table(results)
    estimates = estimates_table(results)
    table.to_csv(os.path.join(directory, 'results.csv'), index=False)
    convergence_table(results).to_csv(
        os.path.join(directory, 'convergence.csv'), index=False)
    estimates.to_csv(os.path.join(directory, 'estimates.csv'), index=False)
    with open(os.path.join(directory, 'manifest.json'), 'w') as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
    discrepancy = audit_results(table, estimates) if estimates.shape[0] else 0.
    logger.info('Wrote %d result rows to %s (audit discrepancy %.3g)',
                table.shape[0], directory, discrepancy)
    return discrepancy
