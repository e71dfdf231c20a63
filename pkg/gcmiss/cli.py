"""
Command-line interface::

    gcm fit --data scores.csv --method fiml,tsre,rmb-both --out results/
    gcm simulate --config sim.json --out sim/ --jobs 4 --resume
    gcm diagnose draws.csv

Exit codes are 0 on success, 2 for usage and configuration errors, 3 for
data errors and 4 when a fit or chain did not converge (results are still
written).
"""
import argparse
import json
import logging
import os
import sys
import numpy as np
import pandas as pd
from . import __version__
from ._core.model import GrowthModelSpec
from ._core.settings import (
    get_setting, set_setting, set_profile, get_profile, reset_settings)
from ._core.exceptions import (
    InvalidConfigError, InvalidDataError, DimensionMismatchError,
    NonPositiveDefiniteError, ConstantChainError)
from ._components.datafiles import (
    ingest_csv, describe_occasions, comparison_table, write_truth)
from ._components.fiml import FimlEstimator
from ._components.tsre import TsreEstimator, TsreOptions
from ._components.rmb import RmbEstimator, ChainConfig
from ._components.monitors import read_draws_csv, write_draws_csv
from ._components.diagnostics import (
    geweke_z, geweke_passes, effective_sample_size)
from ._components.simstudy import (
    Budget, grid_from_config, default_grid, run_grid, run_manifest,
    write_outputs, harness_methods)

logger = logging.getLogger(__name__)

exit_success = 0
exit_usage = 2
exit_data = 3
exit_nonconvergence = 4

fit_methods = ('fiml', 'tsre', 'rmb', 'rmb-selection', 'rmb-both')


def _method_list(text, allowed):
    methods = [name.strip() for name in text.split(',') if name.strip()]
    unknown = [name for name in methods if name not in allowed]
    if len(methods) == 0 or len(unknown) > 0:
        raise argparse.ArgumentTypeError(
            'unknown method(s) {}, expected a comma-separated list of '
            '{}'.format(', '.join(unknown) or '(none)', ', '.join(allowed)))
    return methods


def _fit_methods(text):
    return _method_list(text, fit_methods)


def _harness_methods(text):
    return _method_list(text, harness_methods + ('rmb-selection',))


def _time_scores(text):
    try:
        return [float(value) for value in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(
            'time scores must be comma-separated numbers, got {}'.format(text))


def build_parser():
    parser = argparse.ArgumentParser(
        prog='gcm',
        description='Growth curve models with missing data: FIML, two-stage '
                    'robust and median-based Bayesian estimation.')
    parser.add_argument('--version', action='version',
                        version='%(prog)s {}'.format(__version__))
    subparsers = parser.add_subparsers(dest='command')
    subparsers.required = True

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--out', required=True,
                        help='output directory, created if needed')
    common.add_argument('--seed', type=int, default=None,
                        help='random seed (default: the base_seed setting)')
    common.add_argument('--iters', type=int, default=None,
                        help='Gibbs iterations per chain, burn-in half')
    common.add_argument('--paper-profile', action='store_true',
                        help='use 60,000-iteration chains')
    common.add_argument('--huber-prob', type=float, default=None,
                        help='TSRE Huber tail probability, 0 disables '
                             'downweighting')
    common.add_argument('--verbose', action='store_true',
                        help='log progress at INFO level')

    fit = subparsers.add_parser(
        'fit', parents=[common], help='fit one dataset')
    fit.add_argument('--data', required=True,
                     help='wide CSV with header id,y1,...,yT and NA for '
                          'missing outcomes')
    fit.add_argument('--method', type=_fit_methods, default=['fiml'],
                     help='comma-separated list of {}'.format(
                         ', '.join(fit_methods)))
    fit.add_argument('--time-scores', type=_time_scores, default=None,
                     help='comma-separated occasion times of the linear '
                          'slope (default 0,1,...,T-1)')
    fit.add_argument('--keep-draws', action='store_true',
                     help='write the post burn-in draws of every RMB fit')
    fit.add_argument('--selection', action='store_true',
                     help='fit rmb with the MNAR selection model')

    simulate = subparsers.add_parser(
        'simulate', parents=[common], help='run the simulation study')
    simulate.add_argument('--config', default=None,
                          help='JSON file with factor lists n, mechanism, mr, '
                               'dist and optional reps, methods, base_seed '
                               'and a settings object')
    simulate.add_argument('--method', type=_harness_methods, default=None,
                          help='comma-separated methods to compare '
                               '(default: the config methods, else '
                               '{})'.format(','.join(harness_methods)))
    simulate.add_argument('--reps', type=int, default=None,
                          help='replications per condition')
    simulate.add_argument('--jobs', type=int, default=1,
                          help='parallel replications (-1 for all cores)')
    simulate.add_argument('--resume', action='store_true',
                          help='continue from checkpoints in the output '
                               'directory')
    simulate.add_argument('--emit-data', action='store_true',
                          help='also write every generated dataset as CSV')

    diagnose = subparsers.add_parser('diagnose', help='check a raw draw file')
    diagnose.add_argument('draws', help='raw-draw CSV written by gcm fit')
    diagnose.add_argument('--out', default=None,
                          help='also write the report as CSV here')
    diagnose.add_argument('--verbose', action='store_true',
                          help='log progress at INFO level')
    return parser


def _configure(args):
    reset_settings()
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s')
    logging.captureWarnings(True)
    _apply_flags(args)


def _apply_flags(args):
    if getattr(args, 'paper_profile', False):
        set_profile('paper')
    if getattr(args, 'iters', None) is not None:
        set_setting('chain_iterations', args.iters)
    if getattr(args, 'huber_prob', None) is not None:
        set_setting('huber_tail_probability', args.huber_prob)


def _seed(args):
    return get_setting('base_seed') if args.seed is None else args.seed


def _ensure_directory(directory):
    if not os.path.isdir(directory):
        os.makedirs(directory)


def _spec_for(data, time_scores):
    if time_scores is None:
        return GrowthModelSpec.linear(data.T)
    if len(time_scores) != data.T:
        raise InvalidConfigError(
            '{} time scores given for {} occasions'.format(
                len(time_scores), data.T))
    return GrowthModelSpec(np.column_stack([np.ones(data.T), time_scores]))


def _estimators(methods, spec, args):
    estimators = []
    for method in methods:
        if method == 'fiml':
            estimators.append(FimlEstimator(spec))
        elif method == 'tsre':
            estimators.append(TsreEstimator(spec, TsreOptions()))
        else:
            if method == 'rmb-both':
                selections = [False, True]
            else:
                selections = [method == 'rmb-selection' or args.selection]
            for selection in selections:
                config = ChainConfig(seed=_seed(args),
                                     keep_draws=args.keep_draws)
                estimators.append(RmbEstimator(
                    spec, config=config, selection=selection))
    return estimators


def fit_command(args):
    data = ingest_csv(args.data)
    spec = _spec_for(data, args.time_scores)
    _ensure_directory(args.out)
    descriptives = describe_occasions(data)
    descriptives.to_csv(os.path.join(args.out, 'descriptives.csv'))
    logger.info('Read %d subjects over %d occasions, missingness %s',
                data.N, data.T, np.round(data.missing_rates(), 4).tolist())
    results = []
    seen = set()
    for estimator in _estimators(args.method, spec, args):
        if estimator.method in seen:
            continue
        seen.add(estimator.method)
        logger.info('Fitting %s', estimator.method)
        result = estimator(data)
        draws = result.extras.pop('draws', None)
        if draws is not None:
            filename = os.path.join(
                args.out, 'draws_{}.csv'.format(result.method))
            write_draws_csv(draws, filename)
            logger.info('Wrote %s', filename)
        results.append(result)
    output = {
        'data': {'file': os.path.basename(args.data), 'N': data.N,
                 'T': data.T,
                 'missing_rates': data.missing_rates().tolist()},
        'profile': get_profile(),
        'seed': _seed(args),
        'results': [result.to_dict() for result in results],
    }
    with open(os.path.join(args.out, 'results.json'), 'w') as f:
        json.dump(output, f, indent=2, sort_keys=True)
    table = comparison_table(results)
    table.to_csv(os.path.join(args.out, 'comparison.csv'))
    print(table.to_string(float_format=lambda value: '{:.4f}'.format(value)))
    if not all(result.converged for result in results):
        logger.warning('Not every fit converged; see results.json')
        return exit_nonconvergence
    return exit_success


config_keys = ('n', 'mechanism', 'mr', 'dist', 'reps', 'methods', 'base_seed',
               'settings')


def _load_config(path):
    if path is None:
        return {}
    try:
        with open(path, 'r') as f:
            config = json.load(f)
    except (IOError, OSError, ValueError) as error:
        raise InvalidConfigError('Cannot read config {}: {}'.format(path, error))
    if not isinstance(config, dict):
        raise InvalidConfigError('Config {} must hold an object'.format(path))
    unknown = sorted(key for key in config if key not in config_keys)
    if len(unknown) > 0:
        raise InvalidConfigError(
            'Unknown config keys {}, expected some of {}'.format(
                ', '.join(unknown), ', '.join(config_keys)))
    return config


def _apply_config_settings(config):
    overrides = config.get('settings', {})
    if not isinstance(overrides, dict):
        raise InvalidConfigError('Config settings must be an object')
    for name in sorted(overrides.keys()):
        get_setting(name)
        set_setting(name, overrides[name])
        logger.info('Setting %s = %s from config', name, overrides[name])


def _replications(args, config):
    reps = args.reps if args.reps is not None else config.get(
        'reps', get_setting('replications'))
    if isinstance(reps, bool) or not isinstance(reps, int) or reps < 1:
        raise InvalidConfigError(
            'Replications must be a positive integer, got {}'.format(reps))
    return reps


def _simulation_methods(args, config):
    if args.method is not None:
        return args.method
    methods = config.get('methods', list(harness_methods))
    if not isinstance(methods, list) or len(methods) == 0:
        raise InvalidConfigError(
            'Config methods must be a non-empty list, got {}'.format(methods))
    return methods


def _clear_checkpoints(directory):
    if not os.path.isdir(directory):
        return
    for name in sorted(os.listdir(directory)):
        if name.endswith('.json'):
            os.remove(os.path.join(directory, name))
            logger.info('Removed stale checkpoint %s', name)


def simulate_command(args):
    config = _load_config(args.config)
    _apply_config_settings(config)
    _apply_flags(args)
    factors = dict((key, value) for key, value in config.items()
                   if key in ('n', 'mechanism', 'mr', 'dist'))
    grid = grid_from_config(factors) if factors else default_grid()
    reps = _replications(args, config)
    methods = _simulation_methods(args, config)
    base_seed = (args.seed if args.seed is not None
                 else config.get('base_seed', get_setting('base_seed')))
    budget = Budget(get_setting('chain_iterations'))
    _ensure_directory(args.out)
    checkpoint_dir = os.path.join(args.out, 'checkpoints')
    if not args.resume:
        _clear_checkpoints(checkpoint_dir)
    emit_dir = os.path.join(args.out, 'data') if args.emit_data else None
    logger.info('Running %d conditions, %d replications each, %s',
                len(grid), reps, budget)
    results = run_grid(grid, methods, reps, base_seed, budget, args.jobs,
                       checkpoint_dir, emit_dir)
    manifest = run_manifest(grid, methods, reps, base_seed, budget,
                            get_profile(), __version__)
    discrepancy = write_outputs(args.out, results, manifest)
    if emit_dir is not None:
        write_truth(emit_dir, [
            record['truth'] for result in results
            for record in result.records if 'truth' in record])
    if discrepancy > 1e-8:
        logger.warning('Audit discrepancy %.3g in results.csv', discrepancy)
    return exit_success


def log_scale(name):
    """Positive quantities whose Geweke z is taken on the log scale."""
    if name in ('sigma', 'sigma2_e'):
        return True
    labels = name[len('psi_'):]
    return (name.startswith('psi_') and len(labels) == 2 and
            labels[0] == labels[1])


def diagnose_report(draws):
    """
    Per-parameter Geweke z, pass flag, effective sample size and status.
    Constant parameters are flagged with status 'constant'.
    """
    rows = []
    for name in draws['parameter'].values:
        chain = draws.sel(parameter=name).values
        row = {'parameter': str(name), 'n_draws': chain.size,
               'mean': float(chain.mean()), 'geweke_z': np.nan,
               'passes': False, 'ess': np.nan, 'status': 'ok'}
        try:
            if log_scale(str(name)) and np.all(chain > 0):
                row['geweke_z'] = geweke_z(np.log(chain))
            else:
                row['geweke_z'] = geweke_z(chain)
            row['ess'] = effective_sample_size(chain)
            row['passes'] = geweke_passes(row['geweke_z'])
            if not row['passes']:
                row['status'] = 'not converged'
        except ConstantChainError:
            row['status'] = 'constant'
        rows.append(row)
    return pd.DataFrame(rows, columns=[
        'parameter', 'n_draws', 'mean', 'geweke_z', 'passes', 'ess',
        'status']).set_index('parameter')


def diagnose_command(args):
    report = diagnose_report(read_draws_csv(args.draws))
    if args.out is not None:
        directory = os.path.dirname(os.path.abspath(args.out))
        _ensure_directory(directory)
        report.to_csv(args.out)
    print(report.to_string(float_format=lambda value: '{:.4f}'.format(value)))
    if not report['passes'].all():
        return exit_nonconvergence
    return exit_success


commands = {
    'fit': fit_command,
    'simulate': simulate_command,
    'diagnose': diagnose_command,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _configure(args)
        return commands[args.command](args)
    except InvalidConfigError as error:
        logger.error('%s', error)
        return exit_usage
    except (InvalidDataError, DimensionMismatchError,
            NonPositiveDefiniteError) as error:
        logger.error('%s', error)
        return exit_data


if __name__ == '__main__':
    sys.exit(main())
