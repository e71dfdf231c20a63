import csv
import io
import os
import numpy as np
import pandas as pd
from .._core.model import LongitudinalDataset, effect_labels, parameter_names
from .._core.exceptions import InvalidDataError

missing_token = 'NA'


def occasion_labels(T):
    return ['y{}'.format(t + 1) for t in range(T)]


def _check_field_counts(text, path):
    counts = [len(row) for row in csv.reader(
        io.StringIO(text), skipinitialspace=True) if len(row) > 0]
    width = counts[0]
    for problem, wrong in (('too few', lambda count: count < width),
                           ('too many', lambda count: count > width)):
        rows = [number + 1 for number, count in enumerate(counts)
                if wrong(count)]
        if len(rows) > 0:
            raise InvalidDataError('Rows {} of {} have {} fields'.format(
                rows, path, problem))


def _read_frame(path):
    try:
        with open(path, 'r') as f:
            text = f.read()
    except (IOError, OSError) as error:
        raise InvalidDataError('Cannot read {}: {}'.format(path, error))
    if len(text.strip()) == 0:
        raise InvalidDataError('File {} is empty'.format(path))
    _check_field_counts(text, path)
    try:
        frame = pd.read_csv(
            io.StringIO(text), dtype=str, keep_default_na=False,
            skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as error:
        raise InvalidDataError('Malformed CSV {}: {}'.format(path, error))
    return frame


def ingest_csv(path):
    """
    Reads a wide-format CSV with header id,y1,...,yT and the literal token
    NA for missing outcomes.

    Subjects with no observed occasion are dropped with a
    DroppedSubjectWarning.

    Raises
    ------
    InvalidDataError
        If the file is empty, a row has the wrong number of fields, a cell
        is neither numeric nor NA, or no subject remains.
    """
    frame = _read_frame(path)
    columns = list(frame.columns)
    if len(columns) < 3 or columns[0].strip().lower() != 'id':
        raise InvalidDataError(
            'Expected a header id,y1,...,yT with at least two occasions in '
            '{}, got {}'.format(path, ','.join(columns)))
    if frame.shape[0] == 0:
        raise InvalidDataError('File {} has no subjects'.format(path))
    cells = frame.iloc[:, 1:].apply(lambda column: column.str.strip())
    mask = (cells != missing_token).values
    numeric = cells.where(mask, other=np.nan).apply(
        pd.to_numeric, errors='coerce')
    bad = mask & ~np.isfinite(numeric.values.astype(float))
    if bad.any():
        row, column = np.argwhere(bad)[0]
        raise InvalidDataError(
            'Non-numeric value {!r} for subject {} at {} in {}'.format(
                cells.iloc[row, column], frame.iloc[row, 0],
                columns[column + 1], path))
    subject_ids = [str(label).strip() for label in frame.iloc[:, 0]]
    return LongitudinalDataset.from_arrays(
        numeric.values.astype(float), mask, subject_ids)


def write_csv(data, path):
    """Writes data in the format read by ingest_csv."""
    frame = pd.DataFrame(data.to_array(), columns=occasion_labels(data.T))
    frame.insert(0, 'id', list(data.subject_ids))
    frame.to_csv(path, index=False, na_rep=missing_token)


def describe_occasions(data):
    """
    Per-occasion descriptive statistics of the observed outcomes.

    Returns
    -------
    table : pandas.DataFrame
        Indexed by occasion label with columns n, mean, sd, skewness,
        kurtosis (excess) and missing_rate.
    """
    frame = pd.DataFrame(data.to_array(), columns=occasion_labels(data.T))
    table = pd.DataFrame({
        'n': frame.count(),
        'mean': frame.mean(),
        'sd': frame.std(ddof=1),
        'skewness': frame.skew(),
        'kurtosis': frame.kurt(),
        'missing_rate': pd.Series(data.missing_rates(), index=frame.columns),
    })
    table.index.name = 'occasion'
    return table


def comparison_rows(q):
    """Fixed effects, random-effect variances, covariances, error variance."""
    labels = effect_labels(q)
    rows = ['beta_{}'.format(label) for label in labels]
    rows += ['psi_{0}{0}'.format(label) for label in labels]
    rows += [name for name in parameter_names(q)
             if name.startswith('psi_') and name not in rows]
    return rows + ['sigma2_e']


def comparison_table(results):
    """
    Side-by-side point estimates, one column per fit.

    Args
    ----
    results : list of FitResult

    Returns
    -------
    table : pandas.DataFrame
        Rows are parameters, columns method tags.
    """
    if len(results) == 0:
        return pd.DataFrame()
    q = results[0].estimates.q
    columns = {}
    for result in results:
        estimates = result.estimates.as_dict()
        columns[result.method] = [estimates[name] for name in comparison_rows(q)]
    table = pd.DataFrame(columns, index=comparison_rows(q))
    table.index.name = 'parameter'
    return table


def replication_filename(condition_id, rep):
    return '{}_rep{:04d}.csv'.format(condition_id, rep)


def emit_replication_data(directory, condition_id, rep, data, params):
    """
    Writes one generated dataset as CSV.

    Returns
    -------
    truth : dict
        The row of truth.csv describing this dataset.
    """
    if not os.path.isdir(directory):
        os.makedirs(directory)
    data_file = replication_filename(condition_id, rep)
    write_csv(data, os.path.join(directory, data_file))
    truth = {'condition': condition_id, 'replication': rep, 'file': data_file}
    truth.update(params.as_dict())
    return truth


def write_truth(directory, rows):
    """Writes truth.csv, ordered by condition and replication."""
    frame = pd.DataFrame(rows)
    if len(rows) > 0:
        frame = frame.sort_values(['condition', 'replication'])
    frame.to_csv(os.path.join(directory, 'truth.csv'), index=False)
