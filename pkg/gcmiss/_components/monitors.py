import json
import os
import numpy as np
import pandas as pd
import xarray as xr
from six import string_types
from .._core.base_components import Monitor
from .._core.exceptions import InvalidStateError, InvalidDataError


class DrawMonitor(Monitor):
    """
    A Monitor which caches the monitored quantities of every stored sampler
    state and exposes them as a DataArray with dimensions (draw, parameter).
    """

    def __init__(self, store_names):
        """
        Args
        ----
        store_names : iterable of str
            Names of the scalar quantities to store, in column order.
        """
        store_names = tuple(store_names)
        for name in store_names:
            if not isinstance(name, string_types):
                raise TypeError(
                    'Bad store name type: {}. Expected string.'.format(
                        type(name)))
        self._store_names = store_names
        self._rows = []

    @property
    def store_names(self):
        return self._store_names

    def __len__(self):
        return len(self._rows)

    def store(self, state):
        """
        Caches the stored quantities of a state.

        Args
        ----
        state : dict
            Quantity name to scalar value. Must hold every name in
            store_names; other keys are ignored.

        Raises
        ------
        InvalidStateError
            If a stored quantity is missing from the state.
        """
        missing = [name for name in self._store_names if name not in state]
        if len(missing) > 0:
            raise InvalidStateError(
                'State is missing stored quantities {}'.format(
                    ', '.join(missing)))
        self._rows.append([float(state[name]) for name in self._store_names])

    def to_dataarray(self):
        values = np.array(self._rows, dtype=float).reshape(
            len(self._rows), len(self._store_names))
        return xr.DataArray(
            values, dims=('draw', 'parameter'),
            coords={'draw': np.arange(values.shape[0]),
                    'parameter': list(self._store_names)},
            name='draws')

    def write(self, filename):
        """Writes the draws as CSV, one column per quantity."""
        write_draws_csv(self.to_dataarray(), filename)


def write_draws_csv(draws, filename):
    frame = draws.to_pandas()
    frame.columns.name = None
    frame.to_csv(filename, index_label='draw')


def read_draws_csv(filename):
    """
    Reads a raw-draw CSV written by DrawMonitor.

    Returns
    -------
    draws : xarray.DataArray
        Dimensions (draw, parameter).

    Raises
    ------
    InvalidDataError
        If the file cannot be read, is empty or holds non-numeric draws.
    """
    try:
        frame = pd.read_csv(filename)
    except (IOError, OSError, pd.errors.EmptyDataError,
            pd.errors.ParserError) as error:
        raise InvalidDataError(
            'Cannot read draw file {}: {}'.format(filename, error))
    if 'draw' in frame.columns:
        frame = frame.drop(columns='draw')
    if frame.shape[0] == 0 or frame.shape[1] == 0:
        raise InvalidDataError('Draw file {} holds no draws'.format(filename))
    try:
        values = frame.apply(pd.to_numeric, errors='raise').to_numpy(dtype=float)
    except (ValueError, TypeError):
        raise InvalidDataError(
            'Draw file {} contains non-numeric values'.format(filename))
    return xr.DataArray(
        values, dims=('draw', 'parameter'),
        coords={'draw': np.arange(values.shape[0]),
                'parameter': [str(name) for name in frame.columns]},
        name='draws')


class CheckpointMonitor(Monitor):
    """
    A Monitor which keeps the records of one simulation condition in a JSON
    file, replaced atomically on every store, and can load them back to
    resume an interrupted run.
    """

    def __init__(self, filename):
        self._filename = filename

    @property
    def filename(self):
        return self._filename

    def exists(self):
        return os.path.isfile(self._filename)

    def store(self, state):
        """
        Writes the state to the checkpoint file, replacing any existing
        checkpoint data.

        Args
        ----
        state : dict
            A JSON-serializable dictionary.
        """
        new_filename = self._filename + '.new'
        with open(new_filename, 'w') as f:
            json.dump(state, f, sort_keys=True)
        os.replace(new_filename, self._filename)

    def load(self):
        """
        Loads the state from the checkpoint file.

        Returns
        -------
        state : dict
            The stored dictionary, or None if there is no checkpoint.
        """
        if not self.exists():
            return None
        with open(self._filename, 'r') as f:
            return json.load(f)
