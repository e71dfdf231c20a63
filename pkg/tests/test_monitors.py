import pytest
import os
import numpy as np
from gcmiss import (
    DrawMonitor, CheckpointMonitor, write_draws_csv, read_draws_csv,
    InvalidStateError, InvalidDataError)

random = np.random.RandomState(0)

states = [
    {'beta_L': value, 'beta_S': 2 * value, 'unused': 'ignored'}
    for value in random.randn(10)]


def test_draw_monitor_initializes_empty():
    monitor = DrawMonitor(['beta_L', 'beta_S'])
    assert len(monitor) == 0
    assert monitor.to_dataarray().shape == (0, 2)


def test_draw_monitor_rejects_non_string_names():
    with pytest.raises(TypeError):
        DrawMonitor(['beta_L', 5])


def test_draw_monitor_stores_states():
    monitor = DrawMonitor(['beta_L', 'beta_S'])
    for state in states:
        monitor.store(state)
    assert len(monitor) == 10
    draws = monitor.to_dataarray()
    assert draws.dims == ('draw', 'parameter')
    assert list(draws['parameter'].values) == ['beta_L', 'beta_S']
    assert np.all(draws.sel(parameter='beta_S').values ==
                  [state['beta_S'] for state in states])


def test_draw_monitor_requires_stored_quantities():
    monitor = DrawMonitor(['beta_L', 'sigma'])
    with pytest.raises(InvalidStateError) as excinfo:
        monitor.store(states[0])
    assert 'sigma' in str(excinfo.value)


def test_draw_file_round_trip(tmpdir):
    filename = str(tmpdir.join('draws.csv'))
    monitor = DrawMonitor(['beta_L', 'beta_S'])
    for state in states:
        monitor.store(state)
    monitor.write(filename)
    loaded = read_draws_csv(filename)
    assert list(loaded['parameter'].values) == ['beta_L', 'beta_S']
    assert np.allclose(loaded.values, monitor.to_dataarray().values)


def test_read_draws_without_index_column(tmpdir):
    filename = str(tmpdir.join('draws.csv'))
    with open(filename, 'w') as f:
        f.write('a,b\n1,2\n3,4\n')
    loaded = read_draws_csv(filename)
    assert loaded.shape == (2, 2)
    assert np.all(loaded.sel(parameter='b').values == [2., 4.])


def test_read_missing_draw_file(tmpdir):
    with pytest.raises(InvalidDataError):
        read_draws_csv(str(tmpdir.join('absent.csv')))


def test_read_empty_draw_file(tmpdir):
    filename = str(tmpdir.join('draws.csv'))
    open(filename, 'w').close()
    with pytest.raises(InvalidDataError):
        read_draws_csv(filename)


def test_read_header_only_draw_file(tmpdir):
    filename = str(tmpdir.join('draws.csv'))
    with open(filename, 'w') as f:
        f.write('draw,a\n')
    with pytest.raises(InvalidDataError):
        read_draws_csv(filename)


def test_read_non_numeric_draw_file(tmpdir):
    filename = str(tmpdir.join('draws.csv'))
    with open(filename, 'w') as f:
        f.write('a\n1\nx\n')
    with pytest.raises(InvalidDataError):
        read_draws_csv(filename)


def test_write_draws_csv_has_draw_index(tmpdir):
    filename = str(tmpdir.join('draws.csv'))
    monitor = DrawMonitor(['beta_L'])
    monitor.store(states[0])
    write_draws_csv(monitor.to_dataarray(), filename)
    with open(filename) as f:
        assert f.readline().strip() == 'draw,beta_L'


def test_checkpoint_monitor_initializes(tmpdir):
    filename = str(tmpdir.join('checkpoint.json'))
    monitor = CheckpointMonitor(filename)
    assert not os.path.isfile(filename)  # should not create file on init
    assert not monitor.exists()
    assert monitor.load() is None


def test_checkpoint_monitor_stores_state(tmpdir):
    filename = str(tmpdir.join('checkpoint.json'))
    state = {'condition': 'n100-MAR-mr05-normal', 'records': [{'rep': 0}]}
    monitor = CheckpointMonitor(filename)
    monitor.store(state)
    assert os.path.isfile(filename)
    assert not os.path.isfile(filename + '.new')
    assert CheckpointMonitor(filename).load() == state


def test_checkpoint_monitor_replaces_state(tmpdir):
    filename = str(tmpdir.join('checkpoint.json'))
    monitor = CheckpointMonitor(filename)
    monitor.store({'records': [1]})
    monitor.store({'records': [1, 2]})
    assert monitor.load() == {'records': [1, 2]}


def test_checkpoint_ignores_leftover_partial_write(tmpdir):
    filename = str(tmpdir.join('checkpoint.json'))
    monitor = CheckpointMonitor(filename)
    monitor.store({'records': [1]})
    with open(filename + '.new', 'w') as f:
        f.write('{"records": [1, ')
    assert monitor.load() == {'records': [1]}
    monitor.store({'records': [1, 2]})
    assert monitor.load() == {'records': [1, 2]}


if __name__ == '__main__':
    pytest.main([__file__])
