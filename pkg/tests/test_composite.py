import pytest
import mock
import numpy as np
from gcmiss import GibbsSweep, GibbsBlock, InvalidStateError
from gcmiss._core.util import named_streams


class MockEmptyBlock(GibbsBlock):

    input_names = ()
    output_names = ()

    def array_call(self, state, context, rng):
        return {}


class AddBlock(GibbsBlock):

    input_names = ('x',)
    output_names = ('x',)

    def array_call(self, state, context, rng):
        return {'x': state['x'] + rng.random()}


class CopyBlock(GibbsBlock):

    input_names = ('x',)
    output_names = ('y',)

    def array_call(self, state, context, rng):
        return {'y': state['x']}


def test_empty_sweep():
    sweep = GibbsSweep()
    state = {'x': 1.}
    assert sweep(state, None, {}) == {'x': 1.}


def test_sweep_rejects_non_blocks():
    with pytest.raises(TypeError):
        GibbsSweep(object())


def test_sweep_rejects_shared_outputs():
    with pytest.raises(InvalidStateError):
        GibbsSweep(AddBlock(name='a'), AddBlock(name='b'))


@mock.patch.object(MockEmptyBlock, '__call__')
def test_sweep_calls_one_block(mock_call):
    mock_call.return_value = {'x': 2.}
    sweep = GibbsSweep(MockEmptyBlock(name='m'))
    state = sweep({'x': 1.}, None, {'m': None})
    assert mock_call.called
    assert state == {'x': 2.}


@mock.patch.object(MockEmptyBlock, '__call__')
def test_sweep_calls_two_blocks_in_order(mock_call):
    mock_call.side_effect = [{'x': 2.}, {'x': 3.}]
    sweep = GibbsSweep(MockEmptyBlock(name='a'), MockEmptyBlock(name='b'))
    state = sweep({'x': 1.}, None, {'a': None, 'b': None})
    assert mock_call.call_count == 2
    assert mock_call.call_args_list[1][0][0] == {'x': 2.}
    assert state == {'x': 3.}


def test_sweep_passes_each_block_its_stream():
    rngs = named_streams(0, ('add', 'copy'))
    expected = named_streams(0, ('add', 'copy'))['add'].random()
    sweep = GibbsSweep(AddBlock(name='add'), CopyBlock(name='copy'))
    state = sweep({'x': 0.}, None, rngs)
    assert state['x'] == expected
    assert state['y'] == state['x']


def test_sweep_names():
    sweep = GibbsSweep(AddBlock(name='add'), CopyBlock(name='copy'))
    assert sweep.input_names == ('x',)
    assert sweep.output_names == ('x', 'y')


def test_streams_are_independent_of_other_blocks():
    alone = GibbsSweep(AddBlock(name='add'))
    together = GibbsSweep(AddBlock(name='add'), CopyBlock(name='copy'))
    first = alone({'x': 0.}, None, named_streams(3, ('add', 'copy')))
    second = together({'x': 0.}, None, named_streams(3, ('add', 'copy')))
    assert first['x'] == second['x']
    assert np.isfinite(first['x'])


if __name__ == '__main__':
    pytest.main([__file__])
