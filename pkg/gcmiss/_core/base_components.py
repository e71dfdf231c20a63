import abc
from six import add_metaclass
from .model import FitResult, ParameterSet, LongitudinalDataset
from .exceptions import (
    DimensionMismatchError, InvalidStateError, ComponentMissingOutputError,
    ComponentExtraOutputError)


class OutputChecker(object):

    def __init__(self, component, attribute):
        self.component = component
        self.attribute = attribute
        if not isinstance(getattr(component, attribute, None), tuple):
            raise TypeError(
                'Component of type {} must define {} as a tuple of names'.format(
                    component.__class__.__name__, attribute))

    def check_outputs(self, output_dict):
        wanted = set(getattr(self.component, self.attribute))
        missing = wanted.difference(output_dict.keys())
        if len(missing) > 0:
            raise ComponentMissingOutputError(
                'Component {} did not compute output(s) {}'.format(
                    self.component.__class__.__name__,
                    ', '.join(sorted(missing))))
        extra = set(output_dict.keys()).difference(wanted)
        if len(extra) > 0:
            raise ComponentExtraOutputError(
                'Component {} computed output(s) {} which are not in {}'.format(
                    self.component.__class__.__name__,
                    ', '.join(sorted(extra)), self.attribute))


@add_metaclass(abc.ABCMeta)
class Estimator(object):
    """
    Fits a growth curve model to one dataset.

    Subclasses implement array_call, which receives the raw outcome matrix
    and mask and returns a dict with exactly the keys in output_names.

    Attributes
    ----------
    spec : GrowthModelSpec
        The model being fit.
    method : str
        Tag written into every FitResult.
    output_names : tuple of str
        Keys returned by array_call.
    """

    output_names = (
        'beta', 'psi', 'sigma2_e', 'uncertainty', 'converged', 'diagnostics',
        'extras')

    @abc.abstractproperty
    def method(self):
        return ''

    def __str__(self):
        return 'instance of {}(Estimator) for {}'.format(
            self.__class__, self.spec)

    def __repr__(self):
        if hasattr(self, '_making_repr') and self._making_repr:
            return '{}(recursive reference)'.format(self.__class__)
        else:
            self._making_repr = True
            return_value = '{}({})'.format(
                self.__class__,
                '\n'.join('{}: {}'.format(repr(key), repr(value))
                          for key, value in self.__dict__.items()
                          if key != '_making_repr'))
            self._making_repr = False
            return return_value

    def __init__(self, spec):
        self.spec = spec
        self._output_checker = OutputChecker(self, 'output_names')
        self.__initialized = True

    def _check_self_is_initialized(self):
        try:
            initialized = self.__initialized
        except AttributeError:
            initialized = False
        if not initialized:
            raise RuntimeError(
                'Estimator has not called __init__ of base class, likely '
                'because its class {} is missing a call to '
                'super({}, self).__init__(spec) in its __init__ '
                'method.'.format(
                    self.__class__.__name__, self.__class__.__name__)
            )

    def __call__(self, data):
        """
        Fits the model to the given dataset.

        Args
        ----
        data : LongitudinalDataset
            The outcomes to fit.

        Returns
        -------
        result : FitResult
            Estimates, uncertainty and diagnostics. Non-convergence is
            flagged on the result rather than raised.

        Raises
        ------
        DimensionMismatchError
            If the dataset has a different number of occasions than the model.
        """
        self._check_self_is_initialized()
        if not isinstance(data, LongitudinalDataset):
            raise TypeError(
                'data must be a LongitudinalDataset, got {}'.format(type(data)))
        if data.T != self.spec.T:
            raise DimensionMismatchError(
                'Model has {} occasions but data has {}'.format(
                    self.spec.T, data.T))
        raw = self.array_call(data.values, data.mask)
        self._output_checker.check_outputs(raw)
        estimates = ParameterSet(
            raw['beta'], raw['psi'], raw['sigma2_e'], check=False)
        return FitResult(
            self.method, estimates, uncertainty=raw['uncertainty'],
            converged=raw['converged'], diagnostics=raw['diagnostics'],
            extras=raw['extras'])

    @abc.abstractmethod
    def array_call(self, values, mask):
        """
        Fits the model to raw arrays.

        Args
        ----
        values : ndarray
            N x T outcomes, zero in masked cells.
        mask : ndarray
            N x T booleans, True where observed.

        Returns
        -------
        output : dict
            A dict with the keys in output_names.
        """
        pass


@add_metaclass(abc.ABCMeta)
class GibbsBlock(object):
    """
    One update of a Gibbs sweep.

    A block reads the quantities in input_names from the sampler state and
    returns new values for exactly the quantities in output_names.

    Attributes
    ----------
    input_names : tuple of str
        State quantities read by the block.
    output_names : tuple of str
        State quantities replaced by the block.
    name : str
        A label for the block.
    """

    @abc.abstractproperty
    def input_names(self):
        return ()

    @abc.abstractproperty
    def output_names(self):
        return ()

    def __init__(self, name=None):
        self.name = name or self.__class__.__name__
        self._output_checker = OutputChecker(self, 'output_names')

    def __str__(self):
        return 'instance of {}(GibbsBlock)\n    inputs: {}\n    outputs: {}'.format(
            self.__class__, self.input_names, self.output_names)

    def __call__(self, state, context, rng):
        """
        Draws the block's quantities from their full conditional.

        Args
        ----
        state : dict
            The sampler state.
        context : SamplerContext
            Data, model and priors held fixed during sampling.
        rng : numpy.random.Generator
            The random stream of this block.

        Returns
        -------
        new_state : dict
            A copy of state with this block's outputs replaced.

        Raises
        ------
        InvalidStateError
            If a required quantity is missing from the state.
        """
        for key in self.input_names:
            if key not in state:
                raise InvalidStateError(
                    'Missing input quantity {} for {}'.format(key, self.name))
        outputs = self.array_call(state, context, rng)
        self._output_checker.check_outputs(outputs)
        new_state = state.copy()
        new_state.update(outputs)
        return new_state

    @abc.abstractmethod
    def array_call(self, state, context, rng):
        """
        Returns a dict mapping each name in output_names to its new value.
        """
        pass


@add_metaclass(abc.ABCMeta)
class Monitor(object):

    def __str__(self):
        return 'instance of {}(Monitor)'.format(self.__class__)

    def __repr__(self):
        if hasattr(self, '_making_repr') and self._making_repr:
            return '{}(recursive reference)'.format(self.__class__)
        else:
            self._making_repr = True
            return_value = '{}({})'.format(
                self.__class__,
                '\n'.join('{}: {}'.format(repr(key), repr(value))
                          for key, value in self.__dict__.items()
                          if key != '_making_repr'))
            self._making_repr = False
            return return_value

    @abc.abstractmethod
    def store(self, state):
        """
        Stores the given state in the Monitor and performs class-specific
        actions.

        Args
        ----
        state: dict
            A state dictionary.
        """
