from .base_components import GibbsBlock
from .exceptions import InvalidStateError


def ensure_components_have_class(components, component_class):
    for component in components:
        if not isinstance(component, component_class):
            raise TypeError(
                'Component should be of type {} but is type {}'.format(
                    component_class, type(component)))


class GibbsSweep(object):
    """
    A sequence of Gibbs blocks called in order as one sweep.

    Each block draws from its own random stream, so adding or removing a
    block leaves the draws of the other blocks unchanged for a given seed.

    Attributes
    ----------
    component_list : tuple of GibbsBlock
        The blocks, in update order.
    """

    component_class = GibbsBlock

    def __str__(self):
        return '{}(\n{}\n)'.format(
            self.__class__,
            ',\n'.join(str(component) for component in self.component_list))

    def __repr__(self):
        return '{}(\n{}\n)'.format(
            self.__class__,
            ',\n'.join(repr(component) for component in self.component_list))

    def __init__(self, *args):
        """
        Args
        ----
        *args : GibbsBlock
            The blocks that should be called by this object, in order.

        Raises
        ------
        TypeError
            If an argument is not a GibbsBlock.
        InvalidStateError
            If two blocks declare the same output quantity.
        """
        ensure_components_have_class(args, self.component_class)
        seen = set()
        for component in args:
            shared = seen.intersection(component.output_names)
            if len(shared) > 0:
                raise InvalidStateError(
                    'Quantities {} are updated by more than one block'.format(
                        ', '.join(sorted(shared))))
            seen.update(component.output_names)
        self.component_list = args

    @property
    def input_names(self):
        names = []
        for component in self.component_list:
            for name in component.input_names:
                if name not in names:
                    names.append(name)
        return tuple(names)

    @property
    def output_names(self):
        return tuple(
            name for component in self.component_list
            for name in component.output_names)

    def __call__(self, state, context, rngs):
        """
        Runs one sweep.

        Args
        ----
        state : dict
            The sampler state.
        context : SamplerContext
            Data, model and priors held fixed during sampling.
        rngs : dict
            Block name to numpy Generator.

        Returns
        -------
        new_state : dict
            The state after every block has been updated once.
        """
        for component in self.component_list:
            state = component(state, context, rngs[component.name])
        return state
