class InvalidDataError(ValueError):
    pass


class DimensionMismatchError(ValueError):
    pass


class NonPositiveDefiniteError(ValueError):
    pass


class ConstantChainError(ValueError):
    pass


class InvalidConfigError(ValueError):
    pass


class InvalidStateError(Exception):
    pass


class ComponentMissingOutputError(Exception):
    pass


class ComponentExtraOutputError(Exception):
    pass


class ConvergenceWarning(UserWarning):
    pass


class BoundaryEstimateWarning(UserWarning):
    pass


class DroppedSubjectWarning(UserWarning):
    pass
