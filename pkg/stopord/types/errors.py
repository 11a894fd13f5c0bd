"""Exception hierarchy for stopord.

Every error derives from :class:`StopordError` and from the builtin a caller
would naturally catch, so ``except ValueError`` keeps working for bad input.
"""


class StopordError(Exception):
    """Base class for all stopord errors."""


class ConstructionError(StopordError, ValueError):
    """Invalid parameters for a distribution or instance."""


class UndefinedConditionalError(StopordError, ValueError):
    """A conditional expectation was requested on a null event."""


class UnsupportedDistributionError(StopordError, TypeError):
    """The operation does not support the given distribution variant."""


class InstanceShapeError(StopordError, ValueError):
    """The instance does not have the support shape the solver requires."""


class SizeLimitError(StopordError, ValueError):
    """The instance is too large for an exhaustive method."""


class PreconditionError(StopordError, ValueError):
    """An operation precondition does not hold."""


class NotNestedError(StopordError, ValueError):
    """Uniform supports cannot be arranged into a nested chain."""


class DeadlineExceeded(StopordError, TimeoutError):
    """The request deadline passed during a long computation."""


class InvariantViolation(StopordError, RuntimeError):
    """A runtime self-check on a computed result failed."""
