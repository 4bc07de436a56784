"""Exception types shared across the package."""


class StateSchedError(Exception):
    """Base class for all package errors."""


class DomainError(StateSchedError, ValueError):
    """An argument lies outside the domain of the operation."""


class RepresentationError(StateSchedError, ArithmeticError):
    """A result cannot be expressed as an eventually-affine vector."""


class UnknownInputError(StateSchedError, KeyError):
    """A table-backed service was evaluated outside its stored domain."""


class CausalityError(StateSchedError, ValueError):
    """More departures than queued tasks (d > q)."""


class ImmediateGuaranteeError(StateSchedError, ValueError):
    """Fewer departures than the service demands this slot (d < p)."""


class PreconditionError(StateSchedError, ValueError):
    """An input fails a documented precondition (e.g. non-monotone service)."""


class InfeasibleError(StateSchedError, ValueError):
    """A requested schedule or service total is not feasible.

    ``witness`` carries whatever explains the failure: a violated subset,
    a valid interval, or a time window.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class InconsistentStateError(StateSchedError, RuntimeError):
    """An internal invariant that should follow from schedulability broke."""


class ResourceLimitError(StateSchedError, ValueError):
    """The requested computation exceeds the supported size."""
