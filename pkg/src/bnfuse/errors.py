"""Exception types shared across the package."""


class BnfuseError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BnfuseError):
    """An operation precondition was violated (unknown vertex, cyclic input, ...)."""


class ScaleError(BnfuseError):
    """The instance exceeds a configured cap for exhaustive computation."""


class IllegalReversalError(DomainError):
    """Reversing the requested arc would create a directed cycle."""


class InfeasibleError(BnfuseError):
    """The problem instance admits no feasible solution."""
