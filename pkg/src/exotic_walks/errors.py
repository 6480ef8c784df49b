"""Exception hierarchy shared by every module."""


class ExoticWalksError(Exception):
    """Base class for all toolkit errors."""


class InvalidParameter(ExoticWalksError, ValueError):
    pass


class InvalidAddress(InvalidParameter):
    pass


class InvalidRelativeWord(InvalidParameter):
    pass


class BandOverlap(InvalidParameter):
    """A band of the no-CLT schedule escapes its annulus (N_{s-1}, N_s]."""


class BudgetExceeded(ExoticWalksError):
    """A computation would exceed the configured step budget."""


class CapacityExceeded(BudgetExceeded):
    """An enumeration would exceed the configured element cap."""


class NoPreimage(ExoticWalksError):
    pass


class InvariantViolation(ExoticWalksError):
    """A verifier found a violated invariant (a defect, never a user error)."""
