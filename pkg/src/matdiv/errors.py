"""Exception hierarchy shared by every matdiv module."""


class MatdivError(Exception):
    """Base class for all library errors."""


class DimensionError(MatdivError, ValueError):
    """Operands live in spaces of different dimension."""


class ConfigurationError(MatdivError, ValueError):
    """Unsupported family/rank/module combination."""


class DomainError(MatdivError, ValueError):
    """An input lies outside the domain of an operation (e.g. h not in the dual lattice)."""


class InsufficientPrecisionError(MatdivError, ArithmeticError):
    """A truncated series does not carry enough terms to decide the answer.

    ``needed`` is the number of extra terms the caller should supply, when known.
    """

    def __init__(self, message, needed=None):
        super().__init__(message)
        self.needed = needed


class IndeterminateError(InsufficientPrecisionError):
    """A predicate cannot be decided within the available precision."""


class UnsupportedFamilyError(ConfigurationError):
    """The requested operation is only implemented for some root-system families."""
