"""Exception hierarchy shared by every module."""


class WittkitError(Exception):
    """Base class for library errors."""


class DomainError(WittkitError, ValueError):
    """An input lies outside the domain of an operation (zero entry, non-unit, ...)."""


class ParseError(WittkitError, ValueError):
    """A textual descriptor or literal could not be parsed."""


class FieldMismatchError(WittkitError, ValueError):
    """Two operands live over different fields."""


class UnsupportedError(WittkitError, NotImplementedError):
    """The operation exists but is not implemented for this field or place."""


class InternalError(WittkitError, RuntimeError):
    """An internal guard (iteration bound, consistency check) fired."""
