"""Exception types. All derive from ValueError so callers can catch broadly."""


class FibGeomError(ValueError):
    """Base class for validation failures raised by this package."""


class DomainError(FibGeomError):
    """An argument lies outside the operation's domain."""


class PrecisionError(FibGeomError):
    """The requested value cannot be represented honestly in double precision."""


class SizeError(FibGeomError):
    """The request would exceed a documented size cap."""


class RankError(FibGeomError):
    """Input data is too degenerate to determine a fit."""


class InvariantError(FibGeomError):
    """A structure violates one of its documented invariants."""


class ValidationError(FibGeomError):
    """A system description failed validation (e.g. a non-contractive map)."""
