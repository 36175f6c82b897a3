"""Exception types shared across the package.

The command line maps these onto process exit codes: parse failures
exit 1, validation failures exit 2, resource-guard trips exit 3 and
internal cross-check violations exit 4.
"""


class LocglobError(Exception):
    """Base class for every error raised by this package."""


class ParseError(LocglobError):
    """An input document is structurally malformed."""


class ValidationError(LocglobError):
    """A value violates a domain invariant or an operation precondition."""


class MissingIdentityError(ValidationError):
    """An object has no identity arrow, or the mapped arrow is not a loop
    at that object."""


class EndpointMismatchError(ValidationError):
    """A composition table entry disagrees with the arrow endpoints."""


class InverseLawError(ValidationError):
    """The inverse assignment fails a.inv(a) = id or inv(a).a = id."""


class AssociativityError(ValidationError):
    """A composable triple violates associativity. The offending triple
    is kept on the exception."""

    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class AtlasCoverError(ValidationError):
    """Atlas charts do not cover the space."""


class AtlasConsistencyError(ValidationError):
    """Two charts induce different germs at a shared point."""

    def __init__(self, message, point=None, charts=None):
        super().__init__(message)
        self.point = point
        self.charts = charts


class ResourceLimitError(LocglobError):
    """An enumeration guard tripped. Raise the bound explicitly to
    proceed; nothing is ever skipped silently."""


class InvariantViolationError(LocglobError):
    """Two independent computations of the same value disagreed."""
