"""Exception hierarchy for envlab.

Every error raised on a contract violation derives from EnvlabError so
callers can catch library failures without masking programming errors.
"""


class EnvlabError(Exception):
    """Base class for all envlab errors."""


class DimensionError(EnvlabError):
    """Vector/operator shape does not match the ambient space."""


class DomainError(EnvlabError):
    """Numeric argument outside its mathematical domain (e.g. p < 1)."""


class NotStrictlyConvexError(EnvlabError):
    """Operation requires a strictly convex norm; p in {1, inf} given."""


class ZeroSubspaceError(EnvlabError):
    """All generators vanish below tolerance."""


class FullSupportError(EnvlabError):
    """A divisor vector has a (numerically) zero coordinate."""


class NotIsometryError(EnvlabError):
    """A map or signed permutation fails to preserve the norm."""


class TooLargeError(EnvlabError):
    """Group enumeration/closure exceeds the configured cap."""


class HilbertCaseError(EnvlabError):
    """p = 2 requested where the (infinite) orthogonal group would be needed."""


class NotExtendableError(EnvlabError):
    """No global isometry agrees with the prescribed partial map."""


class NotContractionError(EnvlabError):
    """Operator is not certified contractive."""


class ConvergenceError(EnvlabError):
    """Iteration budget exhausted before reaching tolerance.

    Carries the partial report (if any) in the ``report`` attribute.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotProjectionError(EnvlabError):
    """Operator expected to be an idempotent projection is not."""


class NotAGroupError(EnvlabError):
    """Operator family is not closed under composition/inverse."""


class DegenerateRangeError(EnvlabError):
    """Projection search onto {0} or the whole space was requested."""


class ParseError(EnvlabError):
    """Malformed JSON input; message carries the offending location."""


class UsageError(EnvlabError):
    """Bad CLI usage (unknown suite, malformed grid spec, ...)."""
