"""Exception taxonomy shared across the package.

CLI exit-code mapping: DomainError / ResourceError / cache errors exit 1,
InternalInvariantError exits 2 (it means the library itself misbehaved).
"""


class GmoatError(Exception):
    """Base class for all package errors."""


class DomainError(GmoatError, ValueError):
    """Input violates a documented precondition or the 2^63 numeric domain."""


class ResourceError(GmoatError, RuntimeError):
    """The requested work would exceed the configured memory budget."""


class InconclusiveRegionError(GmoatError, RuntimeError):
    """The sieved region is too small to answer a percolation question."""


class CacheFormatError(GmoatError, ValueError):
    """Segment cache file is structurally malformed (magic/version/layout)."""


class CacheIntegrityError(CacheFormatError):
    """Segment cache fails checksum, length, or record validation."""


class InternalInvariantError(GmoatError, AssertionError):
    """A construction invariant (disjointness/coverage/closure) broke: a bug."""
