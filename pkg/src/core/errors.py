"""Exception hierarchy for kosweep."""


class KOSweepError(Exception):
    """Base class for every error raised by the library."""

    kind = "error"


class DomainError(KOSweepError, ValueError):
    """An operation was called outside its hypotheses."""

    kind = "domain"


class CacheError(KOSweepError):
    """A cache file could not be read or has the wrong shape."""

    kind = "cache"
