"""Exception types shared across the package."""


class RegpartError(Exception):
    pass


class TableRangeError(RegpartError, IndexError):
    """An index fell outside the built range of a partition table."""


class ArithmeticConsistencyError(RegpartError, ArithmeticError):
    """An exactness invariant failed; this always indicates a bug."""


class CacheError(RegpartError):
    pass


class CacheMismatchError(CacheError):
    """The cache file is well formed but holds a different table."""


class CacheCorruptError(CacheError):
    """The cache file cannot be parsed."""


class PrecisionExhaustedError(RegpartError, ArithmeticError):
    """A sign could not be certified within the precision cap."""


class CampaignAborted(RegpartError):
    """A campaign hit its resource limit; ``partial`` holds finished work."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
