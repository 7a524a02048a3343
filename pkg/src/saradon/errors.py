"""Exception types raised by the library.

All of them derive from ``ValueError`` so callers that only care about
"bad input" can catch that.
"""


class SARadonError(ValueError):
    pass


class InvalidOrderError(SARadonError):
    pass


class InvalidProjectionError(SARadonError):
    pass


class DomainError(SARadonError):
    pass


class EmptyRegionError(SARadonError):
    pass


class InsufficientShiftSetError(SARadonError):
    pass


class UncertifiedProjectionError(SARadonError):
    pass


class DuplicateNodeError(SARadonError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


class NotPositiveDefiniteError(SARadonError):
    def __init__(self, msg, pivot=None):
        super().__init__(msg)
        self.pivot = pivot


class DegenerateSignalError(SARadonError):
    pass


class SingularSystemError(SARadonError):
    pass


class DeterminabilityError(SARadonError):
    def __init__(self, msg, rank=None):
        super().__init__(msg)
        self.rank = rank


class DegenerateReferenceError(SARadonError):
    pass


class ConfigError(SARadonError):
    pass


class ParseError(SARadonError):
    pass
