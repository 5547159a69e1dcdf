"""Exception hierarchy shared by every pming module."""


class PmingError(Exception):
    """Base class for all errors raised by this package."""


# measures

class InvalidCounts(PmingError, ValueError):
    pass


class InvalidParams(PmingError, ValueError):
    pass


class UndefinedForZeroOccurrence(PmingError, ValueError):
    """A term has zero occurrences; PMI and the spread term have no value."""


class SingularDenominator(PmingError, ZeroDivisionError):
    """The rarer term matches every document, so log M - log f_min = 0."""


# providers

class ProviderError(PmingError):
    """Failure inside a count source."""


class DuplicateDocument(ProviderError, ValueError):
    pass


class EmptyCorpus(ProviderError, ValueError):
    pass


class ParseError(ProviderError, ValueError):
    """Malformed input file; ``location`` names the line or field."""

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class InvalidTable(ProviderError, ValueError):
    pass


class HttpError(ProviderError):
    def __init__(self, status, url=None):
        self.status = status
        self.url = url
        super().__init__(f"HTTP {status} from {url}" if url else f"HTTP {status}")


class CountParseError(ProviderError, ValueError):
    pass


class ProviderTimeout(ProviderError, TimeoutError):
    pass


# context / analysis

class ContextTooSmall(PmingError, ValueError):
    pass


class DegeneratePmiContext(PmingError, ValueError):
    pass


class OutOfContext(PmingError, LookupError):
    """Pair not in the context and no provider is attached to fetch it."""


class NoCandidates(PmingError, ValueError):
    pass


class PairError(PmingError):
    """Wraps a fetch or scoring failure with the pair that caused it."""

    def __init__(self, x, y, cause, source=None):
        self.x = x
        self.y = y
        self.cause = cause
        self.source = source
        where = f" from {source}" if source else ""
        super().__init__(f"pair ({x!r}, {y!r}){where}: {type(cause).__name__}: {cause}")


class InvalidTerm(PmingError, ValueError):
    """Term text contains no word tokens."""
