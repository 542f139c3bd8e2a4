"""Exception types shared across the toolkit."""


class EmomapError(Exception):
    """Base class for every error raised by this package."""


class DataError(EmomapError):
    """Invalid or inconsistent input data."""


class FormatMismatchError(DataError):
    """Two emotion formats that were expected to line up do not."""


class DegenerateStatisticsError(EmomapError):
    """A statistic is undefined for the given input (e.g. zero variance)."""


class ParseError(DataError):
    """Malformed lexicon file; carries the 1-based line number when known."""

    def __init__(self, message: str, line: "int | None" = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedRowError(ParseError):
    """Row with the wrong column count or forbidden characters."""


class NonNumericRatingError(ParseError):
    """Rating cell that is not a plain finite decimal number."""


class OutOfRangeError(ParseError):
    """Rating outside the declared scale bounds (strict mode)."""


class DuplicateWordError(ParseError):
    """The same word occurs twice in one lexicon (strict mode)."""


class HeaderMismatchError(ParseError):
    """Header dimensions do not match the expected format descriptor."""


class NormalizationCollisionError(DataError):
    """Word normalization mapped two distinct words onto the same key."""


class ModelFormatError(DataError):
    """Model file violates the documented schema."""


class ModelVersionError(ModelFormatError):
    """Model file carries an unsupported schema version."""
