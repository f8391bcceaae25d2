"""Typed exception hierarchy shared by every module in the toolkit.

All errors raised on purpose derive from ScenestatsError so callers (and
the CLI exit-code mapping) can distinguish toolkit failures from bugs.
"""


class ScenestatsError(Exception):
    """Base class for all toolkit errors."""


class ParseError(ScenestatsError):
    """Malformed input document (JSON, XML, RLE text, config file)."""

    def __init__(self, message: str, *, offset: int | None = None,
                 line: int | None = None, source: str | None = None):
        self.offset = offset
        self.line = line
        self.source = source
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if offset is not None:
            where.append(f"offset {offset}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ReferentialIntegrityError(ScenestatsError):
    """An annotation references an image or category id that does not exist."""


class DegenerateBoxError(ScenestatsError):
    """Bounding box with non-positive width or height."""


class DegeneratePolygonError(ScenestatsError):
    """Polygon ring with fewer than 3 vertices."""


class CorruptMaskError(ScenestatsError):
    """Run-length counts inconsistent with the declared mask size."""


class DimensionError(ScenestatsError):
    """Mismatched sizes: mask vs image frame, or vectors of unequal length."""


class DomainError(ScenestatsError):
    """Numeric argument outside its legal domain."""


class EmptyInputError(ScenestatsError):
    """An operation that needs at least one element received none."""


class DegenerateObjectError(ScenestatsError):
    """Object mask with zero visible pixels."""


class ResponseInvalidError(ScenestatsError):
    """Label response failed the identification-code check."""


class EmptyResponseError(ScenestatsError):
    """Label response contained no usable words after cleaning."""


class ConfigurationError(ScenestatsError):
    """Invalid or unusable configuration (taxonomy, thresholds, flags)."""


class InsufficientDataError(ScenestatsError):
    """Not enough data points / groups / bins for the requested statistic."""


class AlignmentError(ScenestatsError):
    """Paired inputs whose keys or orderings do not match."""


class GenerationError(ScenestatsError):
    """Synthetic corpus generation could not satisfy its constraints."""
