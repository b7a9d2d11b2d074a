"""Exception types shared across the package."""

from __future__ import annotations


class MvnError(Exception):
    """Base class for errors raised by this package."""


class ParseError(MvnError):
    """A model or mapping file could not be parsed.

    Every parse error carries the 1-based line number it was detected on.
    """

    def __init__(self, line: int, message: str, source: str | None = None):
        prefix = f"{source}:{line}" if source else f"line {line}"
        super().__init__(f"{prefix}: {message}")
        self.line = line
        self.message = message
        self.source = source


class GuardExceeded(MvnError):
    """A resource guard refused an operation that would enumerate too much.

    Guards never truncate silently; callers may retry with a higher limit.
    """

    def __init__(self, what: str, actual: int, limit: int):
        super().__init__(f"{what}: {actual} exceeds the limit of {limit}")
        self.what = what
        self.actual = actual
        self.limit = limit
