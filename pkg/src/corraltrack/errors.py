"""Shared exception types.

Everything raised on purpose by this package derives from ValueError or
RuntimeError so callers can stay coarse-grained; the CLI maps each class
to a stable machine-readable error code.
"""


class ParseError(ValueError):
    """A text input could not be parsed. Carries file and line context."""

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        loc = ""
        if path is not None:
            loc = f"{path}:" if line is None else f"{path}:{line}:"
        super().__init__(f"{loc} {message}".strip())
        self.path = path
        self.line = line


class StreamOrderError(ValueError):
    """Frame indices in a detection stream are not strictly increasing."""


class ConfigError(ValueError):
    """A configuration value violates its documented invariant."""


class NoAcceptedFramesError(RuntimeError):
    """A tracking run ended without a single gate-accepted frame."""
