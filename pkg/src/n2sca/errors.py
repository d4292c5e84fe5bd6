"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for engine errors."""


class TruncationError(EngineError):
    """An exact computation left the explicit truncation window.

    Raised instead of silently returning a clipped value; callers that
    tolerate boundary effects catch this and report inconclusiveness.
    """


class ValidationError(EngineError):
    """A module description violates a structural requirement."""


class ParseError(ValueError):
    """Malformed text input (scalars, generators, vectors, configs)."""
