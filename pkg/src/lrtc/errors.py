"""Exception types shared across the package."""


class CompletionError(Exception):
    """Base class for every error this package raises on purpose."""


class DimensionError(CompletionError):
    """Shapes, modes, or dimensions are inconsistent."""


class ConfigError(CompletionError):
    """A parameter value is outside its legal range."""


class InvalidInputError(CompletionError):
    """Numerical input contains non-finite values where finite ones are required."""


class ParseError(CompletionError):
    """An input file is malformed; the message names the offending location."""


class DegenerateProblemError(CompletionError):
    """The problem instance is vacuous: nothing observed, or nothing to score."""
