"""Exception types for CoopEq."""

from typing import Optional


class CoopEqError(Exception):
    """Base class for all CoopEq errors."""


class GameError(CoopEqError, ValueError):
    """Invalid game, strategy or profile."""


class DimensionError(GameError):
    """Profile or strategy size does not match the game."""


class GameFormatError(GameError):
    """Malformed game document."""

    def __init__(self, message: str, field: Optional[str] = None, line: Optional[int] = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class UnknownGeneratorError(GameError):
    """No generator registered under the requested name."""


class GeneratorParamError(GameError):
    """Generator parameters are missing or out of range."""


class SolverError(CoopEqError, RuntimeError):
    """Numerical solver failed (iteration limit, inconsistent results)."""


class ConfigError(CoopEqError):
    """Config file could not be read."""
