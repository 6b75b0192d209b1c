"""Canonical example games."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Mapping, Optional

import numpy as np

from .errors import GeneratorParamError, UnknownGeneratorError
from .models import Game


def prisoners() -> Game:
    labels = ("Cooperate", "Defect")
    return Game([[3, 0], [5, 1]], [[3, 5], [0, 1]], (labels, labels))


def travelers(lo: int = 2, hi: int = 100, bonus: int = 2) -> Game:
    """Both ask for lo..hi; the lower ask wins bonus, the higher asker pays it."""
    if lo >= hi:
        raise GeneratorParamError(f"travelers needs lo < hi, got lo={lo}, hi={hi}")
    if bonus < 0:
        raise GeneratorParamError(f"travelers needs bonus >= 0, got {bonus}")
    asks = np.arange(lo, hi + 1, dtype=float)
    row = asks[:, None]
    col = asks[None, :]
    low = np.minimum(row, col)
    a = np.where(row < col, low + bonus, np.where(row > col, low - bonus, low))
    b = np.where(col < row, low + bonus, np.where(col > row, low - bonus, low))
    labels = tuple(str(int(v)) for v in asks)
    return Game(a, b, (labels, labels))


def bargaining(total: int = 100, step: int = 1) -> Game:
    """Each player asks for a share; both get their ask if the asks fit in total, else 0."""
    if total < 0:
        raise GeneratorParamError(f"bargaining needs total >= 0, got {total}")
    if step < 1 or total % step:
        raise GeneratorParamError(f"bargaining step must be >= 1 and divide total, got {step}")
    asks = np.arange(0, total + 1, step, dtype=float)
    fits = asks[:, None] + asks[None, :] <= total
    a = np.where(fits, asks[:, None], 0.0)
    b = np.where(fits, asks[None, :], 0.0)
    labels = tuple(str(int(v)) for v in asks)
    return Game(a, b, (labels, labels))


def coordination(k1: float = 2.0, k2: float = 0.5) -> Game:
    labels = ("a", "b")
    return Game([[k1, 0], [0, 1]], [[k2, 0], [0, 1]], (labels, labels))


def _centipede_payoff(t: int) -> tuple[float, float]:
    if t % 2:
        return 2.0**t + 1, 2.0 ** (t - 1)
    return 2.0 ** (t - 1), 2.0**t + 1


def centipede(T: int = 20) -> Game:
    """Reduced normal form: each player picks the turn to quit at, or C to never quit.

    Player 1 moves on odd turns, player 2 on even turns; the game ends after turn T either
    way, so q2,T and q2,C are outcome-equivalent.
    """
    if T < 2 or T % 2:
        raise GeneratorParamError(f"centipede needs an even horizon T >= 2, got {T}")
    quits1 = list(range(1, T, 2)) + [T]
    quits2 = list(range(2, T + 1, 2)) + [T]
    a = np.empty((len(quits1), len(quits2)))
    b = np.empty_like(a)
    for i, t1 in enumerate(quits1):
        for j, t2 in enumerate(quits2):
            a[i, j], b[i, j] = _centipede_payoff(min(t1, t2))
    labels1 = tuple(f"q1,{t}" for t in quits1[:-1]) + ("q1,C",)
    labels2 = tuple(f"q2,{t}" for t in quits2[:-1]) + ("q2,C",)
    return Game(a, b, (labels1, labels2))


def xam1() -> Game:
    return Game([[3, 1]], [[2, 0]], (("c",), ("a", "b")))


@dataclass(frozen=True)
class Generator:
    build: Callable[..., Game]
    params: Mapping[str, type]
    description: str


GENERATORS: dict[str, Generator] = {
    "prisoners": Generator(prisoners, {}, "Prisoner's Dilemma"),
    "travelers": Generator(travelers, {"lo": int, "hi": int, "bonus": int}, "Traveler's Dilemma"),
    "bargaining": Generator(bargaining, {"total": int, "step": int}, "Nash bargaining over asks"),
    "coordination": Generator(coordination, {"k1": float, "k2": float}, "2x2 coordination game"),
    "centipede": Generator(centipede, {"T": int}, "Centipede game, reduced normal form"),
    "xam1": Generator(xam1, {}, "1x2 side-payment example"),
}


def _coerce(name: str, key: str, kind: type, value: Any) -> Any:
    try:
        if kind is int:
            if isinstance(value, str):
                return int(value.strip())
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(value)
            return int(value)
        return float(Fraction(value.strip())) if isinstance(value, str) else float(value)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise GeneratorParamError(f"{name}: parameter {key}={value!r} is not a valid {kind.__name__}") from e


def generate(name: str, params: Optional[Mapping[str, Any]] = None) -> Game:
    gen = GENERATORS.get(name)
    if gen is None:
        known = ", ".join(sorted(GENERATORS))
        raise UnknownGeneratorError(f"Unknown game generator: {name} (known: {known})")
    kwargs = {}
    for key, value in (params or {}).items():
        if key not in gen.params:
            raise GeneratorParamError(f"{name} has no parameter {key!r}")
        kwargs[key] = _coerce(name, key, gen.params[key], value)
    return gen.build(**kwargs)
