"""JSON game documents.

    {
      "players": 2,
      "actions": [["Cooperate", "Defect"], ["Cooperate", "Defect"]],
      "payoffs": [[[3, 3], [0, 5]],
                  [[5, 0], [1, 1]]]
    }

Payoffs are JSON numbers or strings holding a decimal or a rational "p/q".
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Union

from pydantic import (
    BaseModel,
    ConfigDict,
    StrictFloat,
    StrictInt,
    StrictStr,
    ValidationError,
    field_validator,
    model_validator,
)

from .errors import GameFormatError
from .models import Game

logger = logging.getLogger(__name__)

Number = Union[StrictInt, StrictFloat, StrictStr]


def parse_number(value: Number) -> float:
    """JSON number, decimal string or "p/q" to the nearest double."""
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except ZeroDivisionError as e:
            raise ValueError(f"zero denominator in {value!r}") from e
        except ValueError as e:
            raise ValueError(f"not a number: {value!r}") from e
    return float(value)


class GameDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    players: StrictInt
    actions: tuple[list[StrictStr], list[StrictStr]]
    payoffs: list[list[tuple[Number, Number]]]

    @field_validator("players")
    @classmethod
    def _two_players(cls, v: int) -> int:
        if v != 2:
            raise ValueError(f"unsupported player count {v}; only 2-player games are supported")
        return v

    @field_validator("payoffs")
    @classmethod
    def _numbers(cls, rows):
        for i, row in enumerate(rows):
            for j, cell in enumerate(row):
                for p, value in enumerate(cell):
                    try:
                        parse_number(value)
                    except ValueError as e:
                        raise ValueError(f"cell [{i}][{j}] player {p + 1}: {e}") from e
        return rows

    @model_validator(mode="after")
    def _dimensions(self) -> "GameDocument":
        n, m = len(self.actions[0]), len(self.actions[1])
        if n < 1 or m < 1:
            raise ValueError("each player needs at least one action")
        if len(self.payoffs) != n:
            raise ValueError(f"payoffs have {len(self.payoffs)} rows, expected {n}")
        for i, row in enumerate(self.payoffs):
            if len(row) != m:
                raise ValueError(f"ragged payoff matrix: row {i} has {len(row)} cells, expected {m}")
        return self

    def to_game(self) -> Game:
        a = [[parse_number(cell[0]) for cell in row] for row in self.payoffs]
        b = [[parse_number(cell[1]) for cell in row] for row in self.payoffs]
        return Game(a, b, (tuple(self.actions[0]), tuple(self.actions[1])))

    @classmethod
    def from_game(cls, g: Game) -> "GameDocument":
        payoffs = [
            [(float(g.payoff1[i, j]), float(g.payoff2[i, j])) for j in range(g.m)]
            for i in range(g.n)
        ]
        return cls(players=2, actions=(list(g.labels(1)), list(g.labels(2))), payoffs=payoffs)


def _format_error(e: ValidationError) -> GameFormatError:
    errors = e.errors()
    parts = []
    for err in errors:
        loc = ".".join(str(x) for x in err["loc"])
        parts.append(f"{loc}: {err['msg']}" if loc else err["msg"])
    field = ".".join(str(x) for x in errors[0]["loc"]) or None
    return GameFormatError("; ".join(parts), field=field)


def parse_game(text: str) -> Game:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise GameFormatError(f"{e.msg} (column {e.colno})", line=e.lineno) from e
    try:
        doc = GameDocument.model_validate(raw)
    except ValidationError as e:
        raise _format_error(e) from e
    return doc.to_game()


def serialize_game(g: Game) -> str:
    doc = GameDocument.from_game(g).model_dump(mode="json")
    rows = ",\n    ".join(json.dumps(row) for row in doc["payoffs"])
    return (
        "{\n"
        f'  "players": 2,\n'
        f'  "actions": {json.dumps(doc["actions"])},\n'
        f'  "payoffs": [\n    {rows}\n  ]\n'
        "}\n"
    )


def load_game(path: Union[str, Path]) -> Game:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise GameFormatError(f"cannot read {path}: {e}") from e
    logger.debug("Loaded game document %s", path)
    return parse_game(text)


def save_game(g: Game, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(serialize_game(g), encoding="utf-8")
    return path
