"""Command reports, rendered as aligned text or JSON."""

import json
from dataclasses import dataclass
from typing import Any, Iterable, Optional

import numpy as np

from ..core.models import DealProfile, Game, MixedStrategy, StrategyProfile, ValuePair

DIGITS = 12


def fmt_number(x: float) -> str:
    """12 significant digits, no trailing zeros; -0 prints as 0."""
    text = f"{float(x):.{DIGITS}g}"
    return "0" if text == "-0" else text


def json_number(x: float) -> float:
    return float(fmt_number(x))


def fmt_pair(pair: Iterable[float]) -> str:
    a, b = pair
    return f"({fmt_number(a)}, {fmt_number(b)})"


def _strategy_items(game: Game, player: int, s: MixedStrategy) -> list[tuple[str, float]]:
    return [(game.label(player, i), float(s.probs[i])) for i in s.support()]


def fmt_strategy(game: Game, player: int, s: MixedStrategy) -> str:
    items = _strategy_items(game, player, s)
    if len(items) == 1:
        return items[0][0]
    return " + ".join(f"{fmt_number(p)}*{label}" for label, p in items)


@dataclass
class _Entry:
    key: str
    text: str
    data: Any


class Report:
    """Ordered key/value report for one command."""

    def __init__(self, command: str):
        self.command = command
        self._entries: list[_Entry] = []

    def _add(self, key: str, text: str, data: Any) -> "Report":
        self._entries.append(_Entry(key, text, data))
        return self

    def number(self, key: str, value: float) -> "Report":
        return self._add(key, fmt_number(value), json_number(value))

    def pair(self, key: str, value: ValuePair | tuple[float, float]) -> "Report":
        a, b = value
        return self._add(key, fmt_pair((a, b)), [json_number(a), json_number(b)])

    def strategy(self, key: str, game: Game, player: int, s: MixedStrategy) -> "Report":
        data = {label: json_number(p) for label, p in _strategy_items(game, player, s)}
        return self._add(key, fmt_strategy(game, player, s), data)

    def profile(self, key: str, game: Game, s: StrategyProfile) -> "Report":
        text = f"{fmt_strategy(game, 1, s.s1)} ; {fmt_strategy(game, 2, s.s2)}"
        data = {
            "player1": {label: json_number(p) for label, p in _strategy_items(game, 1, s.s1)},
            "player2": {label: json_number(p) for label, p in _strategy_items(game, 2, s.s2)},
        }
        return self._add(key, text, data)

    def deal(self, key: str, game: Game, deal: DealProfile) -> "Report":
        i, j = deal.agreed_profile
        text = (
            f"play ({game.label(1, i)}, {game.label(2, j)}), player 1 pays {fmt_number(deal.transfer)}, "
            f"backups ({game.label(1, deal.backup1)}, {game.label(2, deal.backup2)})"
        )
        data = {
            "agreed_profile": [game.label(1, i), game.label(2, j)],
            "transfer": json_number(deal.transfer),
            "backup1": game.label(1, deal.backup1),
            "backup2": game.label(2, deal.backup2),
        }
        return self._add(key, text, data)

    def matrix(self, key: str, M: np.ndarray, labels: Optional[tuple[tuple[str, ...], tuple[str, ...]]] = None) -> "Report":
        cells = [[fmt_number(v) for v in row] for row in M]
        if labels is not None:
            cells = [["", *labels[1]]] + [[labels[0][i], *row] for i, row in enumerate(cells)]
        width = max(len(c) for row in cells for c in row)
        lines = ["  " + " ".join(c.rjust(width) for c in row) for row in cells]
        return self._add(key, "\n" + "\n".join(lines), [[json_number(v) for v in row] for row in M])

    def text(self, key: str, value: str) -> "Report":
        return self._add(key, value, value)

    def flag(self, key: str, value: bool) -> "Report":
        return self._add(key, "yes" if value else "no", bool(value))

    def as_dict(self) -> dict[str, Any]:
        return {"command": self.command, **{e.key: e.data for e in self._entries}}

    def render(self, fmt: str = "text") -> str:
        if fmt == "json":
            return json.dumps(self.as_dict(), ensure_ascii=False, indent=2)
        return "\n".join(f"{e.key}: {e.text}" for e in self._entries)
