"""Data models for CoopEq."""

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import DimensionError, GameError
from .settings import DEFAULT_TOLERANCE, SOLVER_SUM_TOLERANCE

Labels = tuple[tuple[str, ...], tuple[str, ...]]


def _frozen_matrix(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 2:
        raise GameError(f"{name} must be a 2-D matrix, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def normalize_probs(probs: Sequence[float] | np.ndarray, tol: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Clamp tiny negatives to 0 and renormalize. Larger violations are errors."""
    arr = np.array(probs, dtype=float).reshape(-1)
    if arr.size == 0:
        raise GameError("Strategy must have at least one action")
    if not np.isfinite(arr).all():
        raise GameError(f"Strategy has non-finite entries: {arr.tolist()}")
    if (arr < -tol).any():
        raise GameError(f"Strategy has negative probabilities: {arr.tolist()}")
    arr = np.where(arr < 0, 0.0, arr)
    total = arr.sum()
    if abs(total - 1.0) > tol:
        raise GameError(f"Strategy probabilities sum to {total!r}, expected 1")
    return arr / total


@dataclass(frozen=True, eq=False)
class Game:
    """Two-player normal-form game. Row player is player 1."""
    payoff1: np.ndarray
    payoff2: np.ndarray
    action_labels: Optional[Labels] = None

    def __post_init__(self) -> None:
        a = _frozen_matrix(self.payoff1, "payoff1")
        b = _frozen_matrix(self.payoff2, "payoff2")
        if a.shape != b.shape:
            raise GameError(f"Payoff matrices differ in shape: {a.shape} vs {b.shape}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise GameError(f"Each player needs at least one action, got {a.shape}")
        if not (np.isfinite(a).all() and np.isfinite(b).all()):
            raise GameError("Payoffs must be finite")
        object.__setattr__(self, "payoff1", a)
        object.__setattr__(self, "payoff2", b)

        if self.action_labels is not None:
            rows, cols = self.action_labels
            labels = (tuple(str(x) for x in rows), tuple(str(x) for x in cols))
            if len(labels[0]) != a.shape[0] or len(labels[1]) != a.shape[1]:
                raise GameError(
                    f"Label counts {len(labels[0])}x{len(labels[1])} do not match payoffs {a.shape}"
                )
            object.__setattr__(self, "action_labels", labels)

    @classmethod
    def from_matrices(cls, a, b, labels: Optional[Labels] = None) -> "Game":
        return cls(payoff1=a, payoff2=b, action_labels=labels)

    @property
    def n(self) -> int:
        return self.payoff1.shape[0]

    @property
    def m(self) -> int:
        return self.payoff1.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.payoff1.shape

    def labels(self, player: int) -> tuple[str, ...]:
        if self.action_labels is not None:
            return self.action_labels[player - 1]
        return tuple(str(i) for i in range(self.n if player == 1 else self.m))

    def label(self, player: int, index: int) -> str:
        return self.labels(player)[index]

    def swapped(self) -> "Game":
        """Same game with the players' roles exchanged."""
        labels = None
        if self.action_labels is not None:
            labels = (self.action_labels[1], self.action_labels[0])
        return Game(self.payoff2.T, self.payoff1.T, labels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return (
            np.array_equal(self.payoff1, other.payoff1)
            and np.array_equal(self.payoff2, other.payoff2)
            and self.action_labels == other.action_labels
        )


@dataclass(frozen=True, eq=False)
class MixedStrategy:
    """Probability vector over one player's actions."""
    probs: np.ndarray

    def __post_init__(self) -> None:
        arr = normalize_probs(self.probs)
        arr.setflags(write=False)
        object.__setattr__(self, "probs", arr)

    @classmethod
    def from_probs(cls, probs, tol: float = DEFAULT_TOLERANCE) -> "MixedStrategy":
        return cls(normalize_probs(probs, tol))

    @classmethod
    def from_solver(cls, probs) -> "MixedStrategy":
        """Renormalize a solver's vector; its sum may drift by up to SOLVER_SUM_TOLERANCE."""
        return cls(normalize_probs(probs, SOLVER_SUM_TOLERANCE))

    @classmethod
    def pure(cls, index: int, size: int) -> "MixedStrategy":
        if not 0 <= index < size:
            raise DimensionError(f"Action {index} out of range for {size} actions")
        probs = np.zeros(size)
        probs[index] = 1.0
        return cls(probs)

    def __len__(self) -> int:
        return self.probs.shape[0]

    def support(self, tol: float = 0.0) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.probs > tol)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MixedStrategy):
            return NotImplemented
        return np.array_equal(self.probs, other.probs)


@dataclass(frozen=True)
class StrategyProfile:
    s1: MixedStrategy
    s2: MixedStrategy

    @classmethod
    def pure(cls, i: int, j: int, n: int, m: int) -> "StrategyProfile":
        return cls(MixedStrategy.pure(i, n), MixedStrategy.pure(j, m))

    def check(self, game: Game) -> None:
        if len(self.s1) != game.n or len(self.s2) != game.m:
            raise DimensionError(
                f"Profile sizes ({len(self.s1)}, {len(self.s2)}) do not match game {game.shape}"
            )

    def swapped(self) -> "StrategyProfile":
        return StrategyProfile(self.s2, self.s1)


@dataclass(frozen=True)
class ValuePair:
    """One real value per player."""
    v1: float
    v2: float

    def __post_init__(self) -> None:
        v1, v2 = float(self.v1), float(self.v2)
        if not (np.isfinite(v1) and np.isfinite(v2)):
            raise GameError(f"Value pair must be finite, got ({v1}, {v2})")
        object.__setattr__(self, "v1", v1)
        object.__setattr__(self, "v2", v2)

    def __iter__(self) -> Iterator[float]:
        yield self.v1
        yield self.v2

    def as_tuple(self) -> tuple[float, float]:
        return (self.v1, self.v2)


@dataclass(frozen=True, eq=False)
class Decomposition:
    """Team part C=(A+B)/2 and zero-sum part D=(A-B)/2."""
    team: np.ndarray
    zerosum: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "team", _frozen_matrix(self.team, "team"))
        object.__setattr__(self, "zerosum", _frozen_matrix(self.zerosum, "zerosum"))

    def team_game(self) -> Game:
        return Game(self.team, self.team)

    def zerosum_game(self) -> Game:
        return Game(self.zerosum, -self.zerosum)


class ParetoRelation(str, Enum):
    DOMINATES = "dominates"
    STRONGLY_DOMINATES = "strongly-dominates"
    DOMINATED = "dominated"
    STRONGLY_DOMINATED = "strongly-dominated"
    EQUAL = "equal"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class BestUtility:
    """BU value with the strategy and opponent response realising it."""
    value: float
    strategy: MixedStrategy
    response: int


@dataclass(frozen=True)
class AlphaResult:
    profile: StrategyProfile
    alpha: float
    utilities: ValuePair


@dataclass(frozen=True)
class DealProfile:
    """Side-payment deal: agreed pure profile, transfer from player 1 to 2, backups."""
    agreed_profile: tuple[int, int]
    transfer: float
    backup1: int
    backup2: int

    def check(self, game: Game) -> None:
        i, j = self.agreed_profile
        if not (0 <= i < game.n and 0 <= j < game.m and 0 <= self.backup1 < game.n and 0 <= self.backup2 < game.m):
            raise DimensionError(f"Deal {self} has action indices outside game {game.shape}")

    def outcome(self, game: Game) -> ValuePair:
        """Payoffs when both players play this deal action."""
        self.check(game)
        i, j = self.agreed_profile
        return ValuePair(game.payoff1[i, j] - self.transfer, game.payoff2[i, j] + self.transfer)


@dataclass(frozen=True)
class CeViolation:
    """A deviation breaking both cooperative-equilibrium conditions."""
    player: int
    deviation: MixedStrategy
    deviator_value: float  # deviator's best payoff under opponent best responses
    current_value: float  # deviator's payoff at the tested profile
    opponent_best: float  # opponent's best payoff against the deviation
    opponent_current: float
    punishment: float  # lowest payoff the opponent can force on the deviator


@dataclass(frozen=True)
class GridSpec:
    """Probability grid for brute-force oracles."""
    k: int
    max_support: int = 2

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"Grid needs k >= 1, got {self.k}")
        if self.max_support not in (1, 2):
            raise ValueError(f"max_support must be 1 or 2, got {self.max_support}")
