"""Utilities, welfare, decomposition and Pareto comparisons on a Game."""

import numpy as np

from .models import Decomposition, Game, ParetoRelation, StrategyProfile, ValuePair
from .settings import DEFAULT_TOLERANCE


def expected_utilities(g: Game, s: StrategyProfile) -> ValuePair:
    """(U1(s), U2(s)) as the bilinear forms s1^T A s2 and s1^T B s2."""
    s.check(g)
    x, y = s.s1.probs, s.s2.probs
    return ValuePair(x @ g.payoff1 @ y, x @ g.payoff2 @ y)


def msw_profile(g: Game) -> tuple[float, tuple[int, int]]:
    """Maximum social welfare and its lowest row-major arg-max pure profile."""
    welfare = g.payoff1 + g.payoff2
    flat = int(np.argmax(welfare))
    i, j = divmod(flat, g.m)
    return float(welfare[i, j]), (i, j)


def msw(g: Game) -> float:
    return msw_profile(g)[0]


def decompose(g: Game) -> Decomposition:
    return Decomposition(
        team=(g.payoff1 + g.payoff2) / 2.0,
        zerosum=(g.payoff1 - g.payoff2) / 2.0,
    )


def pareto_relation(
    g: Game, s: StrategyProfile, t: StrategyProfile, tol: float = DEFAULT_TOLERANCE
) -> ParetoRelation:
    """Compare s against t by both players' utilities."""
    u = np.array(expected_utilities(g, s).as_tuple())
    v = np.array(expected_utilities(g, t).as_tuple())
    diff = u - v
    better = diff > tol
    worse = diff < -tol

    if not better.any() and not worse.any():
        return ParetoRelation.EQUAL
    if not worse.any():
        return ParetoRelation.STRONGLY_DOMINATES if better.all() else ParetoRelation.DOMINATES
    if not better.any():
        return ParetoRelation.STRONGLY_DOMINATED if worse.all() else ParetoRelation.DOMINATED
    return ParetoRelation.INCOMPARABLE


def weakly_pareto_dominates(
    g: Game, s: StrategyProfile, t: StrategyProfile, tol: float = DEFAULT_TOLERANCE
) -> bool:
    """True when s is at least as good as t for both players."""
    return pareto_relation(g, s, t, tol) in (
        ParetoRelation.EQUAL,
        ParetoRelation.DOMINATES,
        ParetoRelation.STRONGLY_DOMINATES,
    )
