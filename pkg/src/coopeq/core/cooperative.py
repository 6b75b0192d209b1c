"""Coco value and side-payment M-PCE values.

The side-payment game is never built: its MSW and minimax values equal the base game's, so
every value here is a closed form over msw() and minimax_value().
"""

import logging
import math
from typing import Union

from .equilibria import minimax_value, minimax_values
from .errors import SolverError
from .game import decompose, msw, msw_profile
from .models import DealProfile, Game, ValuePair
from .settings import DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)


def coco_formula(g: Game, tol: float = DEFAULT_TOLERANCE) -> ValuePair:
    """((MSW + mm1(Gz) - mm2(Gz)) / 2, (MSW - mm1(Gz) + mm2(Gz)) / 2)."""
    gz = decompose(g).zerosum_game()
    total = msw(g)
    mm1, mm2 = minimax_value(gz, 1, tol), minimax_value(gz, 2, tol)
    return ValuePair((total + mm1 - mm2) / 2.0, (total - mm1 + mm2) / 2.0)


def coco_value(g: Game, tol: float = DEFAULT_TOLERANCE) -> ValuePair:
    """(a + z, a - z): team maximum a, zero-sum part's minimax value z."""
    parts = decompose(g)
    a = float(parts.team.max())
    z = minimax_value(parts.zerosum_game(), 1, tol)
    value = ValuePair(a + z, a - z)

    formula = coco_formula(g, tol)
    for got, expected in zip(value, formula):
        if not math.isclose(got, expected, rel_tol=1e-9, abs_tol=max(tol, 1e-9)):
            raise SolverError(f"Coco value {value.as_tuple()} disagrees with closed form {formula.as_tuple()}")
    return value


def sidepay_mpce_value(g: Game, tol: float = DEFAULT_TOLERANCE) -> ValuePair:
    """Unique M-PCE value of the game with side payments."""
    total = msw(g)
    mm = minimax_values(g, tol)
    logger.debug("Side-payment value from MSW %.12g and minimax (%.12g, %.12g)", total, mm.v1, mm.v2)
    return ValuePair((total + mm.v1 - mm.v2) / 2.0, (total - mm.v1 + mm.v2) / 2.0)


def sidepay_mpce_value_with_default(g: Game, d1: float, d2: float) -> ValuePair:
    """Side-payment value when unmatched deals fall back to default payoffs (d1, d2)."""
    total = msw(g)
    return ValuePair((total + d1 - d2) / 2.0, (total - d1 + d2) / 2.0)


def sidepay_best_utilities(g: Game, tol: float = DEFAULT_TOLERANCE) -> ValuePair:
    """BU in the side-payment game: (MSW - mm2, MSW - mm1)."""
    total = msw(g)
    mm = minimax_values(g, tol)
    return ValuePair(total - mm.v2, total - mm.v1)


def sidepay_mpce_alpha(g: Game, tol: float = DEFAULT_TOLERANCE) -> float:
    """Alpha of the side-payment M-PCE; the same for both players."""
    mm = minimax_values(g, tol)
    return (mm.v1 + mm.v2 - msw(g)) / 2.0


def _deal_for(g: Game, v1: float) -> DealProfile:
    _, (i, j) = msw_profile(g)
    return DealProfile(agreed_profile=(i, j), transfer=float(g.payoff1[i, j]) - v1, backup1=i, backup2=j)


def sidepay_mpce_profile(g: Game, tol: float = DEFAULT_TOLERANCE) -> DealProfile:
    """Deal on the MSW profile; player 1 pays U1(a*) - m1 so both get the M-PCE value."""
    return _deal_for(g, sidepay_mpce_value(g, tol).v1)


def coco_deal_profile(g: Game, tol: float = DEFAULT_TOLERANCE) -> DealProfile:
    """Deal on the MSW profile that pays out the coco value."""
    return _deal_for(g, coco_value(g, tol).v1)


Play = Union[DealProfile, int]


def deal_outcome(g: Game, play1: Play, play2: Play) -> ValuePair:
    """Payoffs when player 1 plays play1 and player 2 plays play2.

    A matching deal pays out the agreed profile less the transfer. Any other combination
    falls back to the players' backup actions (a plain action index is its own backup).
    """
    if isinstance(play1, DealProfile) and isinstance(play2, DealProfile) and (
        play1.agreed_profile == play2.agreed_profile and play1.transfer == play2.transfer
    ):
        return play1.outcome(g)
    i = play1.backup1 if isinstance(play1, DealProfile) else play1
    j = play2.backup2 if isinstance(play2, DealProfile) else play2
    if not (0 <= i < g.n and 0 <= j < g.m):
        raise ValueError(f"Action pair ({i}, {j}) outside game {g.shape}")
    return ValuePair(g.payoff1[i, j], g.payoff2[i, j])
