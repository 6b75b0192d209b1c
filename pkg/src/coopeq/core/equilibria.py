"""Best utilities, minimax values and the PCE family of solvers.

BU and minimax values come from one small LP per opponent column (resp. own row) over the
probability simplex. PCE, M-PCE and Pareto-optimal M-PCE scan every pair of support-2
supports (i1, i2, j1, j2); each scan step is a batch of 2x2 bilinear programs.
"""

import itertools
import logging
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bilinear import solve_bilinear_batch
from .errors import SolverError
from .game import expected_utilities, pareto_relation
from .linprog import simplex_problem, solve_lp
from .models import (
    AlphaResult,
    BestUtility,
    CeViolation,
    Game,
    MixedStrategy,
    ParetoRelation,
    StrategyProfile,
    ValuePair,
)
from .settings import DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)

TUPLE_CHUNK = 1 << 18
DEVIATION_CHUNK = 1 << 14


def _check_player(player: int) -> None:
    if player not in (1, 2):
        raise ValueError(f"Player must be 1 or 2, got {player}")


# --- Best utility and minimax ---

def best_utility_witness(g: Game, player: int, tol: float = DEFAULT_TOLERANCE) -> BestUtility:
    """BU of a player with the strategy and opponent best response that realise it."""
    _check_player(player)
    if player == 2:
        return best_utility_witness(g.swapped(), 1, tol)

    A, B = g.payoff1, g.payoff2
    best: Optional[BestUtility] = None
    for j in range(g.m):
        rows = [B[:, j] - B[:, k] for k in range(g.m) if k != j]
        sol = solve_lp(simplex_problem(A[:, j], rows), feasibility_tol=tol)
        if not sol.is_optimal:
            logger.debug("BU column %d is never a best response", j)
            continue
        logger.debug("BU column %d value %.12g", j, sol.value)
        if best is None or sol.value > best.value:
            best = BestUtility(sol.value, MixedStrategy.from_solver(sol.x), j)
    if best is None:
        raise SolverError("No opponent action is a best response to any strategy")
    return best


def best_utility(g: Game, player: int, tol: float = DEFAULT_TOLERANCE) -> float:
    return best_utility_witness(g, player, tol).value


def best_utilities(g: Game, tol: float = DEFAULT_TOLERANCE) -> ValuePair:
    return ValuePair(best_utility(g, 1, tol), best_utility(g, 2, tol))


def minimax_value(g: Game, player: int, tol: float = DEFAULT_TOLERANCE) -> float:
    """Lowest maximum payoff the opponent can hold the player to."""
    _check_player(player)
    if player == 2:
        return minimax_value(g.swapped(), 1, tol)

    A = g.payoff1
    best: Optional[float] = None
    for i in range(g.n):
        rows = [A[i] - A[k] for k in range(g.n) if k != i]
        sol = solve_lp(simplex_problem(-A[i], rows), feasibility_tol=tol)
        if not sol.is_optimal:
            continue
        value = -sol.value
        if best is None or value < best:
            best = value
    if best is None:
        raise SolverError("No row is a best response to any opponent strategy")
    return best


def minimax_values(g: Game, tol: float = DEFAULT_TOLERANCE) -> ValuePair:
    return ValuePair(minimax_value(g, 1, tol), minimax_value(g, 2, tol))


# --- PCE checks ---

def alpha_of(
    g: Game, s: StrategyProfile, bu: Optional[ValuePair] = None, tol: float = DEFAULT_TOLERANCE
) -> float:
    """Largest alpha for which s is an alpha-PCE. tol reaches the best-utility LPs when bu is not given."""
    u = expected_utilities(g, s)
    if bu is None:
        bu = best_utilities(g, tol)
    return min(u.v1 - bu.v1, u.v2 - bu.v2)


def is_alpha_pce(
    g: Game, s: StrategyProfile, alpha: float, tol: float = DEFAULT_TOLERANCE, bu: Optional[ValuePair] = None
) -> bool:
    return alpha_of(g, s, bu, tol) >= alpha - tol


def is_pce(g: Game, s: StrategyProfile, tol: float = DEFAULT_TOLERANCE, bu: Optional[ValuePair] = None) -> bool:
    return is_alpha_pce(g, s, 0.0, tol, bu)


def _alpha_result(g: Game, profile: StrategyProfile, bu: ValuePair) -> AlphaResult:
    u = expected_utilities(g, profile)
    return AlphaResult(profile=profile, alpha=min(u.v1 - bu.v1, u.v2 - bu.v2), utilities=u)


# --- Support-2 tuple scans ---

@dataclass(frozen=True, eq=False)
class _Program:
    """maximize x^T objective y - offset  s.t.  x^T constraint y >= rhs, on one support tuple.

    When set, cap bounds the value from above: x^T cap y - cap_offset >= value on every
    feasible point.
    """
    objective: np.ndarray
    constraint: np.ndarray
    rhs: float
    offset: float = 0.0
    cap: Optional[np.ndarray] = None
    cap_offset: float = 0.0

    def slack(self, tol: float) -> float:
        scale = max(1.0, float(np.abs(self.objective).max()), float(np.abs(self.constraint).max()), abs(self.rhs))
        return tol * scale

    def upper_bound(self, rows: np.ndarray, cols: np.ndarray, tol: float) -> np.ndarray:
        """Per-tuple bound on the value; -inf where no point of the tuple meets the constraint."""
        bound = _cell_max(self.objective, rows, cols) - self.offset
        if self.cap is not None:
            bound = np.minimum(bound, _cell_max(self.cap, rows, cols) - self.cap_offset)
        feasible = _cell_max(self.constraint, rows, cols) >= self.rhs - self.slack(tol)
        return np.where(feasible, bound, -np.inf)

    def pure_floor(self) -> float:
        """Best value over pure profiles meeting the constraint; every tuple holding one does at least this well."""
        ok = self.constraint >= self.rhs
        if not ok.any():
            return -np.inf
        return float((self.objective - self.offset)[ok].max())


@dataclass(frozen=True)
class _TupleHit:
    score: float
    rows: tuple[int, int]
    cols: tuple[int, int]
    x1: float
    y1: float


def _support_pairs(k: int) -> np.ndarray:
    """All i1 < i2; a single action is its own degenerate pair."""
    if k == 1:
        return np.zeros((1, 2), dtype=int)
    return np.array(list(itertools.combinations(range(k), 2)), dtype=int)


def _restrict(M: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    out = np.empty((rows.shape[0], 2, 2))
    out[:, 0, 0] = M[rows[:, 0], cols[:, 0]]
    out[:, 0, 1] = M[rows[:, 0], cols[:, 1]]
    out[:, 1, 0] = M[rows[:, 1], cols[:, 0]]
    out[:, 1, 1] = M[rows[:, 1], cols[:, 1]]
    return out


def _cell_max(M: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
    return np.maximum(
        np.maximum(M[rows[:, 0], cols[:, 0]], M[rows[:, 0], cols[:, 1]]),
        np.maximum(M[rows[:, 1], cols[:, 0]], M[rows[:, 1], cols[:, 1]]),
    )


def _scan(
    g: Game,
    programs: Sequence[_Program],
    tol: float,
    stop_at: Optional[float] = None,
) -> Optional[_TupleHit]:
    """Best tuple by max over programs; with stop_at, the first tuple scoring >= stop_at.

    A tuple whose upper bound falls below the target (stop_at, or the best score found so
    far, starting from the best pure profile) is skipped without solving.
    """
    row_pairs = _support_pairs(g.n)
    col_pairs = _support_pairs(g.m)
    n_cols = len(col_pairs)
    total = len(row_pairs) * n_cols
    started = time.perf_counter()
    logger.debug("Scanning %d support tuples with %d program(s)", total, len(programs))

    target = stop_at if stop_at is not None else max(p.pure_floor() for p in programs)
    best: Optional[_TupleHit] = None
    solved = 0
    for start in range(0, total, TUPLE_CHUNK):
        idx = np.arange(start, min(start + TUPLE_CHUNK, total))
        rp = row_pairs[idx // n_cols]
        cp = col_pairs[idx % n_cols]

        score = np.full(idx.size, -np.inf)
        x1 = np.zeros(idx.size)
        y1 = np.zeros(idx.size)
        for prog in programs:
            live = np.flatnonzero(prog.upper_bound(rp, cp, tol) >= target - 2.0 * prog.slack(tol))
            if live.size == 0:
                continue
            solved += live.size
            lr, lc = rp[live], cp[live]
            batch = solve_bilinear_batch(_restrict(prog.objective, lr, lc), _restrict(prog.constraint, lr, lc), prog.rhs)
            candidate = batch.value - prog.offset
            better = candidate > score[live]
            score[live] = np.where(better, candidate, score[live])
            x1[live] = np.where(better, batch.x1, x1[live])
            y1[live] = np.where(better, batch.y1, y1[live])

        if stop_at is not None:
            hits = np.flatnonzero(score >= stop_at)
            if hits.size == 0:
                continue
            k = int(hits[0])
        else:
            top = score.max()
            if not np.isfinite(top):
                continue
            k = int(np.flatnonzero(score >= top - tol)[0])
            if best is not None and score[k] <= best.score + tol:
                continue
            target = max(target, float(score[k]))

        best = _TupleHit(
            score=float(score[k]),
            rows=(int(rp[k, 0]), int(rp[k, 1])),
            cols=(int(cp[k, 0]), int(cp[k, 1])),
            x1=float(x1[k]),
            y1=float(y1[k]),
        )
        if stop_at is not None:
            break

    logger.info(
        "Scanned %d support tuples (%d solved) in %.2fs", total, solved, time.perf_counter() - started
    )
    return best


def _hit_profile(g: Game, hit: _TupleHit) -> StrategyProfile:
    x = np.zeros(g.n)
    y = np.zeros(g.m)
    x[hit.rows[0]] += hit.x1
    x[hit.rows[1]] += 1.0 - hit.x1
    y[hit.cols[0]] += hit.y1
    y[hit.cols[1]] += 1.0 - hit.y1
    return StrategyProfile(MixedStrategy.from_solver(x), MixedStrategy.from_solver(y))


def _maximize_with_floor(g: Game, player: int, floor: float, tol: float) -> StrategyProfile:
    """Support-2 profile maximizing one player's utility with the other's kept >= floor."""
    own, other = (g.payoff1, g.payoff2) if player == 1 else (g.payoff2, g.payoff1)
    hit = _scan(g, [_Program(own, other, floor - tol)], tol)
    if hit is None:
        raise SolverError(f"No support-2 profile keeps player {3 - player} at {floor:.12g}")
    return _hit_profile(g, hit)


# --- PCE family ---

def find_pce(g: Game, tol: float = DEFAULT_TOLERANCE, bu: Optional[ValuePair] = None) -> Optional[StrategyProfile]:
    """First support-2 PCE in lexicographic tuple order, or None when the game has no PCE."""
    bu = bu or best_utilities(g, tol)
    hit = _scan(g, [_Program(g.payoff1, g.payoff2, bu.v2 - tol / 2)], tol, stop_at=bu.v1 - tol)
    if hit is None:
        logger.info("No PCE: best utilities (%.12g, %.12g) cannot both be met", bu.v1, bu.v2)
        return None
    return _hit_profile(g, hit)


def find_mpce(g: Game, tol: float = DEFAULT_TOLERANCE, bu: Optional[ValuePair] = None) -> AlphaResult:
    """Support-2 profile maximizing min_i(U_i - BU_i)."""
    bu = bu or best_utilities(g, tol)
    A, B = g.payoff1, g.payoff2
    programs = [
        # player 1 is the binding side: maximize U1 - BU1 with U1 - BU1 <= U2 - BU2
        _Program(A, B - A, bu.v2 - bu.v1, offset=bu.v1, cap=B, cap_offset=bu.v2),
        _Program(B, A - B, bu.v1 - bu.v2, offset=bu.v2, cap=A, cap_offset=bu.v1),
    ]
    hit = _scan(g, programs, tol)
    if hit is None:
        raise SolverError("M-PCE scan found no feasible tuple")
    return _alpha_result(g, _hit_profile(g, hit), bu)


def pareto_improve_support2(g: Game, s: StrategyProfile, tol: float = DEFAULT_TOLERANCE) -> StrategyProfile:
    """Profile with supports <= 2 that is at least as good as s for both players."""
    s.check(g)
    A, B = g.payoff1, g.payoff2
    x = s.s1.probs
    y = s.s2.probs

    # Player 2 moves to a basic solution keeping its own payoff fixed.
    sol = solve_lp(simplex_problem(x @ A, extra_eq=((x @ B, float(x @ B @ y)),)), feasibility_tol=tol)
    if not sol.is_optimal:
        raise SolverError(f"Pareto improvement LP for player 2 is {sol.status.value}")
    y_new = MixedStrategy.from_solver(sol.x)

    # Then player 1, holding player 1's payoff at its new level.
    ay = A @ y_new.probs
    sol = solve_lp(simplex_problem(B @ y_new.probs, extra_eq=((ay, float(x @ ay)),)), feasibility_tol=tol)
    if not sol.is_optimal:
        raise SolverError(f"Pareto improvement LP for player 1 is {sol.status.value}")
    return StrategyProfile(MixedStrategy.from_solver(sol.x), y_new)


def find_pareto_optimal_mpce(
    g: Game, tol: float = DEFAULT_TOLERANCE, bu: Optional[ValuePair] = None
) -> AlphaResult:
    """M-PCE that no profile Pareto dominates; such a profile is also a CE."""
    bu = bu or best_utilities(g, tol)
    mpce = find_mpce(g, tol, bu)
    u = mpce.utilities

    first = _maximize_with_floor(g, 1, u.v2, tol)
    second = _maximize_with_floor(g, 2, u.v1, tol)
    relation = pareto_relation(g, first, second, tol)
    logger.debug("Pareto candidates compare as %s", relation.value)

    # Whichever side is kept, push the other player up while holding the kept player's level.
    if relation in (ParetoRelation.DOMINATED, ParetoRelation.STRONGLY_DOMINATED):
        held = expected_utilities(g, second).v2
        result = _maximize_with_floor(g, 1, held, tol)
    else:
        held = expected_utilities(g, first).v1
        result = _maximize_with_floor(g, 2, held, tol)
    return _alpha_result(g, result, bu)


# --- Cooperative-equilibrium falsifier ---

def _deviation_chunks(size: int, grid_k: int):
    """Pure actions, then support-2 mixtures t/k on the lower action, t = 1..k-1."""
    yield np.eye(size)
    if size < 2 or grid_k < 2:
        return
    weights = np.arange(1, grid_k) / grid_k
    pairs = np.array(list(itertools.combinations(range(size), 2)), dtype=int)
    per_chunk = max(1, DEVIATION_CHUNK // weights.size)
    for start in range(0, len(pairs), per_chunk):
        chunk = pairs[start:start + per_chunk]
        rows = np.zeros((len(chunk), weights.size, size))
        idx = np.arange(len(chunk))
        rows[idx, :, chunk[:, 0]] = weights
        rows[idx, :, chunk[:, 1]] = 1.0 - weights
        yield rows.reshape(-1, size)


def _falsify_side(
    own: np.ndarray, other: np.ndarray, current_own: float, current_other: float, grid_k: int, tol: float
) -> Optional[tuple[np.ndarray, float, float, float]]:
    for W in _deviation_chunks(own.shape[0], grid_k):
        pay_own = W @ own
        pay_other = W @ other
        other_best = pay_other.max(axis=1)
        responses = pay_other >= other_best[:, None] - tol
        deviator_value = np.where(responses, pay_own, -np.inf).max(axis=1)
        punishment = pay_own.min(axis=1)

        unprofitable = current_own >= deviator_value - tol
        punished = (other_best < current_other + tol) & (punishment <= current_own + tol)
        bad = np.flatnonzero(~unprofitable & ~punished)
        if bad.size:
            k = int(bad[0])
            return W[k], float(deviator_value[k]), float(other_best[k]), float(punishment[k])
    return None


def ce_falsify(
    g: Game, s: StrategyProfile, grid_k: int, tol: float = DEFAULT_TOLERANCE
) -> Optional[CeViolation]:
    """First grid deviation violating both CE conditions, or None."""
    if grid_k < 1:
        raise ValueError(f"grid_k must be >= 1, got {grid_k}")
    u = expected_utilities(g, s)
    sides = (
        (1, g.payoff1, g.payoff2, u.v1, u.v2),
        (2, g.payoff2.T, g.payoff1.T, u.v2, u.v1),
    )
    for player, own, other, current_own, current_other in sides:
        found = _falsify_side(own, other, current_own, current_other, grid_k, tol)
        if found is None:
            continue
        deviation, deviator_value, other_best, punishment = found
        logger.info("Player %d deviation %s breaks both CE conditions", player, deviation.tolist())
        return CeViolation(
            player=player,
            deviation=MixedStrategy.from_probs(deviation),
            deviator_value=deviator_value,
            current_value=current_own,
            opponent_best=other_best,
            opponent_current=current_other,
            punishment=punishment,
        )
    return None
