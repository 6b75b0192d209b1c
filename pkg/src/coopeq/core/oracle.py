"""Brute-force grid oracles for checking the LP and bilinear solvers on small games.

Nothing here calls linprog or bilinear; only the exact BU terms of oracle_mpce_alpha come
from the production solver. Every value comes with the grid point that attains it.
"""

import itertools
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .bilinear import BilinearProblem2x2
from .equilibria import best_utilities
from .models import Game, GridSpec, MixedStrategy, StrategyProfile, ValuePair
from .settings import DEFAULT_TOLERANCE

_ROW_BUDGET = 1 << 22  # matrix cells per chunk of grid profiles


@dataclass(frozen=True)
class OracleResult:
    value: float
    witness: Any


def grid_strategies(size: int, spec: GridSpec) -> np.ndarray:
    """Pure strategies, then for each pair i < j the mixtures t/k on i, t = 1..k-1."""
    out = [np.eye(size)]
    if spec.max_support == 2 and size >= 2 and spec.k >= 2:
        weights = np.arange(1, spec.k) / spec.k
        for i, j in itertools.combinations(range(size), 2):
            block = np.zeros((weights.size, size))
            block[:, i] = weights
            block[:, j] = 1.0 - weights
            out.append(block)
    return np.vstack(out)


def grid_search_bu(
    g: Game, player: int, spec: GridSpec, tol: float = DEFAULT_TOLERANCE
) -> OracleResult:
    """Best grid strategy under the opponent's exact pure best responses."""
    if player == 1:
        own, other = g.payoff1, g.payoff2
    elif player == 2:
        own, other = g.payoff2.T, g.payoff1.T
    else:
        raise ValueError(f"Player must be 1 or 2, got {player}")

    S = grid_strategies(own.shape[0], spec)
    pay_own = S @ own
    pay_other = S @ other
    responses = pay_other >= pay_other.max(axis=1, keepdims=True) - tol
    values = np.where(responses, pay_own, -np.inf)
    per_strategy = values.max(axis=1)
    k = int(np.argmax(per_strategy))
    response = int(np.argmax(values[k]))
    strategy = MixedStrategy(S[k])
    other_strategy = MixedStrategy.pure(response, own.shape[1])
    witness = StrategyProfile(strategy, other_strategy)
    if player == 2:
        witness = witness.swapped()
    return OracleResult(float(per_strategy[k]), witness)


def oracle_bu(g: Game, player: int, spec: GridSpec, tol: float = DEFAULT_TOLERANCE) -> float:
    return grid_search_bu(g, player, spec, tol).value


def grid_search_mpce(g: Game, spec: GridSpec, bu: Optional[ValuePair] = None) -> OracleResult:
    """Grid maximum of min_i(U_i - BU_i) over pairs of grid strategies."""
    bu = bu or best_utilities(g)
    S1 = grid_strategies(g.n, spec)
    S2 = grid_strategies(g.m, spec)
    right1 = g.payoff1 @ S2.T
    right2 = g.payoff2 @ S2.T
    step = max(1, _ROW_BUDGET // S2.shape[0])

    best_value = -np.inf
    best_at = (0, 0)
    for start in range(0, S1.shape[0], step):
        block = S1[start:start + step]
        f = np.minimum(block @ right1 - bu.v1, block @ right2 - bu.v2)
        k = int(np.argmax(f))
        r, c = divmod(k, f.shape[1])
        if f[r, c] > best_value:
            best_value = float(f[r, c])
            best_at = (start + r, c)
    witness = StrategyProfile(MixedStrategy(S1[best_at[0]]), MixedStrategy(S2[best_at[1]]))
    return OracleResult(best_value, witness)


def oracle_mpce_alpha(g: Game, spec: GridSpec, bu: Optional[ValuePair] = None) -> float:
    return grid_search_mpce(g, spec, bu).value


def grid_search_bilinear(p: BilinearProblem2x2, k: int) -> Optional[OracleResult]:
    """Best feasible point of the (k+1)^2 grid over (x1, y1), or None."""
    if k < 1:
        raise ValueError(f"Grid needs k >= 1, got {k}")
    steps = np.arange(k + 1) / k
    x1, y1 = np.meshgrid(steps * p.d2, steps * p.d3, indexing="ij")
    x2 = p.d2 - x1
    y2 = p.d3 - y1

    def form(M: np.ndarray) -> np.ndarray:
        return M[0, 0] * x1 * y1 + M[0, 1] * x1 * y2 + M[1, 0] * x2 * y1 + M[1, 1] * x2 * y2

    objective = form(p.A) + p.c[0] * x1 + p.c[1] * x2 + p.c_prime[0] * y1 + p.c_prime[1] * y2
    feasible = form(p.B) >= p.d1
    if not feasible.any():
        return None
    masked = np.where(feasible, objective, -np.inf)
    i, j = np.unravel_index(int(np.argmax(masked)), masked.shape)
    x = np.array([x1[i, j], x2[i, j]])
    y = np.array([y1[i, j], y2[i, j]])
    return OracleResult(float(masked[i, j]), (x, y))


def oracle_bilinear(p: BilinearProblem2x2, k: int) -> Optional[float]:
    result = grid_search_bilinear(p, k)
    return None if result is None else result.value
