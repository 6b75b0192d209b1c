"""Dense two-phase tableau simplex with Bland's rule.

Problems are small and dense (a few hundred variables at most), so the solver keeps a full
tableau and recomputes reduced costs every pivot. Bland's rule picks the lowest-index
improving column and breaks ratio ties by the lowest basic index, which makes the output
deterministic and rules out cycling.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import SolverError
from .settings import DEFAULT_PIVOT_TOLERANCE, DEFAULT_TOLERANCE

logger = logging.getLogger(__name__)

Row = tuple[np.ndarray, float]


def _row(a, b, size: int, kind: str) -> Row:
    arr = np.array(a, dtype=float).reshape(-1)
    if arr.size != size:
        raise ValueError(f"{kind} row has {arr.size} coefficients, expected {size}")
    if not (np.isfinite(arr).all() and np.isfinite(b)):
        raise ValueError(f"{kind} row has non-finite entries")
    arr.setflags(write=False)
    return arr, float(b)


def _row_scale(a: np.ndarray) -> float:
    scale = float(np.abs(a).max(initial=0.0))
    return scale if scale > 0.0 else 1.0


@dataclass(frozen=True, eq=False)
class LpProblem:
    """maximize c^T x  s.t.  a^T x = b (eq),  a^T x >= b (ineq),  x >= 0."""
    objective: np.ndarray
    eq_constraints: Sequence[Row] = ()
    ineq_constraints: Sequence[Row] = ()

    def __post_init__(self) -> None:
        c = np.array(self.objective, dtype=float).reshape(-1)
        if c.size == 0:
            raise ValueError("LP needs at least one variable")
        if not np.isfinite(c).all():
            raise ValueError("LP objective has non-finite entries")
        c.setflags(write=False)
        object.__setattr__(self, "objective", c)
        object.__setattr__(
            self, "eq_constraints", tuple(_row(a, b, c.size, "equality") for a, b in self.eq_constraints)
        )
        object.__setattr__(
            self, "ineq_constraints", tuple(_row(a, b, c.size, "inequality") for a, b in self.ineq_constraints)
        )

    @property
    def num_vars(self) -> int:
        return self.objective.size


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True, eq=False)
class LpSolution:
    status: LpStatus
    x: Optional[np.ndarray] = None
    value: Optional[float] = None
    pivots: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class SimplexSolver:
    """One mutable tableau per instance; call solve() once.

    Rows are scaled to unit max-norm before the first pivot. After phase 2 the tableau is
    rebuilt from the scaled rows and the final basis, and the primal point is checked
    against every input row; a point that misses a row raises SolverError.
    """

    refine_rounds = 3

    def __init__(
        self,
        problem: LpProblem,
        pivot_tol: float = DEFAULT_PIVOT_TOLERANCE,
        feasibility_tol: float = DEFAULT_TOLERANCE,
        max_pivots: Optional[int] = None,
    ):
        self.problem = problem
        self.pivot_tol = pivot_tol
        self.feasibility_tol = feasibility_tol
        self.max_pivots = max_pivots
        self.pivots = 0
        self._tableau: Optional[np.ndarray] = None
        self._basis: Optional[np.ndarray] = None
        self._art_start = 0
        self._rows_A: Optional[np.ndarray] = None
        self._rows_b: Optional[np.ndarray] = None
        self._live: Optional[np.ndarray] = None

    def _build(self) -> None:
        p = self.problem
        n = p.num_vars
        n_ineq = len(p.ineq_constraints)
        needs_art = len(p.eq_constraints) + sum(1 for _, b in p.ineq_constraints if b > 0)
        n_rows = len(p.eq_constraints) + n_ineq
        self._art_start = n + n_ineq
        total = self._art_start + needs_art

        T = np.zeros((n_rows, total + 1))
        basis = np.empty(n_rows, dtype=int)
        art = self._art_start
        r = 0
        for t, (a, b) in enumerate(p.ineq_constraints):
            surplus = n + t
            scale = _row_scale(a)
            a, b = a / scale, b / scale
            if b <= 0:
                # -a x + s = -b >= 0 starts feasible with the surplus basic
                T[r, :n] = -a
                T[r, surplus] = 1.0
                T[r, -1] = -b
                basis[r] = surplus
            else:
                T[r, :n] = a
                T[r, surplus] = -1.0
                T[r, art] = 1.0
                T[r, -1] = b
                basis[r] = art
                art += 1
            r += 1
        for a, b in p.eq_constraints:
            scale = _row_scale(a) * (-1.0 if b < 0 else 1.0)
            T[r, :n] = a / scale
            T[r, art] = 1.0
            T[r, -1] = b / scale
            basis[r] = art
            art += 1
            r += 1

        self._tableau = T
        self._basis = basis
        self._rows_A = T[:, : self._art_start].copy()
        self._rows_b = T[:, -1].copy()
        self._live = np.arange(n_rows)
        if self.max_pivots is None:
            self.max_pivots = 50 * (n_rows + total) + 1000

    def _pivot(self, row: int, col: int) -> None:
        T = self._tableau
        T[row] /= T[row, col]
        factors = T[:, col].copy()
        factors[row] = 0.0
        T -= np.outer(factors, T[row])
        self._basis[row] = col
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise SolverError(f"Simplex exceeded {self.max_pivots} pivots")

    def _run(self, cost: np.ndarray) -> LpStatus:
        T = self._tableau
        cols = T.shape[1] - 1
        cost_tol = self.pivot_tol * max(1.0, float(np.abs(cost).max(initial=0.0)))
        while True:
            T = self._tableau
            reduced = cost - cost[self._basis] @ T[:, :cols]
            improving = np.flatnonzero(reduced > cost_tol)
            if improving.size == 0:
                return LpStatus.OPTIMAL
            col = int(improving[0])

            column = T[:, col]
            entry_tol = self.pivot_tol * max(1.0, float(np.abs(column).max(initial=0.0)))
            rows = np.flatnonzero(column > entry_tol)
            if rows.size == 0:
                return LpStatus.UNBOUNDED
            ratios = np.maximum(T[rows, -1], 0.0) / column[rows]
            best = ratios.min()
            ties = rows[ratios <= best + self.pivot_tol * max(1.0, best)]
            row = int(ties[np.argmin(self._basis[ties])])
            self._pivot(row, col)

    def _drive_out_artificials(self) -> None:
        """Pivot basic artificials out where possible, drop redundant rows, drop artificial columns."""
        T = self._tableau
        keep = []
        for r in range(T.shape[0]):
            if self._basis[r] < self._art_start:
                keep.append(r)
                continue
            candidates = np.flatnonzero(np.abs(self._tableau[r, : self._art_start]) > self.pivot_tol)
            if candidates.size:
                self._pivot(r, int(candidates[0]))
                keep.append(r)
            else:
                logger.debug("Dropping redundant constraint row %d", r)
        columns = list(range(self._art_start)) + [self._tableau.shape[1] - 1]
        self._tableau = self._tableau[np.ix_(keep, columns)]
        self._basis = self._basis[keep]
        self._live = self._live[keep]

    def _reinvert(self) -> None:
        """Rebuild the tableau from the scaled input rows and the current basis."""
        if self._basis.size == 0:
            return
        A = self._rows_A[self._live]
        rhs = np.column_stack([A, self._rows_b[self._live]])
        try:
            self._tableau = np.linalg.solve(A[:, self._basis], rhs)
        except np.linalg.LinAlgError as e:
            raise SolverError(f"Simplex basis became singular: {e}") from e

    def _primal(self) -> np.ndarray:
        n = self.problem.num_vars
        values = self._tableau[:, -1]
        floor = -self.feasibility_tol * max(1.0, float(np.abs(values).max(initial=0.0)))
        if (values < floor).any():
            raise SolverError(f"Simplex basis is infeasible: basic value {values.min():.3g}")
        x = np.zeros(n)
        for r, var in enumerate(self._basis):
            if var < n:
                x[var] = max(values[r], 0.0)
        return x

    def check_solution(self, x: np.ndarray) -> None:
        """Raise SolverError unless x meets every input row within a row-relative tolerance."""
        p = self.problem
        mass = max(1.0, float(np.abs(x).sum()))
        for kind, rows in (("equality", p.eq_constraints), ("inequality", p.ineq_constraints)):
            for k, (a, b) in enumerate(rows):
                lhs = float(a @ x)
                gap = abs(lhs - b) if kind == "equality" else b - lhs
                tol = self.feasibility_tol * max(1.0, float(np.abs(a).max(initial=0.0)) * mass, abs(b))
                if gap > tol:
                    raise SolverError(f"LP solution misses {kind} row {k} by {gap:.3g} (tolerance {tol:.3g})")

    def solve(self) -> LpSolution:
        self._build()
        p = self.problem
        n_cols = self._tableau.shape[1] - 1

        if n_cols > self._art_start:
            phase1 = np.zeros(n_cols)
            phase1[self._art_start:] = -1.0
            self._run(phase1)
            residual = float(np.maximum(self._tableau[self._basis >= self._art_start, -1], 0.0).sum())
            rhs_scale = max(1.0, float(np.abs(self._rows_b).max(initial=0.0)))
            if residual > self.feasibility_tol * rhs_scale:
                logger.debug("LP infeasible: phase-1 residual %.3g after %d pivots", residual, self.pivots)
                return LpSolution(LpStatus.INFEASIBLE, pivots=self.pivots)
            self._drive_out_artificials()

        cost = np.zeros(self._tableau.shape[1] - 1)
        cost[: p.num_vars] = p.objective
        for _ in range(self.refine_rounds):
            before = self.pivots
            if self._run(cost) is LpStatus.UNBOUNDED:
                logger.debug("LP unbounded after %d pivots", self.pivots)
                return LpSolution(LpStatus.UNBOUNDED, pivots=self.pivots)
            self._reinvert()
            if self.pivots == before:
                break

        x = self._primal()
        self.check_solution(x)
        value = float(p.objective @ x)
        logger.debug("LP optimal value %.12g after %d pivots", value, self.pivots)
        return LpSolution(LpStatus.OPTIMAL, x=x, value=value, pivots=self.pivots)


def solve_lp(
    p: LpProblem,
    pivot_tol: float = DEFAULT_PIVOT_TOLERANCE,
    feasibility_tol: float = DEFAULT_TOLERANCE,
) -> LpSolution:
    return SimplexSolver(p, pivot_tol=pivot_tol, feasibility_tol=feasibility_tol).solve()


def vertex_support(x: np.ndarray, tol: float = DEFAULT_TOLERANCE) -> list[int]:
    """Sorted indices of entries above tol."""
    return [int(i) for i in np.flatnonzero(np.asarray(x) > tol)]


def simplex_problem(objective, ineq_rows=(), ineq_rhs: float = 0.0, extra_eq=()) -> LpProblem:
    """LP over the probability simplex: sum(x) = 1, x >= 0, plus rows^T x >= rhs."""
    objective = np.asarray(objective, dtype=float)
    ones = np.ones(objective.size)
    return LpProblem(
        objective=objective,
        eq_constraints=((ones, 1.0), *extra_eq),
        ineq_constraints=tuple((row, ineq_rhs) for row in ineq_rows),
    )
