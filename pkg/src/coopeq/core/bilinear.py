"""Simple 2x2 bilinear programs.

    maximize    x^T A y + c.x + c'.y
    subject to  x^T B y >= d1,  x1 + x2 = d2,  y1 + y2 = d3,  x, y >= 0

Substituting x2 = d2 - x1 and y2 = d3 - y1 leaves

    f(x1, y1) = g1 x1 y1 + g2 x1 + g3 y1 (+ const)
    (g4 y1 + g5) x1 + g6 y1 + g7 >= 0

For fixed y1 the feasible x1 form one interval whose ends are 0, d2 or the ratio
r(y1) = -(g6 y1 + g7) / (g4 y1 + g5), and f is linear in x1, so the optimum sits at an
interval end. Across y1 the case regions change only at 0, d3, the pole -g5/g4, the
points where r equals 0 or d2 and where g1 y1 + g2 changes sign. Inside a region the
objective along x1 = r(y1) peaks at a root of a quadratic. The solver evaluates every
(y1, x1) built from those breakpoints, which covers all eight cases at once, and checks
feasibility on the original constraint.

Everything is vectorized over a leading batch axis so support-tuple scans can solve
thousands of programs per numpy call.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .settings import DEFAULT_CASE_TOLERANCE

DEFAULT_FEASIBILITY_TOLERANCE = 1e-12  # relative to the constraint's magnitude


@dataclass(frozen=True, eq=False)
class BilinearProblem2x2:
    A: np.ndarray
    B: np.ndarray
    c: np.ndarray = (0.0, 0.0)
    c_prime: np.ndarray = (0.0, 0.0)
    d1: float = 0.0
    d2: float = 1.0
    d3: float = 1.0

    def __post_init__(self) -> None:
        for name, shape in (("A", (2, 2)), ("B", (2, 2)), ("c", (2,)), ("c_prime", (2,))):
            arr = np.array(getattr(self, name), dtype=float)
            if arr.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {arr.shape}")
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        for name in ("d1", "d2", "d3"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.d2 > 0 and self.d3 > 0):
            raise ValueError(f"d2 and d3 must be positive, got {self.d2}, {self.d3}")


class BilinearStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True, eq=False)
class BilinearSolution:
    status: BilinearStatus
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None
    value: Optional[float] = None

    @property
    def is_optimal(self) -> bool:
        return self.status is BilinearStatus.OPTIMAL


@dataclass(frozen=True)
class Gammas:
    g1: float
    g2: float
    g3: float
    g4: float
    g5: float
    g6: float
    g7: float
    const: float


@dataclass(frozen=True, eq=False)
class BilinearBatch:
    """Per-problem optimum of a batch. value is -inf where infeasible."""
    feasible: np.ndarray
    x1: np.ndarray
    y1: np.ndarray
    value: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    def solution(self, k: int) -> BilinearSolution:
        if not self.feasible[k]:
            return BilinearSolution(BilinearStatus.INFEASIBLE)
        x1, y1 = float(self.x1[k]), float(self.y1[k])
        return BilinearSolution(
            BilinearStatus.OPTIMAL,
            x=np.array([x1, self.d2[k] - x1]),
            y=np.array([y1, self.d3[k] - y1]),
            value=float(self.value[k]),
        )


def _gamma_arrays(A, B, c, cp, d1, d2, d3):
    a11, a12, a21, a22 = A[:, 0, 0], A[:, 0, 1], A[:, 1, 0], A[:, 1, 1]
    b11, b12, b21, b22 = B[:, 0, 0], B[:, 0, 1], B[:, 1, 0], B[:, 1, 1]
    g1 = a11 - a12 - a21 + a22
    g2 = a12 * d3 - a22 * d3 + c[:, 0] - c[:, 1]
    g3 = a21 * d2 - a22 * d2 + cp[:, 0] - cp[:, 1]
    g4 = b11 - b12 - b21 + b22
    g5 = b12 * d3 - b22 * d3
    g6 = b21 * d2 - b22 * d2
    g7 = b22 * d2 * d3 - d1
    const = a22 * d2 * d3 + c[:, 1] * d2 + cp[:, 1] * d3
    return g1, g2, g3, g4, g5, g6, g7, const


def _as_batch(p: BilinearProblem2x2):
    return (
        p.A[None], p.B[None], p.c[None], p.c_prime[None],
        np.array([p.d1]), np.array([p.d2]), np.array([p.d3]),
    )


def gammas(p: BilinearProblem2x2) -> Gammas:
    return Gammas(*(float(v[0]) for v in _gamma_arrays(*_as_batch(p))))


def feasibility_intervals(
    p: BilinearProblem2x2, y1: float, case_tol: float = DEFAULT_CASE_TOLERANCE
) -> tuple[tuple[float, float], ...]:
    """Feasible x1 for a fixed y1: zero or one closed interval."""
    g = gammas(p)
    lead = g.g4 * y1 + g.g5
    rest = g.g6 * y1 + g.g7
    if abs(lead) <= case_tol:
        return ((0.0, p.d2),) if rest >= 0 else ()
    ratio = -rest / lead
    if lead > 0:
        lo = max(ratio, 0.0)
        return ((lo, p.d2),) if lo <= p.d2 else ()
    hi = min(ratio, p.d2)
    return ((0.0, hi),) if hi >= 0 else ()


def _stationary_points(g1, g2, g3, g4, g5, g6, g7):
    """Roots of the numerator of d/dy [(g1 y + g2) r(y) + g3 y]."""
    qa = g3 * g4 * g4 - g1 * g4 * g6
    qb = 2.0 * (g3 * g4 * g5 - g1 * g5 * g6)
    qc = g3 * g5 * g5 - g1 * g5 * g7 - g2 * g5 * g6 + g2 * g4 * g7

    scale = np.maximum(np.maximum(np.abs(qa), np.abs(qb)), np.abs(qc))
    linear = np.abs(qa) <= 1e-12 * scale
    disc = qb * qb - 4.0 * qa * qc
    disc = np.where((disc < 0) & (disc > -1e-12 * qb * qb), 0.0, disc)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        sq = np.sqrt(disc)
        q = -0.5 * (qb + np.copysign(sq, qb))
        root1 = np.where(linear, -qc / qb, q / qa)
        root2 = np.where(linear, np.nan, qc / q)
    return root1, root2


def solve_bilinear_batch(
    A,
    B,
    d1,
    c=None,
    c_prime=None,
    d2=1.0,
    d3=1.0,
    case_tol: float = DEFAULT_CASE_TOLERANCE,
    feas_tol: float = DEFAULT_FEASIBILITY_TOLERANCE,
) -> BilinearBatch:
    """Solve K programs at once. A, B: (K,2,2); c, c_prime: (K,2) or None; d*: scalar or (K,)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    K = A.shape[0]
    c = np.zeros((K, 2)) if c is None else np.broadcast_to(np.asarray(c, dtype=float), (K, 2))
    cp = np.zeros((K, 2)) if c_prime is None else np.broadcast_to(np.asarray(c_prime, dtype=float), (K, 2))
    d1 = np.broadcast_to(np.asarray(d1, dtype=float), (K,))
    d2 = np.broadcast_to(np.asarray(d2, dtype=float), (K,))
    d3 = np.broadcast_to(np.asarray(d3, dtype=float), (K,))

    g1, g2, g3, g4, g5, g6, g7, _ = _gamma_arrays(A, B, c, cp, d1, d2, d3)
    zeros = np.zeros(K)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ys = np.stack(
            [
                zeros,
                d3,
                -g5 / g4,  # sign change of g4 y + g5
                -g7 / g6,  # ratio hits 0
                -(g7 + d2 * g5) / (g6 + d2 * g4),  # ratio hits d2
                -g2 / g1,  # slope in x1 changes sign
                *_stationary_points(g1, g2, g3, g4, g5, g6, g7),
            ],
            axis=1,
        )
    ys = np.where(np.isfinite(ys), ys, 0.0)
    ys = np.clip(ys, 0.0, d3[:, None])

    lead = g4[:, None] * ys + g5[:, None]
    rest = g6[:, None] * ys + g7[:, None]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = -rest / lead
    ratio = np.where((np.abs(lead) <= case_tol) | ~np.isfinite(ratio), 0.0, ratio)
    ratio = np.clip(ratio, 0.0, d2[:, None])

    xs = np.stack([np.zeros_like(ys), np.broadcast_to(d2[:, None], ys.shape), ratio], axis=2)
    ys3 = np.broadcast_to(ys[:, :, None], xs.shape)

    b_scale = np.abs(B).sum(axis=(1, 2)) * d2 * d3 + np.abs(d1) + 1.0
    residual = lead[:, :, None] * xs + rest[:, :, None]
    feasible = residual >= -feas_tol * b_scale[:, None, None]

    objective = g1[:, None, None] * xs * ys3 + g2[:, None, None] * xs + g3[:, None, None] * ys3
    objective = np.where(feasible, objective, -np.inf)
    flat = objective.reshape(K, -1)
    best = np.argmax(flat, axis=1)
    rows = np.arange(K)
    x1 = xs.reshape(K, -1)[rows, best]
    y1 = ys3.reshape(K, -1)[rows, best]
    any_feasible = feasible.reshape(K, -1).any(axis=1)

    x2 = d2 - x1
    y2 = d3 - y1
    value = (
        A[:, 0, 0] * x1 * y1 + A[:, 0, 1] * x1 * y2 + A[:, 1, 0] * x2 * y1 + A[:, 1, 1] * x2 * y2
        + c[:, 0] * x1 + c[:, 1] * x2 + cp[:, 0] * y1 + cp[:, 1] * y2
    )
    value = np.where(any_feasible, value, -np.inf)
    return BilinearBatch(feasible=any_feasible, x1=x1, y1=y1, value=value, d2=d2, d3=d3)


def solve_bilinear_2x2(
    p: BilinearProblem2x2,
    case_tol: float = DEFAULT_CASE_TOLERANCE,
    feas_tol: float = DEFAULT_FEASIBILITY_TOLERANCE,
) -> BilinearSolution:
    A, B, c, cp, d1, d2, d3 = _as_batch(p)
    batch = solve_bilinear_batch(A, B, d1, c, cp, d2, d3, case_tol=case_tol, feas_tol=feas_tol)
    return batch.solution(0)
