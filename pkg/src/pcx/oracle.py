"""Brute-force verification for the least-squares solver.

Exhaustive grid search over the sum-zero hyperplane for n = 3 and n = 4 (the
objective is smooth and coercive, so a refined grid brackets the global
minimum), plus central finite differences. This module is the test ground
truth for the Newton solver and the convexity analysis; it is deliberately
not a production solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import UnsupportedSize
from .matrix import PCMatrix
from .solvers import LogPoint

_REFINE_SHRINK = 0.1


@dataclass(frozen=True)
class GridSpec:
    """Grid geometry: odd points per axis so the center is always sampled.

    ``half_width=None`` derives log(max entry) + 1 from the matrix, wide
    enough to contain every minimizer by coercivity.
    """

    half_width: float | None = None
    points_per_axis: int = 601
    refine_rounds: int = 2

    def __post_init__(self):
        if self.half_width is not None and not (self.half_width > 0):
            raise ValueError("half_width must be positive")
        if self.points_per_axis < 3 or self.points_per_axis % 2 == 0:
            raise ValueError("points_per_axis must be odd and >= 3")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be >= 0")

    def resolve_half_width(self, A: PCMatrix) -> float:
        if self.half_width is not None:
            return self.half_width
        return math.log(A.max_entry()) + 1.0


def _full_point(free: np.ndarray) -> np.ndarray:
    t = np.append(free, -free.sum())
    return t - t.mean()  # kill rounding drift off the hyperplane


def _scan_3(A: PCMatrix, center: np.ndarray, hw: float, points: int):
    g1 = np.linspace(center[0] - hw, center[0] + hw, points)
    g2 = np.linspace(center[1] - hw, center[1] + hw, points)
    V = _kernels.grid_values_3(A.upper[0], A.upper[1], A.upper[2], g1, g2)
    flat = int(np.argmin(V))  # first occurrence = lexicographic tie-break
    i, j = divmod(flat, points)
    return float(V[i, j]), np.array([g1[i], g2[j]]), (g1, g2, V)


def _scan_4(A: PCMatrix, center: np.ndarray, hw: float, points: int):
    grids = [np.linspace(c - hw, c + hw, points) for c in center]
    best, i, j, k = _kernels.grid_min_4(A.upper, *grids)
    return best, np.array([grids[0][i], grids[1][j], grids[2][k]]), None


def grid_min_lsm(A: PCMatrix, spec: GridSpec | None = None) -> tuple[LogPoint, float]:
    """Grid-search minimum of the log-domain objective (n = 3 or 4).

    Each refinement round shrinks the window tenfold around the incumbent;
    the incumbent stays on the new grid, so the best value never regresses.
    """
    spec = spec or GridSpec()
    if A.n not in (3, 4):
        raise UnsupportedSize(f"grid oracle supports n=3 or n=4, got n={A.n}")
    scan = _scan_3 if A.n == 3 else _scan_4
    hw = spec.resolve_half_width(A)
    center = np.zeros(A.n - 1)
    best_val, best_free = math.inf, center
    for _ in range(1 + spec.refine_rounds):
        val, free, _ = scan(A, center, hw, spec.points_per_axis)
        if val < best_val:
            best_val, best_free = val, free
        center = best_free
        hw *= _REFINE_SHRINK
    return LogPoint(_full_point(best_free)), best_val


def grid_local_minima(A: PCMatrix, spec: GridSpec | None = None, distinct_tol: float = 1e-4) -> list[LogPoint]:
    """All interior grid points strictly better than their 8 neighbours (n = 3).

    Nearby minima within ``distinct_tol`` (sup-norm in t) merge into one.
    Sorted by objective, then lexicographically.
    """
    spec = spec or GridSpec()
    if A.n != 3:
        raise UnsupportedSize(f"local-minima scan supports n=3 only, got n={A.n}")
    hw = spec.resolve_half_width(A)
    _, _, (g1, g2, V) = _scan_3(A, np.zeros(2), hw, spec.points_per_axis)
    mask = _kernels.local_min_mask(V)
    ii, jj = np.nonzero(mask)
    cands = sorted(
        ((float(V[i, j]), float(g1[i]), float(g2[j])) for i, j in zip(ii, jj)),
        key=lambda c: (c[0], c[1], c[2]),
    )
    kept: list[tuple[float, float, float]] = []
    for v, x, y in cands:
        if all(max(abs(x - kx), abs(y - ky)) > distinct_tol for _, kx, ky in kept):
            kept.append((v, x, y))
    return [LogPoint(_full_point(np.array([x, y]))) for _, x, y in kept]


def finite_diff(fn, x: float, step: float, order: int = 1) -> float:
    """Central finite difference of a scalar function at ``x``."""
    if step <= 0:
        raise ValueError("step must be positive")
    if order == 1:
        return (fn(x + step) - fn(x - step)) / (2.0 * step)
    if order == 2:
        return (fn(x + step) - 2.0 * fn(x) + fn(x - step)) / (step * step)
    raise ValueError("order must be 1 or 2")
