"""Uniform grid, fourth-order five-point stencils, and discrete norms.

The spatial operator couples each interior node j = 2..M-2 to its four
neighbours; the two layers next to each boundary (j in {0, 1, M-1, M})
are closure data supplied by the problem, never computed.  Norms and the
inner product exclude the boundary nodes j = 0 and j = M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import DimensionError, DomainError, HistoryError, StencilRangeError

if TYPE_CHECKING:  # pragma: no cover
    from .caputo import HalfStepHistory
    from .problems import Problem

__all__ = [
    "GridSpec",
    "stencil_dxx4",
    "stencil_dx4",
    "dxx4_interior",
    "dx4_interior",
    "apply_Lh",
    "l2_norm",
    "inner",
    "space_time_l2_norm",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform space-time mesh: M space intervals on [0, L1], N time steps to T."""

    M: int
    N: int
    L1: float = 1.0
    T: float = 1.0

    def __post_init__(self):
        if self.M < 4:
            raise DomainError("need M >= 4 (five-point stencil uses two layers)")
        if self.N < 1:
            raise DomainError("need N >= 1")
        if not (self.L1 > 0 and self.T > 0):
            raise DomainError("L1 and T must be positive")

    @property
    def h(self) -> float:
        return self.L1 / self.M

    @property
    def k(self) -> float:
        return self.T / self.N

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(0.0, self.L1, self.M + 1)

    def t_of(self, level: float) -> float:
        """Physical time of a (possibly shifted, non-half-integer) level index."""
        return level * self.k


def _check_range(u: np.ndarray, j: int) -> int:
    M = u.shape[0] - 1
    if not 2 <= j <= M - 2:
        raise StencilRangeError(f"stencil index j={j} outside [2, {M - 2}]")
    return M


def stencil_dxx4(u: np.ndarray, j: int, h: float) -> float:
    """Fourth-order second derivative at node j (exact through degree 5)."""
    _check_range(u, j)
    return (-u[j + 2] + 16 * u[j + 1] - 30 * u[j] + 16 * u[j - 1] - u[j - 2]) / (
        12 * h * h
    )


def stencil_dx4(u: np.ndarray, j: int, h: float) -> float:
    """Fourth-order first derivative at node j (exact through degree 4)."""
    _check_range(u, j)
    return (-u[j + 2] + 8 * u[j + 1] - 8 * u[j - 1] + u[j - 2]) / (12 * h)


def dxx4_interior(u: np.ndarray, h: float) -> np.ndarray:
    """Vectorized second-derivative stencil over j = 2..M-2."""
    return (-u[4:] + 16 * u[3:-1] - 30 * u[2:-2] + 16 * u[1:-3] - u[:-4]) / (12 * h * h)


def dx4_interior(u: np.ndarray, h: float) -> np.ndarray:
    """Vectorized first-derivative stencil over j = 2..M-2."""
    return (-u[4:] + 8 * u[3:-1] - 8 * u[1:-3] + u[:-4]) / (12 * h)


def apply_Lh(
    u: np.ndarray, prob: "Problem", grid: GridSpec, t_eval: float
) -> np.ndarray:
    """Spatial operator q u_xx - p u_x - g u on the interior j = 2..M-2."""
    h = grid.h
    x_int = grid.xs[2:-2]
    qv = float(prob.q(t_eval))
    pv = float(prob.p(t_eval))
    gv = np.asarray(prob.g(x_int, t_eval), dtype=float)
    return qv * dxx4_interior(u, h) - pv * dx4_interior(u, h) - gv * u[2:-2]


def l2_norm(u: np.ndarray, h: float) -> float:
    """Discrete L2 norm ``sqrt(h * sum_{j=1}^{M-1} u_j**2)`` (boundaries excluded)."""
    return math.sqrt(h * float(np.dot(u[1:-1], u[1:-1])))


def inner(u: np.ndarray, v: np.ndarray, h: float) -> float:
    """Discrete inner product ``h * sum_{j=1}^{M-1} u_j v_j``."""
    if u.shape != v.shape:
        raise DimensionError(f"grid vectors differ in length: {u.shape} vs {v.shape}")
    return h * float(np.dot(u[1:-1], v[1:-1]))


def space_time_l2_norm(hist: "HalfStepHistory") -> float:
    """Space-time L2 norm over a complete history.

    Rectangle rule with uniform weight k/2 over all 2N half levels
    l = 1/2, 1, ..., N (level 0 excluded).  This scalar is what
    convergence reports tabulate per run.
    """
    grid = hist.grid
    expect = 2 * grid.N + 1
    if len(hist) != expect:
        raise HistoryError(f"history holds {len(hist)} levels, expected {expect}")
    arr = hist.as_array()
    h, k = grid.h, grid.k
    sq = h * np.sum(arr[1:, 1:-1] ** 2, axis=1)
    return math.sqrt(0.5 * k * float(np.sum(sq)))
