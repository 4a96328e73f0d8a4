"""Pentadiagonal system assembly and a banded LU solver with partial pivoting.

Each sub-step of the scheme solves for the averaged unknowns
``U^{alpha_i}`` or ``U^{theta_i}`` at the interior nodes j = 2..M-2
(n = M-3 unknowns).  The four boundary-layer values are known data and
are folded into the right-hand side at assembly time, keeping the matrix
strictly pentadiagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import caputo as _caputo
from .errors import DomainError, SingularMatrixError
from .spatial import GridSpec
from .weights import FractionalParams

__all__ = ["PentaSystem", "assemble_half", "assemble_full", "solve_penta"]

_KL = 2  # subdiagonals
_KU = 2  # superdiagonals before fill-in


@dataclass
class PentaSystem:
    """Five-band matrix (row-indexed diagonals at offsets -2..+2) plus rhs.

    Band entries that would fall outside the matrix are identically zero:
    ``sub2[0:2] == sub1[0:1] == sup1[-1:] == sup2[-2:] == 0``.
    """

    n: int
    sub2: np.ndarray
    sub1: np.ndarray
    diag: np.ndarray
    sup1: np.ndarray
    sup2: np.ndarray
    rhs: np.ndarray

    def to_dense(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        idx = np.arange(self.n)
        A[idx, idx] = self.diag
        A[idx[1:], idx[1:] - 1] = self.sub1[1:]
        A[idx[2:], idx[2:] - 2] = self.sub2[2:]
        A[idx[:-1], idx[:-1] + 1] = self.sup1[:-1]
        A[idx[:-2], idx[:-2] + 2] = self.sup2[:-2]
        return A

    def matvec(self, x: np.ndarray) -> np.ndarray:
        y = self.diag * x
        y[1:] += self.sub1[1:] * x[:-1]
        y[2:] += self.sub2[2:] * x[:-2]
        y[:-1] += self.sup1[:-1] * x[1:]
        y[:-2] += self.sup2[:-2] * x[2:]
        return y

    def residual_inf(self, x: np.ndarray) -> float:
        return float(np.max(np.abs(self.matvec(x) - self.rhs)))

    def row_dominance_margin(self) -> float:
        """min over rows of |diag| - sum|off-diagonals| (positive = strictly dominant)."""
        off = np.abs(self.sub2) + np.abs(self.sub1) + np.abs(self.sup1) + np.abs(self.sup2)
        return float(np.min(np.abs(self.diag) - off))


def _spatial_bands(qv: float, pv: float, gv: np.ndarray, c: float, h: float, fsum: float):
    n = gv.shape[0]
    sub2 = np.full(n, c * (qv + h * pv))
    sub1 = np.full(n, -c * (16.0 * qv + 8.0 * h * pv))
    sup1 = np.full(n, -c * (16.0 * qv - 8.0 * h * pv))
    sup2 = np.full(n, c * (qv - h * pv))
    diag = fsum + c * (30.0 * qv + 12.0 * h * h * gv)
    return sub2, sub1, diag, sup1, sup2


def _fold_boundaries(system_bands, rhs, avg_boundary):
    """Move known boundary-layer unknowns (j = 0, 1, M-1, M) to the rhs."""
    sub2, sub1, diag, sup1, sup2 = system_bands
    b0, b1, bm1, bm = avg_boundary
    rhs[0] -= sub2[0] * b0 + sub1[0] * b1
    if rhs.shape[0] >= 2:
        rhs[1] -= sub2[1] * b1
        rhs[-2] -= sup2[-2] * bm1
    rhs[-1] -= sup1[-1] * bm1 + sup2[-1] * bm
    sub2[:2] = 0.0
    sub1[:1] = 0.0
    sup1[-1:] = 0.0
    sup2[-2:] = 0.0


def _assemble(prob, grid: GridSpec, p: FractionalParams, t_star: float,
              fsum: float, base_vec: np.ndarray, memory: np.ndarray,
              avg_boundary) -> PentaSystem:
    h, k = grid.h, grid.k
    x_int = grid.xs[2:-2]
    n = x_int.shape[0]
    qv = float(prob.q(t_star))
    pv = float(prob.p(t_star))
    gv = np.asarray(prob.g(x_int, t_star), dtype=float) * np.ones(n)
    sv = np.asarray(prob.s(x_int, t_star), dtype=float) * np.ones(n)
    c = (1.0 + 2.0 * p.alpha) * k / (24.0 * h * h)
    half_wk = (1.0 + 2.0 * p.alpha) * k / 2.0
    bands = _spatial_bands(qv, pv, gv, c, h, fsum)
    rhs = fsum * base_vec[2:-2] + half_wk * (sv - memory[2:-2])
    _fold_boundaries(bands, rhs, avg_boundary)
    sub2, sub1, diag, sup1, sup2 = bands
    return PentaSystem(n=n, sub2=sub2, sub1=sub1, diag=diag, sup1=sup1, sup2=sup2, rhs=rhs)


def _avg_boundary(prob, grid: GridSpec, alpha: float, t_new: float, t_old: float):
    xb = grid.xs[[0, 1, grid.M - 1, grid.M]]
    newv = np.asarray(prob.boundary(xb, t_new), dtype=float)
    oldv = np.asarray(prob.boundary(xb, t_old), dtype=float)
    return tuple((1.0 + 2.0 * alpha) * newv - 2.0 * alpha * oldv)


def assemble_half(prob, grid: GridSpec, p: FractionalParams, i: int,
                  hist, weights=None) -> PentaSystem:
    """System for the averaged unknown ``U^{alpha_i}`` at sub-step ``t_{i+1/2+alpha}``.

    Requires history through level i.  The rhs combines the f-sum term
    anchored at ``U^i``, the scaled memory sum over earlier differences,
    the source at the shifted time, and the boundary fold-in.  Passing
    the per-level ``weights`` avoids recomputing them.
    """
    k = grid.k
    t_star = (i + 0.5 + p.alpha) * k
    fsum = _caputo.fsum_half(p, i, k, weights)
    memory = _caputo.known_memory_half(hist, p, i, weights)
    base = hist.value(float(i))
    avg_b = _avg_boundary(prob, grid, p.alpha, (i + 0.5) * k, i * k)
    return _assemble(prob, grid, p, t_star, fsum, base, memory, avg_b)


def assemble_full(prob, grid: GridSpec, p: FractionalParams, i: int,
                  hist, weights=None) -> PentaSystem:
    """System for the averaged unknown ``U^{theta_i}`` at sub-step ``t_{i+1+alpha}``.

    Requires history through level i+1/2.
    """
    k = grid.k
    t_star = (i + 1.0 + p.alpha) * k
    fsum = _caputo.fsum_full(p, i, k, weights)
    memory = _caputo.known_memory_full(hist, p, i, weights)
    base = hist.value(i + 0.5)
    avg_b = _avg_boundary(prob, grid, p.alpha, (i + 1.0) * k, (i + 0.5) * k)
    return _assemble(prob, grid, p, t_star, fsum, base, memory, avg_b)


def solve_penta(sys: PentaSystem) -> np.ndarray:
    """Banded Gaussian elimination with partial pivoting.

    Row swaps widen the upper bandwidth from 2 to at most ``kl + ku = 4``,
    so the band store reserves ``kl + (kl + ku) + 1 = 7`` rows with the
    layout ``ab[reach + i - j, j] = A[i, j]``, ``reach = kl + ku``.
    Forward elimination is applied to the right-hand side in the same
    sweep; back substitution finishes the solve.
    """
    n = sys.n
    if n < 1:
        raise DomainError("system must have at least one unknown")
    kl = _KL
    width = kl + (_KL + _KU) + 1  # window -2..+4 after pivot fill
    # W[i, c] holds A[i, i - 2 + c]; out-of-matrix slots stay zero
    W = np.zeros((n, width))
    W[:, 2] = sys.diag
    W[:, 1] = sys.sub1
    W[:, 0] = sys.sub2
    W[:, 3] = sys.sup1
    W[:, 4] = sys.sup2

    b = sys.rhs.astype(float).copy()
    scale = float(np.max(np.abs(W))) or 1.0
    for j in range(n):
        depth = min(kl, n - 1 - j)
        # candidate pivots A[j+dd, j] = W[j+dd, 2-dd]
        best, ip = abs(W[j, 2]), 0
        for dd in range(1, depth + 1):
            v = abs(W[j + dd, 2 - dd])
            if v > best:
                best, ip = v, dd
        if best <= 1e-300 * scale:
            raise SingularMatrixError(f"zero pivot in column {j}")
        if ip:
            r = j + ip
            # rows j and r over columns j..j+4
            tmp = W[j, 2:7].copy()
            W[j, 2:7] = W[r, 2 - ip : 7 - ip]
            W[r, 2 - ip : 7 - ip] = tmp
            b[j], b[r] = b[r], b[j]
        d = W[j, 2]
        for dd in range(1, depth + 1):
            m = W[j + dd, 2 - dd] / d
            if m != 0.0:
                W[j + dd, 3 - dd : 7 - dd] -= m * W[j, 3:7]
                b[j + dd] -= m * b[j]
            W[j + dd, 2 - dd] = 0.0

    xp = np.zeros(n + 4)  # padded so the window dot never leaves bounds
    for i in range(n - 1, -1, -1):
        xp[i] = (b[i] - float(np.dot(W[i, 3:7], xp[i + 1 : i + 5]))) / W[i, 2]
    return xp[:n]
