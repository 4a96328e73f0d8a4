"""Shared test helpers.

The dense reference here is an independent transcription of the two
sub-step systems: scalar formulas, dense matrices, numpy.linalg.solve.
It shares no code with the package's banded assembly/solver, so
agreement between the two is a real check.
"""

import math

import numpy as np
import pytest

from fraccdr import GridSpec, HalfStepHistory


def make_history(grid: GridSpec, fn) -> HalfStepHistory:
    """History sampled from a callable fn(x, t) (or fn(t) broadcast over x)."""
    hist = HalfStepHistory(grid, capacity=2 * grid.N + 1)
    xs = grid.xs
    for m in range(2 * grid.N + 1):
        t = 0.5 * m * grid.k
        try:
            v = np.asarray(fn(xs, t), dtype=float) * np.ones(grid.M + 1)
        except TypeError:
            v = np.full(grid.M + 1, float(fn(t)))
        hist.append(v)
    return hist


# --- independent dense transcription of the scheme ---------------------------


def _wts(lam):
    a = 1.0 - lam

    def d_half(i, l):
        return (i + a - l) ** (1 - lam) - (i + a - l - 1) ** (1 - lam)

    def f_half(i, l):
        if l == i:
            return a ** (1 - lam)
        return (2 / (2 - lam)) * ((i + a - l) ** (2 - lam) - (i + a - l - 1) ** (2 - lam)) \
            - 0.5 * ((i + a - l) ** (1 - lam) + 3 * (i + a - l - 1) ** (1 - lam))

    def fdot_half(i):
        return (i + 0.5 + a) ** (1 - lam) - (i + a) ** (1 - lam)

    def d_full(i, l):
        return (i + 1 + a - l) ** (1 - lam) - (i + a - l) ** (1 - lam)

    def f_full(i, l):
        if l == i + 1:
            return a ** (1 - lam)
        return (2 / (2 - lam)) * ((i + 1 + a - l) ** (2 - lam) - (i + a - l) ** (2 - lam)) \
            - 0.5 * ((i + 1 + a - l) ** (1 - lam) + 3 * (i + a - l) ** (1 - lam))

    return d_half, f_half, fdot_half, d_full, f_full


def dense_system(prob, grid, lam, i, levels, kind):
    """Dense (A, rhs) for sub-step i of the given kind ('half' or 'full').

    ``levels`` is the list of solution vectors at half levels 0..(current).
    """
    d_half, f_half, fdot_half, d_full, f_full = _wts(lam)
    a = 1.0 - lam
    M, h, k = grid.M, grid.h, grid.k
    sc = k ** (1 - lam) / math.gamma(2 - lam)
    xs = grid.xs
    c = (1 + 2 * a) * k / (24 * h * h)
    hw = (1 + 2 * a) * k / 2

    def dt(m):  # delta_t at half-level index m/2
        return (levels[m + 1] - levels[m]) * 2.0 / k

    if kind == "half":
        t_star = (i + 0.5 + a) * k
        t_new, t_old = (i + 0.5) * k, i * k
        F = sc * ((0.5 + a) ** (1 - lam) if i == 0 else f_half(i, i) + f_half(i, i - 1))
        base = levels[2 * i]
    else:
        t_star = (i + 1.0 + a) * k
        t_new, t_old = (i + 1.0) * k, (i + 0.5) * k
        F = sc * (f_full(i, i + 1) + f_full(i, i))
        base = levels[2 * i + 1]

    bn = np.asarray(prob.boundary(xs[[0, 1, M - 1, M]], t_new), dtype=float)
    bo = np.asarray(prob.boundary(xs[[0, 1, M - 1, M]], t_old), dtype=float)
    avg_b = {0: 0, 1: 1, M - 1: 2, M: 3}
    bvals = (1 + 2 * a) * bn - 2 * a * bo

    qv, pv = float(prob.q(t_star)), float(prob.p(t_star))
    n = M - 3
    A = np.zeros((n, n))
    rhs = np.zeros(n)
    for row, j in enumerate(range(2, M - 1)):
        gv = float(np.asarray(prob.g(xs[j], t_star)))
        sv = float(np.asarray(prob.s(xs[j], t_star)))
        mem = 0.0
        if kind == "half" and i >= 1:
            mem += fdot_half(i) * dt(0)[j]
            mem += (d_half(i, i - 1) - f_half(i, i - 1)) * dt(2 * i - 1)[j]
            for l in range(i - 1):
                mem += f_half(i, l) * dt(2 * l + 2)[j]
                mem += (d_half(i, l) - f_half(i, l)) * dt(2 * l + 1)[j]
        if kind == "full":
            mem += (d_full(i, i) - f_full(i, i)) * dt(2 * i)[j]
            for l in range(i):
                mem += f_full(i, l) * dt(2 * l + 1)[j]
                mem += (d_full(i, l) - f_full(i, l)) * dt(2 * l)[j]
        rhs[row] = F * base[j] + hw * (sv - sc * mem)
        stencil = {
            j - 2: c * (qv + h * pv),
            j - 1: -c * (16 * qv + 8 * h * pv),
            j: F + c * (30 * qv + 12 * h * h * gv),
            j + 1: -c * (16 * qv - 8 * h * pv),
            j + 2: c * (qv - h * pv),
        }
        for cj, v in stencil.items():
            if cj in avg_b:
                rhs[row] -= v * bvals[avg_b[cj]]
            else:
                A[row, cj - 2] += v
    return A, rhs


def dense_reference_march(prob, grid, lam, n_steps):
    """March n_steps full steps with the dense transcription; returns levels."""
    a = 1.0 - lam
    M, k = grid.M, grid.k
    xs = grid.xs
    levels = [np.asarray(prob.psi1(xs), dtype=float) * np.ones(M + 1)]
    for i in range(n_steps):
        for kind, t_new in (("half", (i + 0.5) * k), ("full", (i + 1.0) * k)):
            A, rhs = dense_system(prob, grid, lam, i, levels, kind)
            avg = np.linalg.solve(A, rhs)
            base = levels[-1]
            new = np.empty(M + 1)
            new[2:-2] = (avg + 2 * a * base[2:-2]) / (1 + 2 * a)
            new[[0, 1, M - 1, M]] = np.asarray(
                prob.boundary(xs[[0, 1, M - 1, M]], t_new), dtype=float
            )
            levels.append(new)
    return levels


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
