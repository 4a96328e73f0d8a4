"""Time marching for the two-level scheme.

Each full step advances in two implicit sub-steps: solve a pentadiagonal
system for the averaged unknown, recover the half-level (or full-level)
values from the averaging identity, prescribe the four boundary-layer
nodes from the problem data, and append the level to the history.  The
march is strictly sequential in i because of the Caputo memory; distinct
runs share no state.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .caputo import HalfStepHistory
from .errors import ContractError, FracCDRError, SolverError
from .linsys import assemble_full, assemble_half, solve_penta
from .problems import Problem
from .spatial import GridSpec
from .weights import (
    FractionalParams,
    full_level_weights,
    half_level_weights,
    stability_condition,
)

__all__ = ["StepState", "Diagnostics", "init", "advance_half", "advance_full", "run"]


@dataclass
class Diagnostics:
    stability_flags: list = field(default_factory=list)  # (i, kind, ok, residual)
    max_solve_residual: float = 0.0
    wall_time: float = 0.0

    def all_stable(self) -> bool:
        return all(ok for (_, _, ok, _) in self.stability_flags)


@dataclass
class StepState:
    problem: Problem
    grid: GridSpec
    params: FractionalParams
    hist: HalfStepHistory
    i: int = 0
    diagnostics: Diagnostics = field(default_factory=Diagnostics)


def init(prob: Problem, grid: GridSpec, p: FractionalParams) -> StepState:
    """Fill level 0 with the initial data and validate the run inputs."""
    if prob.boundary is None:
        raise ContractError("problem must supply two-layer boundary data")
    if prob.time_limit < grid.T + p.alpha * grid.k - 1e-12:
        raise ContractError(
            f"problem time domain [0, {prob.time_limit}] does not cover the "
            f"shifted evaluation times up to {grid.T + p.alpha * grid.k}"
        )
    hist = HalfStepHistory(grid, capacity=2 * grid.N + 1)
    u0 = np.asarray(prob.psi1(grid.xs), dtype=float) * np.ones(grid.M + 1)
    hist.append(u0)
    return StepState(problem=prob, grid=grid, params=p, hist=hist)


def _boundary_vals(prob: Problem, grid: GridSpec, t: float) -> np.ndarray:
    xb = grid.xs[[0, 1, grid.M - 1, grid.M]]
    return np.asarray(prob.boundary(xb, t), dtype=float) * np.ones(4)


def _advance(state: StepState, kind: str) -> StepState:
    grid, p, prob = state.grid, state.params, state.problem
    i = state.i
    alpha = p.alpha
    if kind == "half":
        w = half_level_weights(p, i)
        sysm = assemble_half(prob, grid, p, i, state.hist, weights=w)
        t_new = (i + 0.5) * grid.k
        base = state.hist.value(float(i))
    else:
        w = full_level_weights(p, i)
        sysm = assemble_full(prob, grid, p, i, state.hist, weights=w)
        t_new = (i + 1.0) * grid.k
        base = state.hist.value(i + 0.5)
    try:
        avg = solve_penta(sysm)
    except FracCDRError as exc:
        raise SolverError(
            f"{kind}-step solve failed at i={i}: {exc}",
            step_index=i,
            partial_history=state.hist,
        ) from exc
    res = sysm.residual_inf(avg)
    state.diagnostics.max_solve_residual = max(state.diagnostics.max_solve_residual, res)

    new = np.empty(grid.M + 1)
    new[2:-2] = (avg + 2.0 * alpha * base[2:-2]) / (1.0 + 2.0 * alpha)
    new[[0, 1, grid.M - 1, grid.M]] = _boundary_vals(prob, grid, t_new)
    state.hist.append(new)

    if kind == "full" or i >= 1:
        ok, residual = stability_condition(p, i, kind, weights=w)
        state.diagnostics.stability_flags.append((i, kind, ok, residual))
    return state


def advance_half(state: StepState) -> StepState:
    """Append level i + 1/2 by solving for ``U^{alpha_i}`` and un-averaging."""
    return _advance(state, "half")


def advance_full(state: StepState) -> StepState:
    """Append level i + 1 by solving for ``U^{theta_i}``; increments i."""
    state = _advance(state, "full")
    state.i += 1
    return state


def run(
    prob: Problem, grid: GridSpec, p: FractionalParams
) -> tuple[HalfStepHistory, Diagnostics]:
    """March from t = 0 to t = T, returning the full history and diagnostics."""
    t0 = time.perf_counter()
    state = init(prob, grid, p)
    for _ in range(grid.N):
        state = advance_half(state)
        state = advance_full(state)
    state.diagnostics.wall_time = time.perf_counter() - t0
    return state.hist, state.diagnostics
