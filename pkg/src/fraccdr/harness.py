"""Convergence-study driver: coupled mesh refinement, CSV reports, SVG plots.

A study solves one problem on a ladder of meshes ``h = 2**-l`` with the
time step either coupled as ``k = h**(4/(2-lam/2))`` (so the temporal
and spatial error contributions shrink at the same rate and a single
combined rate near 4 is observable) or supplied explicitly.  Reported
rates are ``log2`` ratios of consecutive errors.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, ContractError, SolverError
from .problems import Problem, error_vs_exact, example1, example2, problem_from_config
from .spatial import GridSpec, space_time_l2_norm
from .stepper import run
from .weights import FractionalParams

__all__ = [
    "StudyConfig",
    "StudyRow",
    "ConvergenceReport",
    "coupled_time_step",
    "run_study",
    "rates_from_errors",
    "emit_csv",
    "emit_plot",
    "load_config_file",
]


@dataclass
class StudyConfig:
    problem: str  # "example1", "example2", or a config-file path
    lam: float
    levels: list[int]
    couple_time: bool = True
    k_list: list[float] | None = None
    norm: str = "l2_l2"
    out_csv: str | None = None
    out_svg: str | None = None
    check_properties: bool = False
    stop_below: float | None = None  # stop refining once error < this

    def __post_init__(self):
        if not self.levels:
            raise ConfigError("levels must be non-empty")
        if any(b <= a for a, b in zip(self.levels, self.levels[1:])):
            raise ConfigError("levels must be strictly increasing")
        if not self.couple_time:
            if self.k_list is None or len(self.k_list) != len(self.levels):
                raise ConfigError("independent mode needs one k per level")
        if self.norm not in ("l2_l2", "linf_l2"):
            raise ConfigError(f"unknown norm {self.norm!r}")


@dataclass
class StudyRow:
    h: float
    k: float
    exact_norm: float | None
    numeric_norm: float | None
    error: float | None
    rate: float | None
    wall_time: float
    failure: str | None = None


@dataclass
class ConvergenceReport:
    rows: list[StudyRow]
    metadata: dict = field(default_factory=dict)


def coupled_time_step(lam: float, h: float, T: float = 1.0) -> tuple[float, int]:
    """Raw coupled step ``h**(4/(2-lam/2))`` snapped to k = T/N, N integer.

    Rounding N up only sharpens the temporal resolution, so the combined
    rate measurement is preserved.
    """
    k_raw = h ** (4.0 / (2.0 - lam / 2.0))
    n = max(1, math.ceil(T / k_raw))
    return T / n, n


def _resolve_problem(cfg: StudyConfig) -> Problem:
    if cfg.problem == "example1":
        return example1(cfg.lam)
    if cfg.problem == "example2":
        return example2(cfg.lam)
    path = Path(cfg.problem)
    if not path.exists():
        raise ConfigError(f"problem {cfg.problem!r} is neither built-in nor a file")
    entries = load_config_file(path)
    return problem_from_config(entries, cfg.lam)


def _sample_exact_history(prob: Problem, grid: GridSpec):
    from .caputo import HalfStepHistory

    hist = HalfStepHistory(grid, capacity=2 * grid.N + 1)
    for m in range(2 * grid.N + 1):
        hist.append(np.asarray(prob.exact(grid.xs, 0.5 * m * grid.k), dtype=float))
    return hist


def run_study(cfg: StudyConfig) -> ConvergenceReport:
    """Run one solver per refinement level, coarse to fine.

    A level whose solve fails is recorded in its row and the study
    continues.  With ``stop_below`` set, refinement stops after the
    first level whose error drops under the threshold.
    """
    prob = _resolve_problem(cfg)
    if prob.exact is None:
        raise ContractError("convergence studies need a problem with an exact solution")
    p = FractionalParams(cfg.lam)
    rows: list[StudyRow] = []
    finest = {}
    prev_err = None
    for idx, level in enumerate(cfg.levels):
        h = 2.0**-level
        M = round(prob.L1 / h)
        if cfg.couple_time:
            k, n = coupled_time_step(cfg.lam, h, prob.T)
        else:
            k_req = cfg.k_list[idx]
            n = max(1, round(prob.T / k_req))
            k = prob.T / n
        grid = GridSpec(M=M, N=n, L1=prob.L1, T=prob.T)
        t0 = time.perf_counter()
        try:
            hist, _diag = run(prob, grid, p)
        except SolverError as exc:
            rows.append(
                StudyRow(h=h, k=k, exact_norm=None, numeric_norm=None, error=None,
                         rate=None, wall_time=time.perf_counter() - t0,
                         failure=str(exc))
            )
            prev_err = None
            continue
        wall = time.perf_counter() - t0
        errs = error_vs_exact(hist, prob)
        err = errs[cfg.norm]
        exact_hist = _sample_exact_history(prob, grid)
        rate = None
        if prev_err is not None and err > 0:
            rate = math.log2(prev_err / err)
        rows.append(
            StudyRow(h=h, k=k, exact_norm=space_time_l2_norm(exact_hist),
                     numeric_norm=space_time_l2_norm(hist), error=err,
                     rate=rate, wall_time=wall)
        )
        prev_err = err
        finest = {
            "xs": grid.xs,
            "numeric_T": np.array(hist.value(float(grid.N))),
            "exact_T": np.asarray(prob.exact(grid.xs, prob.T), dtype=float),
            "level": level,
        }
        if cfg.stop_below is not None and err < cfg.stop_below:
            break
    return ConvergenceReport(
        rows=rows,
        metadata={"lam": cfg.lam, "problem": prob.name, "norm": cfg.norm, **finest},
    )


def rates_from_errors(errors) -> list[float]:
    """``log2`` ratio of consecutive errors; exact 4.0 for errors ~ C 2**(-4r)."""
    return [math.log2(a / b) for a, b in zip(errors, errors[1:])]


def _fmt(v: float | None) -> str:
    return "" if v is None else f"{v:.5e}"


def emit_csv(report: ConvergenceReport, path) -> None:
    """Write the report as CSV with 6-significant-digit scientific floats."""
    if not report.rows:
        raise ContractError("cannot emit an empty report")
    path = Path(path)
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["h", "k", "exact_norm", "numeric_norm", "error", "rate"])
            for r in report.rows:
                w.writerow([_fmt(r.h), _fmt(r.k), _fmt(r.exact_norm),
                            _fmt(r.numeric_norm), _fmt(r.error), _fmt(r.rate)])
    except OSError as exc:
        raise ContractError(f"cannot write CSV to {path}: {exc}") from exc


# --- SVG emission ------------------------------------------------------------

_W, _H, _PAD = 440, 360, 52


def _panel_transform(vals_x, vals_y):
    x0, x1 = min(vals_x), max(vals_x)
    y0, y1 = min(vals_y), max(vals_y)
    if x1 - x0 < 1e-12:
        x0, x1 = x0 - 1, x1 + 1
    if y1 - y0 < 1e-12:
        y0, y1 = y0 - 1, y1 + 1

    def to_px(x, y):
        px = _PAD + (x - x0) / (x1 - x0) * (_W - 2 * _PAD)
        py = _H - _PAD - (y - y0) / (y1 - y0) * (_H - 2 * _PAD)
        return px, py

    return to_px


def _polyline(points, cls, color, width=1.5):
    pts = " ".join(f"{x:.2f},{y:.2f}" for x, y in points)
    return (
        f'<polyline class="{cls}" fill="none" stroke="{color}" '
        f'stroke-width="{width}" points="{pts}"/>'
    )


def emit_plot(report: ConvergenceReport, path) -> None:
    """Self-contained two-panel SVG.

    Left: log2(h) vs log2(error) data points with a slope-4 reference
    line.  Right: exact and numerical solutions at t = T on the finest
    level.  Needs at least two successful rows.
    """
    ok_rows = [r for r in report.rows if r.error is not None and r.error > 0]
    if len(ok_rows) < 2:
        raise ContractError("plot needs at least 2 rows with errors")
    path = Path(path)
    lx = [math.log2(r.h) for r in ok_rows]
    ly = [math.log2(r.error) for r in ok_rows]
    # slope-4 reference anchored at the coarsest point
    ref_y = [ly[0] + 4.0 * (x - lx[0]) for x in lx]
    to_px = _panel_transform(lx, ly + ref_y)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{2 * _W}" height="{_H}" '
        f'viewBox="0 0 {2 * _W} {_H}" font-family="sans-serif" font-size="11">',
        f'<rect width="{2 * _W}" height="{_H}" fill="white"/>',
        "<g>",
        f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" stroke="black"/>',
        f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>',
    ]
    (rx0, ry0), (rx1, ry1) = to_px(lx[0], ref_y[0]), to_px(lx[-1], ref_y[-1])
    parts.append(
        f'<line class="ref4" x1="{rx0:.2f}" y1="{ry0:.2f}" x2="{rx1:.2f}" y2="{ry1:.2f}" '
        'stroke="gray" stroke-dasharray="5,4"/>'
    )
    parts.append(_polyline([to_px(x, y) for x, y in zip(lx, ly)], "errcurve", "#c22"))
    for x, y in zip(lx, ly):
        px, py = to_px(x, y)
        parts.append(f'<circle class="pt" cx="{px:.2f}" cy="{py:.2f}" r="4" fill="#c22"/>')
    parts.append(
        f'<text x="{_W / 2:.0f}" y="{_H - 12}" text-anchor="middle">log2(h)</text>'
    )
    parts.append(
        f'<text x="14" y="{_H / 2:.0f}" text-anchor="middle" '
        f'transform="rotate(-90 14 {_H / 2:.0f})">log2(error)</text>'
    )
    parts.append(
        f'<text x="{_W / 2:.0f}" y="20" text-anchor="middle">'
        f'{report.metadata.get("problem", "study")}: error vs mesh (slope-4 dashed)</text>'
    )
    parts.append("</g>")

    xs = report.metadata.get("xs")
    if xs is not None:
        ue = report.metadata["exact_T"]
        un = report.metadata["numeric_T"]
        to2 = _panel_transform(list(xs), list(ue) + list(un))
        off = _W
        parts.append(f'<g transform="translate({off} 0)">')
        parts.append(
            f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" stroke="black"/>'
        )
        parts.append(f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>')
        parts.append(_polyline([to2(x, y) for x, y in zip(xs, ue)], "exact", "#2a2", 2.5))
        parts.append(_polyline([to2(x, y) for x, y in zip(xs, un)], "numeric", "#22c", 1.2))
        parts.append(
            f'<text x="{_W / 2:.0f}" y="20" text-anchor="middle">'
            "solutions at t = T (exact green, numeric blue)</text>"
        )
        parts.append(f'<text x="{_W / 2:.0f}" y="{_H - 12}" text-anchor="middle">x</text>')
        parts.append("</g>")
    parts.append("</svg>")
    try:
        path.write_text("\n".join(parts))
    except OSError as exc:
        raise ContractError(f"cannot write SVG to {path}: {exc}") from exc


def load_config_file(path) -> dict[str, str]:
    """Flat ``key = value`` text file; '#' starts a comment."""
    entries: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{ln}: expected 'key = value', got {raw!r}")
        key, val = line.split("=", 1)
        entries[key.strip()] = val.strip()
    return entries


def parse_levels(text: str) -> list[int]:
    """Accept '3..6' ranges or comma lists like '3,4,5'."""
    text = text.strip()
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError("empty range")
            return list(range(lo, hi + 1))
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ConfigError(f"cannot parse levels {text!r}: {exc}") from exc
