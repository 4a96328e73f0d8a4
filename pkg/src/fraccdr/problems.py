"""Problem definitions: coefficients, data, manufactured test cases.

A :class:`Problem` bundles the time-dependent diffusion ``q`` and
convection ``p`` coefficients, the reaction ``g`` and source ``s``
fields, initial data ``psi1``, two-layer boundary data, and (optionally)
an exact solution.  Coefficients must be defined slightly beyond the
final time because the scheme evaluates them at shifted times up to
``T + alpha*k``; both built-in problems are entire in t so the extension
is plain evaluation.

``q(t)`` and ``p(t)`` take a scalar time.  ``g``, ``s``, ``boundary``
and ``exact`` take ``(x, t)`` with ``x`` scalar or ndarray and scalar
``t``; ``psi1`` takes ``x``.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, ContractError, DomainError
from .spatial import l2_norm, space_time_l2_norm

__all__ = [
    "Problem",
    "example1",
    "example2",
    "error_vs_exact",
    "parse_expression",
    "problem_from_config",
]


@dataclass(frozen=True)
class Problem:
    q: Callable[[float], float]
    p: Callable[[float], float]
    g: Callable[..., float]
    s: Callable[..., float]
    psi1: Callable[..., float]
    boundary: Callable[..., float]
    exact: Optional[Callable[..., float]] = None
    L1: float = 1.0
    T: float = 1.0
    t_max: float | None = None  # extended time domain; defaults to T + T/4
    name: str = "custom"

    @property
    def time_limit(self) -> float:
        return self.t_max if self.t_max is not None else 1.25 * self.T

    def sampled_bounds(self, n: int = 64) -> tuple[float, float]:
        """Sampled infima of q and g over the extended domain (diagnostic only)."""
        ts = np.linspace(0.0, self.time_limit, n)
        xs = np.linspace(0.0, self.L1, n)
        qmin = min(float(self.q(t)) for t in ts)
        gmin = min(float(np.min(self.g(xs, t))) for t in ts)
        return qmin, gmin

    def validate(self, n: int = 64) -> None:
        """Sign-condition sampling (q > 0, p >= 0, g >= 0) plus data consistency."""
        ts = np.linspace(0.0, self.time_limit, n)
        xs = np.linspace(0.0, self.L1, n)
        for t in ts:
            if not float(self.q(t)) > 0.0:
                raise DomainError(f"q(t) must be positive; q({t}) <= 0")
            if float(self.p(t)) < 0.0:
                raise DomainError(f"p(t) must be nonnegative; p({t}) < 0")
            if np.min(self.g(xs, t)) < 0.0:
                raise DomainError(f"g(x, {t}) takes negative values")
        if self.exact is not None:
            e0 = np.asarray(self.exact(xs, 0.0), dtype=float)
            p0 = np.asarray(self.psi1(xs), dtype=float) * np.ones_like(xs)
            scale = max(float(np.max(np.abs(e0))), 1.0)
            if np.max(np.abs(e0 - p0)) > 1e-13 * scale:
                raise DomainError("psi1 disagrees with exact(x, 0)")
            xb = np.array([0.0, self.L1 / 8, 7 * self.L1 / 8, self.L1])
            for t in ts[:: max(1, n // 8)]:
                eb = np.asarray(self.exact(xb, t), dtype=float)
                bb = np.asarray(self.boundary(xb, t), dtype=float)
                sc = max(float(np.max(np.abs(eb))), 1.0)
                if np.max(np.abs(eb - bb)) > 1e-13 * sc:
                    raise DomainError("boundary data disagrees with exact solution")


def example1(lam: float) -> Problem:
    """Manufactured problem with exact solution ``u = t sin x`` on the unit square.

    Constant diffusion and convection (q = p = 1), no reaction; the
    source carries a ``t**(1-lam)`` term balancing the fractional
    derivative of t.
    """
    c = 1.0 / math.gamma(2.0 - lam)

    def s(x, t):
        return c * t ** (1.0 - lam) * np.sin(x) + t * (np.sin(x) + np.cos(x))

    def exact(x, t):
        return t * np.sin(x)

    return Problem(
        q=lambda t: 1.0,
        p=lambda t: 1.0,
        g=lambda x, t: np.zeros_like(np.asarray(x, dtype=float)),
        s=s,
        psi1=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        boundary=exact,
        exact=exact,
        L1=1.0,
        T=1.0,
        name=f"example1(lam={lam})",
    )


def example2(lam: float) -> Problem:
    """Manufactured problem with exact solution ``u = t**2 sin(pi x)``.

    Exponential diffusion q = e**t, no convection, oscillatory reaction
    ``g = 1 - sin(2t)`` (nonnegative, touching zero at t = pi/4).
    """
    c = 2.0 / math.gamma(3.0 - lam)

    def s(x, t):
        amp = (
            math.pi**2 * t * t * math.exp(t)
            + t * t * (1.0 - math.sin(2.0 * t))
            + c * t ** (2.0 - lam)
        )
        return amp * np.sin(math.pi * np.asarray(x, dtype=float))

    def exact(x, t):
        return t * t * np.sin(math.pi * np.asarray(x, dtype=float))

    return Problem(
        q=lambda t: math.exp(t),
        p=lambda t: 0.0,
        g=lambda x, t: (1.0 - math.sin(2.0 * t)) * np.ones_like(np.asarray(x, dtype=float)),
        s=s,
        psi1=lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        boundary=exact,
        exact=exact,
        L1=1.0,
        T=1.0,
        name=f"example2(lam={lam})",
    )


def error_vs_exact(hist, prob: Problem) -> dict[str, float]:
    """Error norms of a complete numeric history against the exact solution.

    ``linf_l2`` is the max over half levels of the spatial L2 error;
    ``l2_l2`` is the space-time L2 norm of the error history.
    """
    if prob.exact is None:
        raise ContractError("error_vs_exact requires a problem with an exact solution")
    from .caputo import HalfStepHistory  # local import to avoid a cycle

    grid = hist.grid
    xs = grid.xs
    err_hist = HalfStepHistory(grid, capacity=len(hist))
    linf = 0.0
    for m in range(len(hist)):
        t = 0.5 * m * grid.k
        e = hist.value(0.5 * m) - np.asarray(prob.exact(xs, t), dtype=float)
        err_hist.append(e)
        linf = max(linf, l2_norm(e, grid.h))
    return {"linf_l2": linf, "l2_l2": space_time_l2_norm(err_hist)}


# --- coefficient expression grammar -----------------------------------------

_ALLOWED_FUNCS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "log": np.log,
    "gamma": np.frompyfunc(math.gamma, 1, 1),
}
_ALLOWED_NAMES = {"pi": math.pi, "e": math.e}
_ALLOWED_VARS = ("x", "t", "lam")

_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a**b,
}


def _eval_node(node, env):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body, env)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, (int, float)):
            return float(node.value)
        raise ConfigError(f"literal {node.value!r} not allowed in expressions")
    if isinstance(node, ast.Name):
        if node.id in env:
            return env[node.id]
        if node.id in _ALLOWED_NAMES:
            return _ALLOWED_NAMES[node.id]
        raise ConfigError(f"unknown name {node.id!r} in expression")
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left, env), _eval_node(node.right, env))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand, env)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        fn = _ALLOWED_FUNCS.get(node.func.id)
        if fn is None or node.keywords or len(node.args) != 1:
            raise ConfigError(f"call {ast.dump(node.func)} not allowed in expressions")
        out = fn(_eval_node(node.args[0], env))
        if isinstance(out, np.ndarray) and out.dtype == object:
            out = out.astype(float)
        return out
    raise ConfigError(f"unsupported expression element: {ast.dump(node)}")


def parse_expression(text: str, lam: float | None = None):
    """Compile a coefficient expression over x and t.

    The grammar covers sums, products, quotients, powers, unary minus,
    the functions sin/cos/exp/sqrt/log/gamma, the constants pi and e,
    and the names x, t and lam (the fractional order, bound at parse
    time when supplied).  Returns a callable ``f(x=0.0, t=0.0)``.
    """
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {text!r}: {exc}") from exc

    def fn(x=0.0, t=0.0):
        env = {"x": x, "t": t}
        if lam is not None:
            env["lam"] = lam
        return _eval_node(tree, env)

    # fail fast on disallowed constructs
    fn(x=np.array([0.0, 0.5]), t=0.5)
    return fn


def problem_from_config(cfg: dict[str, str], lam: float) -> Problem:
    """Build a Problem from flat key/value config entries.

    Recognized keys: q, p, g, s, psi1, boundary, exact (expressions),
    L1, T (floats), name.  ``boundary`` defaults to ``exact``; ``psi1``
    defaults to ``exact`` at t = 0.
    """
    need = [key for key in ("q", "p", "g", "s") if key not in cfg]
    if need:
        raise ConfigError(f"problem config missing keys: {', '.join(need)}")
    q_e = parse_expression(cfg["q"], lam)
    p_e = parse_expression(cfg["p"], lam)
    g_e = parse_expression(cfg["g"], lam)
    s_e = parse_expression(cfg["s"], lam)
    exact_e = parse_expression(cfg["exact"], lam) if "exact" in cfg else None
    if "boundary" in cfg:
        bnd_e = parse_expression(cfg["boundary"], lam)
    elif exact_e is not None:
        bnd_e = exact_e
    else:
        raise ConfigError("problem config needs 'boundary' or 'exact'")
    if "psi1" in cfg:
        psi_e = parse_expression(cfg["psi1"], lam)
        psi = lambda x: psi_e(x=x, t=0.0)
    else:
        psi = lambda x: bnd_e(x=x, t=0.0) if exact_e is None else exact_e(x=x, t=0.0)

    def _field(fn):
        return lambda x, t: fn(x=x, t=t) * np.ones_like(np.asarray(x, dtype=float))

    prob = Problem(
        q=lambda t: float(q_e(t=t)),
        p=lambda t: float(p_e(t=t)),
        g=_field(g_e),
        s=_field(s_e),
        psi1=psi,
        boundary=_field(bnd_e),
        exact=_field(exact_e) if exact_e is not None else None,
        L1=float(cfg.get("L1", 1.0)),
        T=float(cfg.get("T", 1.0)),
        name=cfg.get("name", "config-problem"),
    )
    prob.validate()
    return prob
