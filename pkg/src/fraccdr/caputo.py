"""Discrete Caputo operators over a half-step history, plus a quadrature oracle.

The two-level scheme stores the solution at every half time level
``t_0, t_{1/2}, t_1, ...`` because the Caputo derivative is non-local:
each new level is coupled to all previous ones through weighted sums of
the forward differences ``delta_t u^l = (u^{l+1/2} - u^l) / (k/2)``.
This module applies those sums (in both the expanded d/f-weight form and
the equivalent a-sequence form), exposes the "known part" needed by the
implicit system assembly, and provides an independent graded-mesh
quadrature for the continuous Caputo derivative used as a test oracle.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DimensionError, DomainError, HistoryError, OracleError
from .spatial import GridSpec
from .weights import (
    FractionalParams,
    a_sequence,
    full_level_weights,
    gamma_fn,
    half_level_weights,
    time_scale,
)

__all__ = [
    "HalfStepHistory",
    "delta_t",
    "discrete_caputo_half",
    "discrete_caputo_full",
    "discrete_caputo_half_aform",
    "discrete_caputo_full_aform",
    "known_memory_half",
    "known_memory_full",
    "caputo_quadrature_oracle",
]


class HalfStepHistory:
    """Solution vectors at contiguous half levels l = 0, 1/2, 1, ...

    Vectors have ``M + 1`` entries.  A single writer appends levels; any
    number of readers may apply operators concurrently.
    """

    def __init__(self, grid: GridSpec, capacity: int | None = None):
        self.grid = grid
        n0 = capacity if capacity is not None else 8
        self._data = np.empty((max(n0, 1), grid.M + 1))
        self._count = 0

    def __len__(self) -> int:
        return self._count

    @property
    def last_level(self) -> float:
        if self._count == 0:
            raise HistoryError("history is empty")
        return 0.5 * (self._count - 1)

    def _index(self, l: float) -> int:
        m = int(round(2.0 * l))
        if abs(2.0 * l - m) > 1e-9:
            raise HistoryError(f"level {l} is not a half-integer")
        if m < 0 or m >= self._count:
            raise HistoryError(f"level {l} not stored (have 0..{(self._count - 1) / 2})")
        return m

    def append(self, vec: np.ndarray) -> None:
        v = np.asarray(vec, dtype=float)
        if v.shape != (self.grid.M + 1,):
            raise DimensionError(
                f"level vector must have {self.grid.M + 1} entries, got {v.shape}"
            )
        if self._count == self._data.shape[0]:
            grown = np.empty((2 * self._count, self.grid.M + 1))
            grown[: self._count] = self._data[: self._count]
            self._data = grown
        self._data[self._count] = v
        self._count += 1

    def value(self, l: float) -> np.ndarray:
        return self._data[self._index(l)]

    def as_array(self) -> np.ndarray:
        """Read-only view of all stored levels, shape (n_levels, M+1)."""
        out = self._data[: self._count]
        out.flags.writeable = False
        return out

    def times(self) -> np.ndarray:
        return 0.5 * self.grid.k * np.arange(self._count)

    def delta_t(self, l: float) -> np.ndarray:
        m = self._index(l)
        if m + 1 >= self._count:
            raise HistoryError(f"delta_t at level {l} needs level {l + 0.5}")
        return (self._data[m + 1] - self._data[m]) * (2.0 / self.grid.k)


def delta_t(hist: HalfStepHistory, l: float) -> np.ndarray:
    """Forward half-step difference quotient ``(u^{l+1/2} - u^l) / (k/2)``."""
    return hist.delta_t(l)


def _weighted_delta_sum(hist: HalfStepHistory, coef: np.ndarray) -> np.ndarray:
    """``sum_m coef[m] * delta_t(m/2)`` without materializing the difference stack."""
    m = coef.size
    if m + 1 > len(hist):
        raise HistoryError(f"history holds {len(hist)} levels, need {m + 1}")
    a = hist._data
    return (coef @ a[1 : m + 1] - coef @ a[:m]) * (2.0 / hist.grid.k)


def _half_coef(p: FractionalParams, i: int, w=None) -> np.ndarray:
    if w is None:
        w = half_level_weights(p, i)
    coef = np.zeros(2 * i + 1)
    if i == 0:
        coef[0] = w.f_tilde[0]
        return coef
    coef[0] = w.fdot_tilde
    coef[2 : 2 * i + 1 : 2] += w.f_tilde[:-1]  # delta_t u^{l+1}
    coef[1 : 2 * i : 2] += w.d_tilde - w.f_tilde[:-1]  # delta_t u^{l+1/2}
    coef[2 * i] += w.f_tilde[i]  # delta_t u^{i}
    return coef


def _full_coef(p: FractionalParams, i: int, w=None) -> np.ndarray:
    if w is None:
        w = full_level_weights(p, i)
    coef = np.zeros(2 * i + 2)
    coef[1 : 2 * i + 2 : 2] += w.f_tilde[:-1]  # delta_t u^{l+1/2}
    coef[0 : 2 * i + 1 : 2] += w.d_tilde - w.f_tilde[:-1]  # delta_t u^{l}
    coef[2 * i + 1] += w.f_tilde[i + 1]  # delta_t u^{i+1/2}
    return coef


def discrete_caputo_half(
    hist: HalfStepHistory, p: FractionalParams, i: int
) -> np.ndarray:
    """Discrete Caputo operator at the shifted time ``t_{i+1/2+alpha}``.

    Requires history levels 0 .. i+1/2.  Exact (up to roundoff) on
    histories sampled from functions linear in t.
    """
    if i < 0:
        raise DomainError(f"step index must be >= 0, got {i}")
    coef = _half_coef(p, i)
    return time_scale(p, hist.grid.k) * _weighted_delta_sum(hist, coef)


def discrete_caputo_full(
    hist: HalfStepHistory, p: FractionalParams, i: int
) -> np.ndarray:
    """Discrete Caputo operator at the shifted time ``t_{i+1+alpha}``.

    Requires history levels 0 .. i+1.
    """
    if i < 0:
        raise DomainError(f"step index must be >= 0, got {i}")
    coef = _full_coef(p, i)
    return time_scale(p, hist.grid.k) * _weighted_delta_sum(hist, coef)


def discrete_caputo_half_aform(
    hist: HalfStepHistory, p: FractionalParams, i: int
) -> np.ndarray:
    """Same operator written as a single a-sequence sum (cross-check form)."""
    seq = a_sequence(p, i + 0.5)
    return time_scale(p, hist.grid.k) * _weighted_delta_sum(hist, seq.values)


def discrete_caputo_full_aform(
    hist: HalfStepHistory, p: FractionalParams, i: int
) -> np.ndarray:
    seq = a_sequence(p, i + 1.0)
    return time_scale(p, hist.grid.k) * _weighted_delta_sum(hist, seq.values)


def known_memory_half(
    hist: HalfStepHistory, p: FractionalParams, i: int, w=None
) -> np.ndarray:
    """History part of the half-level operator, excluding ``delta_t u^i``.

    The excluded difference carries the unknown ``u^{i+1/2}``; its
    coefficient is returned by :func:`fsum_half`.  Output is already
    time-scaled.
    """
    if i == 0:
        return np.zeros(hist.grid.M + 1)
    coef = _half_coef(p, i, w)[:-1]  # drop the delta_t u^i slot
    return time_scale(p, hist.grid.k) * _weighted_delta_sum(hist, coef)


def known_memory_full(
    hist: HalfStepHistory, p: FractionalParams, i: int, w=None
) -> np.ndarray:
    """History part of the full-level operator, excluding ``delta_t u^{i+1/2}``."""
    coef = _full_coef(p, i, w)[:-1]
    return time_scale(p, hist.grid.k) * _weighted_delta_sum(hist, coef)


def fsum_half(p: FractionalParams, i: int, k: float, w=None) -> float:
    """Scaled coefficient of ``delta_t u^i`` in the half-level operator."""
    if w is None:
        w = half_level_weights(p, i)
    tot = w.f_tilde[i] if i == 0 else w.f_tilde[i] + w.f_tilde[i - 1]
    return time_scale(p, k) * float(tot)


def fsum_full(p: FractionalParams, i: int, k: float, w=None) -> float:
    """Scaled coefficient of ``delta_t u^{i+1/2}`` in the full-level operator."""
    if w is None:
        w = full_level_weights(p, i)
    return time_scale(p, k) * float(w.f_tilde[i + 1] + w.f_tilde[i])


def caputo_quadrature_oracle(
    f,
    df,
    lam: float,
    t: float,
    n_panels: int = 64,
    tol: float = 1e-8,
    gauss_points: int = 12,
) -> float:
    """Continuous Caputo derivative by graded-panel Gauss quadrature.

    Evaluates ``1/Gamma(1-lam) * int_0^t df(tau) (t - tau)^(-lam) dtau``.
    ``f`` names the function whose derivative is taken; only ``df`` is
    evaluated.  Panels are graded toward the weakly singular endpoint
    ``tau = t`` with exponent ``1/(1-lam)``; on the panel touching the
    singularity the integration variable is changed so the integrand
    becomes smooth before the Gauss rule is applied.  The result is
    accepted once doubling the panel count moves it by less than ``tol``
    relative; otherwise an :class:`OracleError` reports the achieved
    estimate.
    """
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lam must lie in (0, 1), got {lam}")
    if not t > 0.0:
        raise DomainError(f"t must be positive, got {t}")

    nodes, wts = leggauss(gauss_points)

    def integrate(n: int) -> float:
        # sigma = t - tau in [0, t]; edges graded toward sigma = 0
        g = 1.0 / (1.0 - lam)
        edges = t * (np.arange(n + 1) / n) ** g
        total = 0.0
        # singular panel [0, edges[1]]: substitute sigma = w**g, which
        # turns sigma**(-lam) d sigma into g dw exactly
        w_hi = edges[1] ** (1.0 - lam)
        w = 0.5 * w_hi * (nodes + 1.0)
        total += 0.5 * w_hi * g * np.sum(wts * df(t - w**g))
        for j in range(1, n):
            a, b = edges[j], edges[j + 1]
            s = 0.5 * (b - a) * (nodes + 1.0) + a
            total += 0.5 * (b - a) * np.sum(wts * df(t - s) * s ** (-lam))
        return total / gamma_fn(1.0 - lam)

    prev = integrate(n_panels)
    n = n_panels
    for _ in range(6):
        n *= 2
        cur = integrate(n)
        scale = max(abs(cur), abs(prev), 1e-300)
        rel = abs(cur - prev) / scale
        if rel <= tol or (abs(cur) < 1e-14 and abs(cur - prev) < 1e-14):
            return cur
        prev = cur
    raise OracleError(
        f"quadrature did not reach tol={tol} (achieved {rel:.3e})", achieved=rel
    )
