"""Caputo discretization coefficients for the two-level scheme.

The time discretization evaluates the fractional derivative of order
``lam`` at the shifted times ``t_{i+1/2+alpha}`` and ``t_{i+1+alpha}``
with ``alpha = 1 - lam``.  Both sub-steps are driven by two families of
coefficients (here called d/f weights) built from increments of the
powers ``(i + alpha - l)**(1 - lam)`` and ``(i + alpha - l)**(2 - lam)``.
This module generates the dimensionless (tilde) weights, their
``k**(1-lam)/Gamma(2-lam)`` time-scaled counterparts, the combined
"a-sequences" that recast each discrete operator as a single sum over
half levels, and the coefficient inequalities that underpin the
stability theory.

All functions are pure: they depend only on ``(lam, i)`` and allocate
fresh arrays, so they are safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

__all__ = [
    "FractionalParams",
    "HalfLevelWeights",
    "FullLevelWeights",
    "ASequence",
    "gamma_fn",
    "time_scale",
    "half_level_weights",
    "full_level_weights",
    "a_sequence",
    "stability_residual",
    "stability_condition",
    "coefficient_inequality_report",
]


def gamma_fn(x: float) -> float:
    """Gamma function for positive arguments.

    Delegates to the platform implementation (``math.gamma``), which is
    accurate to well below 1e-12 relative error on the range used here.
    """
    if not x > 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


@dataclass(frozen=True)
class FractionalParams:
    """Fractional order ``lam`` in (0, 1); the shift ``alpha = 1 - lam`` is derived."""

    lam: float

    def __post_init__(self):
        if not 0.0 < self.lam < 1.0:
            raise DomainError(f"lam must lie in (0, 1), got {self.lam}")

    @property
    def alpha(self) -> float:
        return 1.0 - self.lam


def time_scale(p: FractionalParams, k: float) -> float:
    """Factor ``k**(1-lam) / Gamma(2-lam)`` converting tilde weights to scaled ones."""
    if not k > 0:
        raise DomainError(f"time step must be positive, got {k}")
    return k ** (1.0 - p.lam) / gamma_fn(2.0 - p.lam)


def _pow(base: np.ndarray | float, e: float):
    # Bases are bounded away from zero by alpha > 0; guard anyway.
    b = np.asarray(base, dtype=float)
    if np.any(b <= 0):
        raise DomainError("power base must stay positive (alpha > 0 violated?)")
    return np.exp(e * np.log(b))


@dataclass(frozen=True)
class HalfLevelWeights:
    """Dimensionless weights of the half-level operator at ``t_{i+1/2+alpha}``.

    ``f_tilde[l]`` for l = 0..i, ``d_tilde[l]`` for l = 0..i-1, and the
    scalar ``fdot_tilde`` (the coefficient attached to the very first
    time difference, present only for i >= 1).
    """

    i: int
    f_tilde: np.ndarray
    d_tilde: np.ndarray
    fdot_tilde: float | None = None


@dataclass(frozen=True)
class FullLevelWeights:
    """Dimensionless weights of the full-level operator at ``t_{i+1+alpha}``.

    ``f_tilde[l]`` for l = 0..i+1 and ``d_tilde[l]`` for l = 0..i.
    """

    i: int
    f_tilde: np.ndarray
    d_tilde: np.ndarray


def half_level_weights(p: FractionalParams, i: int) -> HalfLevelWeights:
    """Weights of the half-level discrete Caputo operator for step ``i >= 0``.

    For i = 0 the operator has the single coefficient
    ``(1/2 + alpha)**(1-lam)``.  For i >= 1:

    * ``d_tilde[l] = (i+a-l)**(1-lam) - (i+a-l-1)**(1-lam)``,
    * ``f_tilde[l] = 2/(2-lam) * ((i+a-l)**(2-lam) - (i+a-l-1)**(2-lam))
      - 1/2 * ((i+a-l)**(1-lam) + 3*(i+a-l-1)**(1-lam))`` for l <= i-1,
    * ``f_tilde[i] = alpha**(1-lam)``,
    * ``fdot_tilde = (i+1/2+a)**(1-lam) - (i+a)**(1-lam)``.
    """
    if i < 0:
        raise DomainError(f"step index must be >= 0, got {i}")
    lam, a = p.lam, p.alpha
    if i == 0:
        f = np.array([_pow(0.5 + a, 1.0 - lam)])
        return HalfLevelWeights(i=0, f_tilde=f, d_tilde=np.empty(0))
    l = np.arange(i, dtype=float)
    hi = i + a - l
    lo = hi - 1.0
    d = _pow(hi, 1.0 - lam) - _pow(lo, 1.0 - lam)
    f = (2.0 / (2.0 - lam)) * (_pow(hi, 2.0 - lam) - _pow(lo, 2.0 - lam)) - 0.5 * (
        _pow(hi, 1.0 - lam) + 3.0 * _pow(lo, 1.0 - lam)
    )
    f_full = np.append(f, _pow(a, 1.0 - lam))
    fdot = float(_pow(i + 0.5 + a, 1.0 - lam) - _pow(i + a, 1.0 - lam))
    return HalfLevelWeights(i=i, f_tilde=f_full, d_tilde=d, fdot_tilde=fdot)


def full_level_weights(p: FractionalParams, i: int) -> FullLevelWeights:
    """Weights of the full-level discrete Caputo operator for step ``i >= 0``."""
    if i < 0:
        raise DomainError(f"step index must be >= 0, got {i}")
    lam, a = p.lam, p.alpha
    l = np.arange(i + 1, dtype=float)
    hi = i + 1 + a - l
    lo = hi - 1.0
    d = _pow(hi, 1.0 - lam) - _pow(lo, 1.0 - lam)
    f = (2.0 / (2.0 - lam)) * (_pow(hi, 2.0 - lam) - _pow(lo, 2.0 - lam)) - 0.5 * (
        _pow(hi, 1.0 - lam) + 3.0 * _pow(lo, 1.0 - lam)
    )
    f_full = np.append(f, _pow(a, 1.0 - lam))
    return FullLevelWeights(i=i, f_tilde=f_full, d_tilde=d)


@dataclass(frozen=True)
class ASequence:
    """Combined weight sequence over half-integer indices 1/2, 1, ..., level.

    ``values[m-1]`` holds the entry at ``l = m/2``.  The sequence recasts
    a discrete Caputo operator as a single weighted sum of forward time
    differences; it is also the object the stability side-conditions and
    the coefficient inequalities are stated on.
    """

    level: float
    values: np.ndarray = field(repr=False)

    def at(self, l: float) -> float:
        m = int(round(2.0 * l))
        if abs(2.0 * l - m) > 1e-12 or m < 1 or m > self.values.size:
            raise DomainError(f"no sequence entry at l = {l} (level {self.level})")
        return float(self.values[m - 1])

    def indices(self) -> np.ndarray:
        return 0.5 * np.arange(1, self.values.size + 1)


def a_sequence(p: FractionalParams, level: float) -> ASequence:
    """Build the combined sequence at ``level = i + 1/2`` or ``level = i + 1``.

    Half levels (level = i + 1/2):

    * ``a[1/2]`` is ``(1/2+alpha)**(1-lam)`` when i = 0, else ``fdot_tilde``;
    * ``a[n] = d_tilde[n-1] - f_tilde[n-1]`` for integer n in 1..i;
    * ``a[n+1/2] = f_tilde[n-1]`` for integer n in 1..i-1;
    * ``a[i+1/2] = f_tilde[i-1] + f_tilde[i]``.

    Full levels (level = i + 1) use the full-level weights:

    * ``a[n+1/2] = d_tilde[n] - f_tilde[n]`` for integer n in 0..i;
    * ``a[n] = f_tilde[n-1]`` for integer n in 1..i;
    * ``a[i+1] = f_tilde[i] + f_tilde[i+1]``.

    Either way the terminal entry sums the two largest f weights.
    """
    m2 = int(round(2.0 * level))
    if abs(2.0 * level - m2) > 1e-12 or m2 < 1:
        raise DomainError(f"level must be a positive half-integer, got {level}")
    vals = np.empty(m2)
    if m2 % 2 == 1:  # half kind: level = i + 1/2
        i = (m2 - 1) // 2
        w = half_level_weights(p, i)
        if i == 0:
            vals[0] = w.f_tilde[0]
        else:
            vals[0] = w.fdot_tilde
            vals[1 : 2 * i : 2] = w.d_tilde - w.f_tilde[:-1]  # integer l = 1..i
            vals[2 : 2 * i - 1 : 2] = w.f_tilde[: i - 1]  # l = 3/2..i-1/2
            vals[m2 - 1] = w.f_tilde[i - 1] + w.f_tilde[i]
    else:  # full kind: level = i + 1
        i = m2 // 2 - 1
        w = full_level_weights(p, i)
        vals[0 : 2 * i + 1 : 2] = w.d_tilde - w.f_tilde[:-1]  # l = 1/2..i+1/2
        vals[1 : 2 * i : 2] = w.f_tilde[:i]  # integer l = 1..i
        vals[m2 - 1] = w.f_tilde[i] + w.f_tilde[i + 1]
    return ASequence(level=float(level), values=vals)


def stability_residual(alpha: float, ratio: float) -> float:
    """Left-hand side ``4*alpha**2 - (1 + 4*alpha) * (ratio - 1)``.

    ``ratio`` is the terminal a-sequence entry divided by its predecessor.
    A non-positive residual is the hypothesis under which the energy
    argument for unconditional stability goes through.
    """
    return 4.0 * alpha * alpha - (1.0 + 4.0 * alpha) * (ratio - 1.0)


def _terminal_ratio_half(w: HalfLevelWeights) -> float:
    # a[i+1/2] / a[i] for the half-kind sequence, straight from the weights
    i = w.i
    return float((w.f_tilde[i - 1] + w.f_tilde[i]) / (w.d_tilde[i - 1] - w.f_tilde[i - 1]))


def _terminal_ratio_full(w: FullLevelWeights) -> float:
    # a[i+1] / a[i+1/2] for the full-kind sequence
    i = w.i
    return float((w.f_tilde[i] + w.f_tilde[i + 1]) / (w.d_tilde[i] - w.f_tilde[i]))


def stability_condition(
    p: FractionalParams,
    i: int,
    level_kind: str,
    weights: HalfLevelWeights | FullLevelWeights | None = None,
) -> tuple[bool, float]:
    """Diagnostic check of the stability side-condition at step ``i``.

    ``level_kind`` is ``"half"`` (requires i >= 1) or ``"full"`` (i >= 0).
    Only the last two entries of the combined sequence enter, so the check
    works from the per-level weights (reused via ``weights`` when the
    caller already has them).  Returns ``(residual <= 0, residual)``;
    callers log the flag, the stepper never gates on it.
    """
    if level_kind == "half":
        if i < 1:
            raise DomainError("half-level condition needs i >= 1")
        w = weights if weights is not None else half_level_weights(p, i)
        ratio = _terminal_ratio_half(w)
    elif level_kind == "full":
        if i < 0:
            raise DomainError("full-level condition needs i >= 0")
        w = weights if weights is not None else full_level_weights(p, i)
        ratio = _terminal_ratio_full(w)
    else:
        raise DomainError(f"level_kind must be 'half' or 'full', got {level_kind!r}")
    res = stability_residual(p.alpha, ratio)
    return res <= 0.0, res


def _lower_bound(p: FractionalParams, level: float, ls: np.ndarray) -> np.ndarray:
    lam = p.lam
    c = (2.0 - 3.0 * lam) * (1.0 - lam) / (2.0 * (2.0 - lam))
    return c * _pow(level + p.alpha - ls, -lam)


def coefficient_inequality_report(p: FractionalParams, i_max: int = 50) -> dict[str, bool]:
    """Check the four coefficient-inequality families up to step ``i_max``.

    Keys: ``positivity`` (all f, d, fdot and d - f strictly positive),
    ``sign_conditions`` (f[j-1] + f[j] - d[j] < 0 and 2 f[j] - d[j] > 0),
    ``monotonicity`` (a-sequences strictly increasing) and ``lower_bound``
    (every a entry exceeds the power-law floor).  The last three are only
    guaranteed for lam < 2/3, matching the hypotheses they come from.
    """
    pos = True
    sign = True
    mono = True
    low = True
    for i in range(0, i_max + 1):
        wh = half_level_weights(p, i)
        wf = full_level_weights(p, i)
        pos &= bool(np.all(wh.f_tilde > 0)) and bool(np.all(wf.f_tilde > 0))
        pos &= bool(np.all(wf.d_tilde - wf.f_tilde[:-1] > 0))
        if i >= 1:
            pos &= bool(np.all(wh.d_tilde > 0)) and wh.fdot_tilde > 0
            pos &= bool(np.all(wh.d_tilde - wh.f_tilde[:-1] > 0))
        pos &= bool(np.all(wf.d_tilde > 0))
        # f[j-1] + f[j] - d[j] < 0 and 2 f[j] - d[j] > 0, on the index
        # ranges where both weights exist (empty ranges pass trivially).
        sign &= bool(np.all(wf.f_tilde[:i] + wf.f_tilde[1 : i + 1] - wf.d_tilde[1:] < 0))
        sign &= bool(np.all(2.0 * wf.f_tilde[: i + 1] - wf.d_tilde > 0))
        sign &= bool(np.all(wh.f_tilde[: i - 1] + wh.f_tilde[1:i] - wh.d_tilde[1:] < 0))
        sign &= bool(np.all(2.0 * wh.f_tilde[:i] - wh.d_tilde > 0))
        for level in (i + 0.5, i + 1.0):
            seq = a_sequence(p, level)
            if seq.values.size >= 2:
                mono &= bool(np.all(np.diff(seq.values) > 0))
            low &= bool(np.all(seq.values > _lower_bound(p, level, seq.indices())))
    return {
        "positivity": pos,
        "sign_conditions": sign,
        "monotonicity": mono,
        "lower_bound": low,
    }
