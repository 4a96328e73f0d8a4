"""Measure the discrete Caputo operator against an independent quadrature.

The discrete operator applies weighted forward differences to a history
of half-step values; the oracle integrates the defining weakly singular
integral on a graded panel mesh.  Refining the time step shows the
operator's truncation order, which is 2 - lam (lower lam = smoother
kernel = faster convergence).  Functions linear in t are reproduced
exactly.
"""

import math

import numpy as np

from fraccdr import (
    FractionalParams,
    GridSpec,
    HalfStepHistory,
    caputo_quadrature_oracle,
    discrete_caputo_half,
)


def history_of(fn, grid):
    hist = HalfStepHistory(grid, capacity=2 * grid.N + 1)
    for m in range(2 * grid.N + 1):
        hist.append(np.full(grid.M + 1, fn(0.5 * m * grid.k)))
    return hist


print("exactness on u(t) = t (any lam, any step):")
for lam in (0.3, 0.8):
    p = FractionalParams(lam)
    grid = GridSpec(M=4, N=32)
    hist = history_of(lambda t: t, grid)
    i = 31
    t_star = (i + 0.5 + p.alpha) * grid.k
    got = float(discrete_caputo_half(hist, p, i)[0])
    want = t_star ** (1 - lam) / math.gamma(2 - lam)
    print(f"  lam={lam}: discrete={got:.12f} analytic={want:.12f}")

print("\ntruncation order on u(t) = t^2 and t*sin(t):")
cases = {
    "t^2": (lambda t: t * t, lambda t: 2 * t),
    "t sin t": (lambda t: t * np.sin(t), lambda t: np.sin(t) + t * np.cos(t)),
}
for lam in (0.3, 0.5, 0.7):
    p = FractionalParams(lam)
    for name, (f, df) in cases.items():
        errs = []
        for m in (4, 5, 6, 7, 8):
            N = 2**m
            grid = GridSpec(M=4, N=N)
            hist = history_of(f, grid)
            i = N - 1
            t_star = (i + 0.5 + p.alpha) * grid.k
            dv = float(discrete_caputo_half(hist, p, i)[0])
            ov = caputo_quadrature_oracle(f, df, lam, t_star)
            errs.append(abs(dv - ov))
        rates = ", ".join(f"{math.log2(a / b):.3f}" for a, b in zip(errs, errs[1:]))
        print(f"  lam={lam} {name:8s}: rates {rates}  (expected about {2 - lam})")
