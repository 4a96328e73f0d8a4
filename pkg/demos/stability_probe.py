"""Push the implicit scheme with a deliberately coarse time step.

Ten steps of size k = 0.1 on a fine spatial mesh: an explicit method
would be far outside any stability region here, while the two-level
implicit scheme stays bounded (and, for the time-linear solution below,
stays accurate, since its temporal truncation vanishes).
"""

import numpy as np

from fraccdr import FractionalParams, GridSpec, error_vs_exact, example1, run
from fraccdr.spatial import l2_norm

lam = 0.9
prob = example1(lam)
grid = GridSpec(M=64, N=10)  # h = 1/64, k = 0.1
hist, diag = run(prob, grid, FractionalParams(lam))

norms = [l2_norm(hist.value(0.5 * m), grid.h) for m in range(len(hist))]
exact = [
    l2_norm(np.asarray(prob.exact(grid.xs, 0.5 * m * grid.k)), grid.h)
    for m in range(len(hist))
]
print(f"lam={lam}, h=1/64, k=0.1 over {grid.N} steps")
print(f"max level norm, numeric: {max(norms):.6f}")
print(f"max level norm, exact:   {max(exact):.6f}")
print(f"errors: {error_vs_exact(hist, prob)}")
print(f"all stability side-conditions satisfied: {diag.all_stable()}")
print(f"worst linear-solve residual: {diag.max_solve_residual:.2e}")
