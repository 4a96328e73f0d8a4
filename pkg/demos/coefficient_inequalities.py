"""Walk through the time-discretization coefficients and their structure.

The scheme discretizes the fractional derivative of order lam at times
shifted by alpha = 1 - lam.  Everything it needs per level is a small
set of weight vectors; their signs, orderings and lower bounds are what
make the energy (stability) argument work, so we print and check them.
"""

import numpy as np

from fraccdr import (
    FractionalParams,
    a_sequence,
    full_level_weights,
    half_level_weights,
    coefficient_inequality_report,
    stability_condition,
)

lam = 0.4
p = FractionalParams(lam)
print(f"fractional order lam = {lam}, shift alpha = 1 - lam = {p.alpha}")

i = 4
wh = half_level_weights(p, i)
wf = full_level_weights(p, i)
print(f"\nhalf-level weights at step i = {i}:")
print("  f~ =", np.array2string(wh.f_tilde, precision=6))
print("  d~ =", np.array2string(wh.d_tilde, precision=6))
print("  first-difference coefficient f-dot~ =", round(wh.fdot_tilde, 6))
print("  d~ - f~ (must be positive):", np.array2string(wh.d_tilde - wh.f_tilde[:-1], precision=6))

print(f"\nfull-level weights at step i = {i}:")
print("  f~ =", np.array2string(wf.f_tilde, precision=6))
print("  terminal entry equals alpha**(1-lam) =", (1 - lam) ** (1 - lam))

seq = a_sequence(p, i + 0.5)
print(f"\ncombined sequence at level {i + 0.5} (strictly increasing):")
for l, v in zip(seq.indices(), seq.values):
    print(f"  a[{l:>4}] = {v:.6f}")

print("\nstability side-condition residuals (<= 0 means the energy bound holds):")
for step in (1, 2, 5, 20):
    ok_h, res_h = stability_condition(p, step, "half")
    ok_f, res_f = stability_condition(p, step, "full")
    print(f"  i={step:>3}: half {res_h:+.4f} ({'ok' if ok_h else 'violated'}), "
          f"full {res_f:+.4f} ({'ok' if ok_f else 'violated'})")

print("\ninequality suite for lam in {0.1, 0.3, 0.5, 0.6}, steps up to 50:")
for lam_chk in (0.1, 0.3, 0.5, 0.6):
    rep = coefficient_inequality_report(FractionalParams(lam_chk))
    status = ", ".join(f"{k}={'pass' if v else 'FAIL'}" for k, v in rep.items())
    print(f"  lam={lam_chk}: {status}")
