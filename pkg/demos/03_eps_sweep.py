"""
Shrinking the hole
==================

Sweep the hole size eps for a disk with g = cos t, then fit the samples by a
Chebyshev series.  The point values tend to a constant (here 0, the mean of g)
and the energy tends to pi, the energy of the exterior field cos(theta)/rho.
Both fits extrapolate smoothly through eps = 0.
"""
import numpy as np

from periodic_dirichlet import BoundaryData, ExperimentConfig, analyticity_fit, make_curve, sweep

config = ExperimentConfig(make_curve("disk", radius=1.0), (0.5, 0.5), BoundaryData(0.0, (1.0,)), 64)
eps_list = np.geomspace(0.02, 0.2, 10)
points = [(0.1, 0.1), (0.9, 0.3)]
records = sweep(config, eps_list, points)

for r in records:
    where = "" if r.point is None else f" at {r.point}"
    print(f"eps {r.eps:.4f}  {r.kind}{where}: {r.value:+.10f}")

# %%
for p in points:
    fit = analyticity_fit([(r.eps, r.value) for r in records if r.point == p], 8)
    print(f"u{p}: value at 0 = {fit.value_at_zero:+.2e}, slope = {fit.monomial_coefficients[1]:+.6f}, "
          f"decay {fit.coeff_decay_ratio:.3f}")

fit = analyticity_fit([(r.eps, r.value) for r in records if r.kind == "energy"], 8)
print(f"energy: value at 0 = {fit.value_at_zero:.8f} (pi = {np.pi:.8f}), decay {fit.coeff_decay_ratio:.3f}")
