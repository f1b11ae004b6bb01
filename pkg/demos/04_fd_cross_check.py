"""
A finite-difference cross-check
===============================

Solve the same problem on a uniform grid with the hole masked out, and compare
point values and energy with the boundary-integral solution.
"""
import numpy as np

from periodic_dirichlet import BoundaryData, discretize, energy, eval_u, fd_energy, fd_solve, make_curve, solve

disk = make_curve("disk", radius=1.0)
g = BoundaryData(0.0, (1.0,))
density, system = solve(disk, discretize(64), g, 0.25)
u_bem = float(eval_u(density, system, np.array([0.1, 0.1])))
e_bem = energy(density, system)
print(f"boundary integral: u(0.1, 0.1) = {u_bem:+.6f}, energy = {e_bem:.6f}")

# %%
# The grid treats the hole boundary to first order only, so agreement
# improves slowly with M.
for m in (64, 128, 256):
    grid = fd_solve(disk, system.placement, g, m)
    print(f"M = {m:3d}: u = {grid.value_at((0.1, 0.1)):+.6f}, energy = {fd_energy(grid):.6f}, "
          f"CG iterations {grid.iterations}")
