"""
The periodic Green's function
=============================

Build the mean-zero lattice Green's function by Ewald splitting, compare it
with a brute-force Fourier sum, and look at its regular part near the origin.
"""
import numpy as np

from periodic_dirichlet import PeriodicGreen, fourier_reference, regular_part
from periodic_dirichlet.lattice_green import PROBE_POINTS

# %%
# Construction runs a self-check against a second, independent split.
green = PeriodicGreen()
ewald = green.evaluate(PROBE_POINTS, order=0).value
oracle = fourier_reference(PROBE_POINTS, kcut=200)
for p, a, b in zip(PROBE_POINTS, ewald, oracle):
    print(f"x = {p}:  ewald {a:+.12f}  fourier {b:+.12f}  diff {abs(a - b):.1e}")

# %%
# The Laplacian is -1 away from the lattice (the unit point masses are
# balanced by a uniform background).
e = green.evaluate(np.array([[0.3, 0.6], [0.5, 0.5]]))
print("laplacian:", e.laplacian)

# %%
# Subtracting log|x| / (2 pi) leaves a smooth function; at the origin its
# Hessian is -I/2 by the symmetry of the square lattice.
r = regular_part(np.zeros(2))
print("R(0) =", r.value)
print("Hessian of R at 0:\n", r.hessian)
