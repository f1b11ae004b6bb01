"""Boundary-integral solver for the periodic Dirichlet problem on a perforated plane.

The unit cell ]0,1[^2 contains one hole w + eps*Omega; the solution u[eps] is
harmonic outside the periodic array of holes, Z^2-periodic, and equals
g((x - w)/eps) on the hole boundary.
"""
from .config import ExperimentConfig
from .dirichlet_solver import (
    BoundaryData,
    DirichletSystem,
    assemble_system,
    boundary_residual,
    solve,
    solve_system,
)
from .fd_oracle import fd_energy, fd_solve
from .geometry import (
    BoundaryCurve,
    Discretization,
    HolePlacement,
    discretize,
    hole_boundary_point,
    make_curve,
)
from .lattice_green import (
    EwaldParams,
    GreensEvaluation,
    PeriodicGreen,
    classical_fundamental,
    fourier_reference,
    periodic_green_ewald,
    periodic_green_fourier,
    regular_part,
)
from .layer_potentials import (
    BoundaryDensity,
    KernelMatrix,
    dlp_matrix,
    eval_dlp,
    eval_dlp_gradient,
    exterior_trace,
)
from .observables import (
    AnalyticityFit,
    SweepRecord,
    analyticity_fit,
    energy,
    eval_u,
    sweep,
)

__version__ = "0.1.0"
