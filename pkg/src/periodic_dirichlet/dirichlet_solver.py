"""Density-plus-constant integral system for the periodic Dirichlet problem.

The solution is represented as u = w_per[mu] + c with the side condition
int mu dsigma = 0.  Two assemblies are provided:

* ``direct``: collocation on the hole boundary w + eps y(t) with S_per;
* ``rescaled``: the same equation pulled back to the reference curve, with the
  classical kernel kept exact and the lattice influence entering through
  -eps nu . grad R(eps (y - y')).  It is defined for eps = 0 as well, where it
  reduces to the classical exterior Dirichlet system.
"""
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lapack, lu_factor, lu_solve

from .errors import IllConditionedSystemError, InadmissiblePlacementError, UnderResolvedDataError
from .geometry import HolePlacement, NodeSet
from .layer_potentials import (
    BoundaryDensity,
    classical_dlp_entries,
    exterior_trace,
    periodic_dlp_entries,
    rescaled_correction_entries,
)

MAX_CONDITION = 1e12


@dataclass(frozen=True)
class BoundaryData:
    """Dirichlet datum g(t) = a0 + sum a_k cos(k t) + sum b_k sin(k t) on the curve parameter."""

    a0: float = 0.0
    cos: tuple = ()
    sin: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a0", float(self.a0))
        object.__setattr__(self, "cos", tuple(float(v) for v in self.cos))
        object.__setattr__(self, "sin", tuple(float(v) for v in self.sin))

    @property
    def degree(self):
        return max(len(self.cos), len(self.sin))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        g = np.full_like(t, self.a0)
        for k, a in enumerate(self.cos, start=1):
            g = g + a * np.cos(k * t)
        for k, b in enumerate(self.sin, start=1):
            g = g + b * np.sin(k * t)
        return g

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        dg = np.zeros_like(t)
        for k, a in enumerate(self.cos, start=1):
            dg = dg - k * a * np.sin(k * t)
        for k, b in enumerate(self.sin, start=1):
            dg = dg + k * b * np.cos(k * t)
        return dg

    @property
    def bounds(self):
        t = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
        g = self(t)
        return float(g.min()), float(g.max())

    def __add__(self, other):
        def padd(p, q):
            n = max(len(p), len(q))
            return tuple(np.pad(p, (0, n - len(p))) + np.pad(q, (0, n - len(q))))

        if isinstance(other, (int, float)):
            return BoundaryData(self.a0 + other, self.cos, self.sin)
        return BoundaryData(self.a0 + other.a0, padd(self.cos, other.cos), padd(self.sin, other.sin))

    def to_dict(self):
        return {"a0": self.a0, "cos": list(self.cos), "sin": list(self.sin)}


@dataclass(frozen=True)
class DirichletSystem:
    matrix: np.ndarray = field(repr=False)
    rhs: np.ndarray = field(repr=False)
    mode: str
    eps: float
    curve: object
    discretization: object
    data: BoundaryData
    placement: object = None
    green: object = field(default=None, repr=False)

    @property
    def kernel_block(self):
        n = self.discretization.n_nodes
        return self.matrix[:n, :n] + 0.5 * np.eye(n)


def assemble_system(curve, discretization, data, mode="direct", eps=None, w=(0.5, 0.5),
                    placement=None, green=None):
    """Assemble the (N+1) x (N+1) bordered system.

    ``mode="direct"`` needs an admissible placement (given directly, or built
    from ``w`` and ``eps > 0``).  ``mode="rescaled"`` accepts any ``eps >= 0``;
    a placement is still recorded when eps > 0 so that the solution can be
    evaluated in the cell.
    """
    n = discretization.n_nodes
    if data.degree > n // 4:
        raise UnderResolvedDataError(
            f"boundary data of degree {data.degree} needs N >= {4 * data.degree}, got N={n}"
        )
    if placement is None and eps is not None and eps > 0:
        placement = HolePlacement(curve, w, eps)
    if placement is not None:
        eps = placement.eps
    nodes = NodeSet.sample(curve, discretization)
    wgt = discretization.weight

    if mode == "direct":
        if placement is None:
            raise InadmissiblePlacementError("direct mode needs an admissible placement with eps > 0")
        kern = periodic_dlp_entries(curve, discretization, placement, green)
        side = eps * nodes.speed * wgt
    elif mode == "rescaled":
        if eps is None or eps < 0:
            raise ValueError("rescaled mode needs eps >= 0")
        kern = classical_dlp_entries(curve, discretization) + rescaled_correction_entries(
            curve, discretization, eps, green
        )
        side = nodes.speed * wgt
    else:
        raise ValueError(f"unknown mode {mode!r}")

    matrix = np.zeros((n + 1, n + 1))
    matrix[:n, :n] = kern - 0.5 * np.eye(n)
    matrix[:n, n] = 1.0
    matrix[n, :n] = side
    rhs = np.append(data(discretization.nodes), 0.0)
    return DirichletSystem(matrix, rhs, mode, float(eps), curve, discretization, data, placement, green)


def solve_system(system):
    """LU solve with partial pivoting; 1-norm condition estimate from LAPACK."""
    lu, piv = lu_factor(system.matrix)
    anorm = np.linalg.norm(system.matrix, 1)
    rcond, info = lapack.dgecon(lu, anorm, norm="1")
    cond = np.inf if rcond == 0 else 1.0 / rcond
    if not cond <= MAX_CONDITION:
        raise IllConditionedSystemError(f"condition estimate {cond:.3e} exceeds {MAX_CONDITION:.0e}")
    sol = lu_solve((lu, piv), system.rhs)
    n = system.discretization.n_nodes
    return BoundaryDensity(sol[:n], float(sol[n]), system.mode, float(cond))


def boundary_residual(density, system, samples=None):
    """Max |u(x(t)) - g(t)| over 4N off-node parameters (midpoints and quarter points).

    The exterior trace is taken by Nystrom interpolation, which carries the
    spectral accuracy of the discretization.
    """
    disc = system.discretization
    n = disc.n_nodes
    m = samples if samples is not None else 4 * n
    t = 2 * np.pi * (np.arange(m) + 0.5) / m
    placement = system.placement
    if placement is None:
        raise ValueError("boundary residual needs a system with eps > 0")
    trace = exterior_trace(density, system.curve, placement, disc, t, system.green)
    return float(np.max(np.abs(trace - system.data(t))))


def solve(curve, discretization, data, eps, w=(0.5, 0.5), mode="direct", green=None):
    """Convenience: assemble and solve; returns (density, system)."""
    system = assemble_system(curve, discretization, data, mode=mode, eps=eps, w=w, green=green)
    return solve_system(system), system
