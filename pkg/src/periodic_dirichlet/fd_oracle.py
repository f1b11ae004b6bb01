"""Finite-difference oracle on the periodic unit cell with a masked hole.

Five-point Laplacian on an M x M node grid with periodic wraparound.  Nodes
inside the closed hole are Dirichlet nodes carrying g at the radial projection
of the node onto the hole boundary (first order; the hole must be star-shaped
about its center).  Deliberately low order and independent of the
boundary-integral code path.
"""
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import cg

from .errors import ConvergenceError, UnresolvedHoleError

FREE, HOLE, RIM = 0, 1, 2
_ARMS = ((1, 0), (-1, 0), (0, 1), (0, -1))


@dataclass(frozen=True)
class CellGrid:
    M: int
    mask: np.ndarray = field(repr=False)
    rim_values: np.ndarray = field(repr=False)

    @property
    def h(self):
        return 1.0 / self.M

    @property
    def free(self):
        return self.mask == FREE


@dataclass(frozen=True)
class GridSolution:
    grid: CellGrid
    values: np.ndarray = field(repr=False)
    placement: object
    curve: object
    iterations: int
    relative_residual: float

    def value_at(self, x):
        """Value at the grid node nearest to x (mod 1)."""
        M = self.grid.M
        i, j = (int(round((v % 1.0) * M)) % M for v in x)
        return float(self.values[i, j])


def _inside(curve, placement, x, y):
    vx = x - placement.w[0]
    vy = y - placement.w[1]
    vx -= np.round(vx)
    vy -= np.round(vy)
    t = curve.parameter_of_direction(np.arctan2(vy, vx))
    return np.hypot(vx, vy) <= placement.eps * curve.radial(t), t


def build_grid(curve, placement, data, M):
    if M < 64:
        raise UnresolvedHoleError(f"grid size M={M} is below the minimum 64")
    if placement.eps * M < 8:
        raise UnresolvedHoleError(
            f"hole spans eps*M = {placement.eps * M:.2f} cells; at least 8 are needed"
        )
    coords = np.arange(M) / M
    X, Y = np.meshgrid(coords, coords, indexing="ij")
    inside, t = _inside(curve, placement, X, Y)
    mask = np.where(inside, HOLE, FREE)
    near_free = np.zeros_like(inside)
    for di, dj in _ARMS:
        near_free |= np.roll(~inside, (di, dj), axis=(0, 1))
    mask[inside & near_free] = RIM
    rim_values = np.where(inside, data(t), 0.0)
    return CellGrid(M, mask, rim_values)


def fd_solve(curve, placement, data, M, rtol=1e-10, maxiter=50000):
    """Solve the discrete periodic Dirichlet problem by conjugate gradients."""
    grid = build_grid(curve, placement, data, M)
    free = grid.free
    idx = -np.ones((M, M), dtype=int)
    n_free = int(free.sum())
    idx[free] = np.arange(n_free)
    fi, fj = np.nonzero(free)
    p = idx[fi, fj]

    rows, cols, vals = [p], [p], [np.full(n_free, 4.0)]
    rhs = np.zeros(n_free)
    adj_rows, adj_cols = [], []
    for di, dj in _ARMS:
        ni, nj = (fi + di) % M, (fj + dj) % M
        q = idx[ni, nj]
        inner = q >= 0
        rows.append(p[inner])
        cols.append(q[inner])
        vals.append(-np.ones(inner.sum()))
        adj_rows.append(p[inner])
        adj_cols.append(q[inner])
        np.add.at(rhs, p[~inner], grid.rim_values[ni[~inner], nj[~inner]])
    A = sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n_free, n_free)
    )
    adjacency = sp.csr_matrix(
        (np.ones(sum(len(r) for r in adj_rows)), (np.concatenate(adj_rows), np.concatenate(adj_cols))),
        shape=(n_free, n_free),
    )
    n_comp, _ = connected_components(adjacency, directed=False)
    if n_comp != 1:
        raise UnresolvedHoleError(f"free nodes split into {n_comp} components")

    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    u, info = cg(A, rhs, rtol=rtol, atol=0.0, maxiter=maxiter, callback=count)
    rel = float(np.linalg.norm(A @ u - rhs) / max(np.linalg.norm(rhs), 1e-300))
    if info != 0 or rel > 10 * rtol:
        raise ConvergenceError(f"CG stopped after {iterations} iterations at relative residual {rel:.2e}")
    values = np.where(grid.mask == FREE, 0.0, grid.rim_values)
    values[free] = u
    return GridSolution(grid, values, placement, curve, iterations, rel)


def fd_energy(solution):
    """Sum of squared edge differences over free-free and free-rim edges whose
    midpoint lies outside the closed hole (each edge once)."""
    grid = solution.grid
    M = grid.M
    U = solution.values
    free = grid.free
    coords = np.arange(M) / M
    X, Y = np.meshgrid(coords, coords, indexing="ij")
    total = 0.0
    for di, dj in ((1, 0), (0, 1)):
        V = np.roll(U, (-di, -dj), axis=(0, 1))
        edge = free | np.roll(free, (-di, -dj), axis=(0, 1))
        mid_in, _ = _inside(
            solution.curve, solution.placement, X + 0.5 * di / M, Y + 0.5 * dj / M
        )
        total += float(np.sum((V - U)[edge & ~mid_in] ** 2))
    return total
