"""Point values, cell energy, eps-sweeps and analyticity diagnostics of u[eps]."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial

from .dirichlet_solver import assemble_system, boundary_residual, solve_system
from .errors import FitError, FluxUnresolvedError, PeriodicDirichletError
from .layer_potentials import eval_dlp, eval_dlp_gradient, normal_flux

RESIDUAL_ACCEPT = 1e-6


def eval_u(density, system, x):
    """u[eps](x) = w_per[mu](x) + c; 1-periodic in x."""
    return eval_dlp(density, system.curve, system.placement, system.discretization, x, system.green)


def eval_grad_u(density, system, x):
    return eval_dlp_gradient(
        density, system.curve, system.placement, system.discretization, x, system.green
    )


def boundary_flux(density, system, flux_tol=1e-2):
    """Normal derivative of u on the hole boundary (normal pointing out of the hole).

    Raises FluxUnresolvedError when the upper third of the flux spectrum carries
    more than ``flux_tol`` of its peak amplitude.
    """
    flux = normal_flux(density, system.curve, system.placement, system.discretization, system.green)
    amp = np.abs(np.fft.rfft(flux))
    peak = amp.max()
    tail = amp[2 * len(amp) // 3:].max()
    if peak > 1e-10 and tail > flux_tol * peak:
        raise FluxUnresolvedError(
            f"flux spectrum tail {tail / peak:.2e} of peak exceeds {flux_tol:.0e}; increase N"
        )
    return flux


def energy(density, system, flux_tol=1e-2):
    """Dirichlet energy of u over the cell minus the hole,

        E = -int_{hole boundary} g d(u)/d(nu) dsigma,

    the outer cell boundary terms cancelling by periodicity.
    """
    disc = system.discretization
    flux = boundary_flux(density, system, flux_tol)
    g = system.data(disc.nodes)
    dsigma = system.placement.eps * system.curve.speed(disc.nodes) * disc.weight
    return float(-np.sum(g * flux * dsigma))


def cell_boundary_flux(density, system, n_samples=256):
    """int over the unit-cell boundary of u du/dn (outward); zero by periodicity.

    The cell is shifted so that its edges stay away from the hole.
    """
    w = np.array(system.placement.w)
    s = (np.arange(n_samples) + 0.5) / n_samples
    origin = w - 0.5
    total = 0.0
    for start, direction, normal in (
        ((0.0, 0.0), (1.0, 0.0), (0.0, -1.0)),
        ((1.0, 0.0), (0.0, 1.0), (1.0, 0.0)),
        ((0.0, 1.0), (1.0, 0.0), (0.0, 1.0)),
        ((0.0, 0.0), (0.0, 1.0), (-1.0, 0.0)),
    ):
        pts = origin + np.array(start) + s[:, None] * np.array(direction)
        u = eval_u(density, system, pts)
        du = eval_grad_u(density, system, pts) @ np.array(normal)
        total += float(np.sum(u * du)) / n_samples
    return total


@dataclass(frozen=True)
class SweepRecord:
    kind: str
    eps: float
    point: tuple
    value: float
    n_nodes: int
    residual: float
    flag: str = ""

    @property
    def accepted(self):
        return not self.flag

    @property
    def u_value(self):
        return self.value if self.kind == "u" else None

    @property
    def energy(self):
        return self.value if self.kind == "energy" else None


def solve_config(config, eps, mode="direct"):
    """Solve the configured problem at one eps; returns (density, system, residual)."""
    system = assemble_system(
        config.curve, config.discretization, config.data, mode=mode, eps=eps, w=config.w,
        green=config.green,
    )
    density = solve_system(system)
    return density, system, boundary_residual(density, system)


def _sweep_one(config, eps, points):
    nan = float("nan")
    try:
        density, system, res = solve_config(config, eps)
    except PeriodicDirichletError as exc:
        flag = f"solve failed: {exc}"
        rows = [SweepRecord("u", eps, tuple(p), nan, config.N, nan, flag) for p in points]
        return rows + [SweepRecord("energy", eps, None, nan, config.N, nan, flag)]
    base_flag = "" if res <= RESIDUAL_ACCEPT else f"residual {res:.2e} above {RESIDUAL_ACCEPT:.0e}"
    rows = []
    for p in points:
        try:
            val, flag = float(eval_u(density, system, np.asarray(p, dtype=float))), base_flag
        except PeriodicDirichletError as exc:
            val, flag = nan, str(exc)
        rows.append(SweepRecord("u", eps, tuple(float(v) for v in p), val, config.N, res, flag))
    try:
        e, flag = energy(density, system), base_flag
    except PeriodicDirichletError as exc:
        e, flag = nan, str(exc)
    rows.append(SweepRecord("energy", eps, None, e, config.N, res, flag))
    return rows


def sweep(config, eps_list, points=(), workers=None):
    """Solve at every eps and record u at ``points`` and the energy.

    Records come back grouped by eps in ascending order, value rows before the
    energy row.

    Per-eps failures are flagged in the records and do not stop the sweep.
    """
    eps_sorted = sorted(float(e) for e in eps_list)
    if len(set(eps_sorted)) != len(eps_sorted):
        raise ValueError("eps values must be distinct")
    points = [tuple(p) for p in points]
    workers = workers or min(4, max(1, len(eps_sorted)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(lambda e: _sweep_one(config, e, points), eps_sorted))
    return [r for chunk in chunks for r in chunk]


@dataclass(frozen=True)
class AnalyticityFit:
    interval: tuple
    degree: int
    coefficients: np.ndarray = field(repr=False)
    max_rel_residual: float
    value_at_zero: float
    coeff_decay_ratio: float

    @property
    def series(self):
        return Chebyshev(self.coefficients, domain=list(self.interval))

    @property
    def monomial_coefficients(self):
        """Coefficients of the fitted polynomial in powers of eps."""
        return self.series.convert(kind=Polynomial).coef

    def __call__(self, eps):
        return self.series(eps)


def analyticity_fit(samples, degree):
    """Least-squares Chebyshev fit of (eps, value) samples on [min eps, max eps].

    ``value_at_zero`` extrapolates the fit to eps = 0; ``coeff_decay_ratio`` is
    the geometric mean of |c_{k+1} / c_k| over the upper half of the coefficients.
    """
    eps = np.array([s[0] for s in samples], dtype=float)
    vals = np.array([s[1] for s in samples], dtype=float)
    # one spare sample beyond interpolation so the residual is informative
    if len(eps) < degree + 2:
        raise FitError(f"degree {degree} needs at least {degree + 2} samples, got {len(eps)}")
    if len(np.unique(eps)) != len(eps):
        raise FitError("duplicate eps values in fit samples")
    if not np.all(np.isfinite(vals)):
        raise FitError("non-finite sample values")
    lo, hi = float(eps.min()), float(eps.max())
    fit = Chebyshev.fit(eps, vals, degree, domain=[lo, hi])
    coef = fit.coef
    scale = np.max(np.abs(vals))
    resid = np.max(np.abs(fit(eps) - vals))
    max_rel = float(resid / scale) if scale > 0 else float(resid)
    if degree >= 1:
        # geometric mean of consecutive ratios telescopes to an end-point ratio
        half = min(math.ceil(degree / 2), degree - 1)
        top, bottom = abs(coef[degree]), abs(coef[half])
        decay = (top / bottom) ** (1.0 / (degree - half)) if bottom > 0 else float("inf")
    else:
        decay = float("nan")
    return AnalyticityFit((lo, hi), degree, coef, max_rel, float(fit(0.0)), float(decay))
