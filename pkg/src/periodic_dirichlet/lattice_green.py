"""Free-space and Z^2-periodic fundamental solutions of the Laplacian.

The periodic kernel is the mean-zero solution of

    Laplace(S_per) = sum_{z in Z^2} delta_z - 1,

i.e. S_per(x) = -sum_{k != 0} exp(2 pi i k.x) / (4 pi^2 |k|^2).  It is evaluated
with a Gaussian (Ewald) split:

    S_per(x) = -sum_{k != 0} exp(-pi^2 |k|^2 / eta^2) cos(2 pi k.x) / (4 pi^2 |k|^2)
               - (1 / 4 pi) sum_z E1(eta^2 |x - z|^2) + 1 / (4 eta^2).

The regular part R = S_per - S_2 replaces the z = 0 image term by the entire
function Ein, which keeps it smooth (and free of cancellation) through x = 0.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

from .errors import InvalidParametersError, OutOfDomainError, SingularPointError
from .special import EULER_GAMMA, ein, exp1

TWO_PI = 2.0 * np.pi
LATTICE_TOL = 1e-9

# probes for the construction self-check and the oracle-agreement test
PROBE_POINTS = np.array([[0.5, 0.5], [0.25, 0.5], [0.1, 0.1], [0.37, 0.83]])

# The 5-point stencil with h = 1e-3 misreads the Laplacian of log|x|/(2 pi) by
# about 1.6e-3 * (0.1/|x|)^4, so a 1e-4 check needs |x| >= 0.2 from the lattice.
LAPLACIAN_MIN_DIST = 0.25


def sample_cell_points(rng, n, min_dist=LAPLACIAN_MIN_DIST):
    """n uniform points of the unit cell at distance >= min_dist from Z^2."""
    out = []
    while len(out) < n:
        x = rng.uniform(0.0, 1.0, 2)
        if np.hypot(*(x - np.round(x))) >= min_dist:
            out.append(x)
    return np.array(out)


@dataclass(frozen=True)
class GreensEvaluation:
    """Kernel value with optional first and second derivatives.

    Arrays broadcast over leading batch dimensions: ``value`` has shape ``B``,
    ``gradient`` ``B + (2,)`` and ``hessian`` ``B + (2, 2)``.  Derivatives above
    ``order`` were not evaluated and are zero-filled.
    """

    value: np.ndarray
    gradient: np.ndarray
    hessian: np.ndarray
    order: int = 2

    @property
    def laplacian(self):
        return np.trace(self.hessian, axis1=-2, axis2=-1)


@dataclass(frozen=True)
class EwaldParams:
    eta: float = 3.0
    kmax: int = 12
    rmax: int = 2
    target_abs_tol: float = 1e-10

    def __post_init__(self):
        if not (self.eta > 0 and math.isfinite(self.eta)):
            raise InvalidParametersError(f"eta must be positive, got {self.eta}")
        if int(self.kmax) != self.kmax or self.kmax < 1:
            raise InvalidParametersError(f"kmax must be a positive integer, got {self.kmax}")
        if int(self.rmax) != self.rmax or self.rmax < 1:
            raise InvalidParametersError(f"rmax must be a positive integer, got {self.rmax}")
        if not self.target_abs_tol > 0:
            raise InvalidParametersError("target_abs_tol must be positive")


def _check_order(order):
    if order not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {order}")


def _as_points(x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (2,):
        raise ValueError(f"points must have trailing dimension 2, got shape {x.shape}")
    return x


def _pack(value, grad, hess, order, shape):
    return GreensEvaluation(
        value=value.reshape(shape),
        gradient=grad.reshape(shape + (2,)),
        hessian=hess.reshape(shape + (2, 2)),
        order=order,
    )


def _classical(x, order):
    # x: (P, 2), nonzero
    r2 = np.einsum("pi,pi->p", x, x)
    value = np.log(r2) / (2.0 * TWO_PI)
    grad = np.zeros_like(x)
    hess = np.zeros(x.shape + (2,))
    if order >= 1:
        grad = x / (TWO_PI * r2[:, None])
    if order >= 2:
        eye = np.eye(2)
        hess = (eye[None] * r2[:, None, None] - 2.0 * x[:, :, None] * x[:, None, :]) / (
            TWO_PI * r2[:, None, None] ** 2
        )
    return value, grad, hess


def classical_fundamental(x, order=2):
    """S_2(x) = log|x| / (2 pi) with gradient and Hessian up to ``order``."""
    _check_order(order)
    x = _as_points(x)
    shape = x.shape[:-1]
    pts = x.reshape(-1, 2)
    if np.any(np.hypot(pts[:, 0], pts[:, 1]) == 0.0):
        raise SingularPointError("classical fundamental solution is singular at x = 0")
    return _pack(*_classical(pts, order), order, shape)


def _fourier_coefficients(kcut, eta=None):
    k = np.arange(-kcut, kcut + 1)
    k1, k2 = np.meshgrid(k, k, indexing="ij")
    ksq = (k1 * k1 + k2 * k2).astype(float)
    coef = np.zeros_like(ksq)
    nz = ksq > 0
    coef[nz] = -1.0 / (4.0 * np.pi**2 * ksq[nz])
    if eta is not None:
        coef[nz] *= np.exp(-np.pi**2 * ksq[nz] / eta**2)
    return k.astype(float), coef


def _fourier_sum(x, k, coef, order):
    """Evaluate sum_k coef_k exp(2 pi i k.x) and derivatives for real, even coef."""
    p1 = np.exp(1j * TWO_PI * np.outer(x[:, 0], k))
    p2 = np.exp(1j * TWO_PI * np.outer(x[:, 1], k))
    ik = 1j * TWO_PI * k

    def contract(c):
        return np.einsum("pj,pj->p", p1 @ c, p2).real

    value = contract(coef)
    grad = np.zeros_like(x)
    hess = np.zeros(x.shape + (2,))
    if order >= 1:
        grad[:, 0] = contract(coef * ik[:, None])
        grad[:, 1] = contract(coef * ik[None, :])
    if order >= 2:
        hess[:, 0, 0] = contract(coef * (ik**2)[:, None])
        hess[:, 1, 1] = contract(coef * (ik**2)[None, :])
        hess[:, 0, 1] = hess[:, 1, 0] = contract(coef * np.outer(ik, ik))
    return value, grad, hess


def _reduce(x):
    """Map points into the centered cell [-1/2, 1/2)^2."""
    return x - np.floor(x + 0.5)


def _lattice_distance(x):
    xr = _reduce(x)
    return np.hypot(xr[..., 0], xr[..., 1])


def periodic_green_fourier(x, kcut):
    """Symmetric partial sum of the defining Fourier series over 0 < |k|_inf <= kcut.

    Slow: the truncation error decays like kcut^-2, see ``fourier_reference``.
    """
    if kcut < 8:
        raise ValueError("kcut must be at least 8")
    x = _as_points(x)
    shape = x.shape[:-1]
    pts = x.reshape(-1, 2)
    if np.any(_lattice_distance(pts) <= LATTICE_TOL):
        raise SingularPointError("Fourier series of S_per diverges on the lattice")
    k, coef = _fourier_coefficients(int(kcut))
    value, _, _ = _fourier_sum(pts, k, coef, 0)
    return value.reshape(shape)


def fourier_reference(x, kcut=200):
    """Richardson-extrapolate the Fourier partial sums at ``kcut`` and ``2 kcut``.

    The square partial sums converge like C / kcut^2, so the extrapolation
    weight is 4/3 on the finer sum.
    """
    coarse = periodic_green_fourier(x, kcut)
    fine = periodic_green_fourier(x, 2 * kcut)
    return (4.0 * fine - coarse) / 3.0


def _phi(y, order):
    """h(y) = expm1(-y)/y and h'(y), stable near y = 0."""
    h = np.empty_like(y)
    dh = np.zeros_like(y)
    small = y < 0.5
    ys = y[small]
    # h = sum_{m>=1} (-1)^m y^(m-1) / m!,  h' = sum_{m>=2} (-1)^m (m-1) y^(m-2) / m!
    hs = np.zeros_like(ys)
    dhs = np.zeros_like(ys)
    fact = 1.0
    for m in range(1, 22):
        fact *= m
        hs += (-1) ** m * ys ** (m - 1) / fact
        if m >= 2:
            dhs += (-1) ** m * (m - 1) * ys ** (m - 2) / fact
    h[small] = hs
    dh[small] = dhs
    yl = y[~small]
    em = np.expm1(-yl)
    h[~small] = em / yl
    if order >= 2:
        dh[~small] = (-np.exp(-yl) * yl - em) / yl**2
    return h, dh


class PeriodicGreen:
    """Ewald evaluator for S_per and its regular part.

    Immutable after construction; the constructor verifies the truncation
    against an independent, generously truncated split (different ``eta``)
    and raises ``InvalidParametersError`` if they disagree by more than
    ``params.target_abs_tol``.

    ``offset`` adds a constant to S_per (and hence to R); the mean-zero
    normalization is ``offset = 0``.
    """

    def __init__(self, params=None, offset=0.0, check=True):
        self.params = params if params is not None else EwaldParams()
        self.offset = float(offset)
        p = self.params
        self._k, self._coef = _fourier_coefficients(int(p.kmax), p.eta)
        z = np.arange(-p.rmax - 1, p.rmax + 2)
        z1, z2 = np.meshgrid(z, z, indexing="ij")
        shells = np.maximum(np.abs(z1), np.abs(z2)).ravel()
        images = np.stack([z1.ravel(), z2.ravel()], axis=1).astype(float)
        keep = shells > 0
        self._images = images[keep & (shells <= p.rmax)]
        # one extra shell for unreduced arguments of the regular part
        self._images_wide = images[keep]
        if check:
            self._self_check()

    def _self_check(self):
        ref = _reference_evaluator()
        mine = self.evaluate(PROBE_POINTS, order=1)
        theirs = ref.evaluate(PROBE_POINTS, order=1)
        err = max(
            np.max(np.abs(mine.value - self.offset - theirs.value)),
            np.max(np.abs(mine.gradient - theirs.gradient)),
        )
        if not err <= self.params.target_abs_tol:
            raise InvalidParametersError(
                f"Ewald self-check failed: probe error {err:.3e} exceeds "
                f"target_abs_tol {self.params.target_abs_tol:.1e} for {self.params}"
            )

    def _regular_raw(self, x, order):
        """R(x) = S_per(x) - S_2(x) for (P, 2) points with |x|_inf < 1."""
        eta = self.params.eta
        eta2 = eta * eta
        value, grad, hess = _fourier_sum(x, self._k, self._coef, order)
        value = value + 1.0 / (4.0 * eta2) + self.offset

        images = self._images
        if x.size and np.max(np.abs(x)) > 0.5:
            images = self._images_wide
        d = x[:, None, :] - images[None, :, :]
        d2 = np.einsum("pzi,pzi->pz", d, d)
        y = eta2 * d2
        value = value - exp1(y).sum(axis=1) / (2.0 * TWO_PI)

        r2 = np.einsum("pi,pi->p", x, x)
        y0 = eta2 * r2
        value = value + (EULER_GAMMA - ein(y0) + np.log(eta2)) / (2.0 * TWO_PI)

        if order >= 1:
            ex = np.exp(-y) / d2
            grad = grad + np.einsum("pz,pzi->pi", ex, d) / TWO_PI
            h, dh = _phi(y0, order)
            grad = grad + x * (eta2 * h)[:, None] / TWO_PI
        if order >= 2:
            eye = np.eye(2)
            ddt = d[:, :, :, None] * d[:, :, None, :]
            coef_dd = ex * (2.0 / d2 + 2.0 * eta2)
            hess = hess + (
                np.einsum("pz,ij->pij", ex, eye) - np.einsum("pz,pzij->pij", coef_dd, ddt)
            ) / TWO_PI
            xxt = x[:, :, None] * x[:, None, :]
            hess = hess + (
                (eta2 * h)[:, None, None] * eye[None]
                + 2.0 * (eta2 * eta2 * dh)[:, None, None] * xxt
            ) / TWO_PI
        return value, grad, hess

    def evaluate(self, x, order=2):
        """S_per and derivatives; 1-periodic, reduced to the centered cell first."""
        _check_order(order)
        x = _as_points(x)
        shape = x.shape[:-1]
        pts = _reduce(x.reshape(-1, 2))
        if np.any(np.hypot(pts[:, 0], pts[:, 1]) <= LATTICE_TOL):
            raise SingularPointError("periodic fundamental solution is singular on the lattice")
        cv, cg, ch = _classical(pts, order)
        rv, rg, rh = self._regular_raw(pts, order)
        return _pack(cv + rv, cg + rg, ch + rh, order, shape)

    def regular(self, x, order=2):
        """R = S_per - S_2 for |x| < 1/2 (smooth through the origin)."""
        _check_order(order)
        x = _as_points(x)
        shape = x.shape[:-1]
        pts = x.reshape(-1, 2)
        if np.any(np.hypot(pts[:, 0], pts[:, 1]) >= 0.5):
            raise OutOfDomainError(
                "regular part is only evaluated for |x| < 1/2; use the periodic evaluator"
            )
        return _pack(*self._regular_raw(pts, order), order, shape)

    def regular_unchecked(self, x, order=2):
        """Regular part for |x|_inf < 1, used by the hole-to-hole assemblies.

        Differences of points on one admissible hole always satisfy this.
        """
        x = _as_points(x)
        shape = x.shape[:-1]
        pts = x.reshape(-1, 2)
        if pts.size and np.max(np.abs(pts)) >= 1.0:
            raise OutOfDomainError("regular part needs |x|_inf < 1")
        return _pack(*self._regular_raw(pts, order), order, shape)


@lru_cache(maxsize=None)
def _reference_evaluator():
    # split with a different eta and truncation far past double precision
    return PeriodicGreen(EwaldParams(eta=4.0, kmax=14, rmax=4, target_abs_tol=1e-13), check=False)


@lru_cache(maxsize=32)
def get_evaluator(params=None):
    """Shared (cached) evaluator for a parameter set."""
    return PeriodicGreen(params if params is not None else EwaldParams())


def periodic_green_ewald(x, params=None, order=2):
    return get_evaluator(params).evaluate(x, order)


def regular_part(x, params=None, order=2):
    return get_evaluator(params).regular(x, order)
