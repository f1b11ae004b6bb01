"""Nystrom discretization of classical and periodic double layer potentials.

Conventions: counterclockwise curves, outward normal nu, and the kernel
d/dnu_y S(x - y) acting on the source point.  With these, the exterior trace
of the double layer is -mu/2 + W mu, the classical circle kernel is +1/(4 pi r),
and the unit density gives 1/2 on the boundary (principal value).
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import InadmissiblePlacementError, NearBoundaryError
from .geometry import NodeSet
from .lattice_green import TWO_PI, _reduce, classical_fundamental, get_evaluator


@dataclass(frozen=True)
class KernelMatrix:
    """Double layer Nystrom matrix, entries already multiplied by speed and weight."""

    entries: np.ndarray = field(repr=False)
    mode: str
    curve: object
    discretization: object
    placement: object = None

    @property
    def row_sums(self):
        return self.entries.sum(axis=1)


@dataclass(frozen=True)
class BoundaryDensity:
    """Density values at the nodes plus the additive constant of the representation.

    ``values`` is theta (rescaled system on the reference curve) or mu (direct
    system on the hole boundary); at equal nodes the two coincide.
    """

    values: np.ndarray
    constant: float
    mode: str = "direct"
    cond_estimate: float = float("nan")

    def side_condition(self, speed, weights):
        return float(np.sum(self.values * speed * weights))


def _green(green):
    return green if green is not None else get_evaluator()


def _pair_chords(curve, t, s):
    return curve.chord(t[:, None], s[None, :])


def _classical_kernel(curve, t, s):
    """-nu(s).grad S_2(y(t) - y(s)) * |y'(s)|-free kernel, with the curvature
    limit kappa/(4 pi) where t and s coincide.  Scale invariant."""
    d = _pair_chords(curve, t, s)
    r2 = np.einsum("jki,jki->jk", d, d)
    gap = np.abs(np.angle(np.exp(1j * np.subtract.outer(t, s))))
    same = gap < 1e-13
    r2[same] = 1.0
    kern = -np.einsum("jki,ki->jk", d, curve.normal(s)) / (TWO_PI * r2)
    if np.any(same):
        rows, _ = np.nonzero(same)
        kern[same] = curve.curvature(t[rows]) / (2.0 * TWO_PI)
    return kern


def _correction_kernel(curve, t, s, eps, green=None):
    """-eps nu(s).grad R(eps (y(t) - y(s))); zero at eps = 0."""
    if eps == 0:
        return np.zeros((len(t), len(s)))
    d = eps * _pair_chords(curve, t, s)
    shape = d.shape[:2]
    grad = _green(green).regular_unchecked(d.reshape(-1, 2), order=1).gradient.reshape(shape + (2,))
    return -eps * np.einsum("jki,ki->jk", grad, curve.normal(s))


def classical_dlp_entries(curve, discretization):
    """Classical double layer on the reference curve, diagonal by the curvature limit."""
    t = discretization.nodes
    return _classical_kernel(curve, t, t) * (curve.speed(t) * discretization.weight)[None, :]


def rescaled_correction_entries(curve, discretization, eps, green=None):
    """-eps * nu_k . grad R(eps (y_j - y_k)) * |y'_k| * weight; vanishes at eps = 0."""
    t = discretization.nodes
    kern = _correction_kernel(curve, t, t, eps, green)
    return kern * (curve.speed(t) * discretization.weight)[None, :]


def periodic_dlp_entries(curve, discretization, placement, green=None):
    """Double layer with the periodic kernel on the hole boundary w + eps y.

    Built from absolute positions in the cell and the full periodic kernel,
    independently of the rescaled assembly.
    """
    nodes = NodeSet.sample(curve, discretization)
    weight = discretization.weight
    n = len(nodes.speed)
    eps = placement.eps
    x = placement.center + eps * nodes.y
    d = x[:, None, :] - x[None, :, :]
    off = ~np.eye(n, dtype=bool)
    grad = np.zeros((n, n, 2))
    grad[off] = _green(green).evaluate(d[off], order=1).gradient
    kern = -np.einsum("jki,ki->jk", grad, nodes.normal)
    # smooth limit of the classical part; the regular part adds -nu.grad R(0) = 0
    np.fill_diagonal(kern, nodes.curvature / (2.0 * TWO_PI * eps))
    return kern * (eps * nodes.speed * weight)[None, :]


def dlp_matrix(curve, discretization, mode="classical", placement=None, green=None):
    """Nystrom matrix of the double layer operator.

    ``mode="classical"`` uses S_2 on the reference curve; ``mode="periodic"``
    uses S_per on the hole boundary given by ``placement``.
    """
    if mode == "classical":
        entries = classical_dlp_entries(curve, discretization)
    elif mode == "periodic":
        if placement is None:
            raise InadmissiblePlacementError("periodic mode needs a hole placement")
        entries = periodic_dlp_entries(curve, discretization, placement, green)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return KernelMatrix(entries, mode, curve, discretization, placement)


def _hole_samples(curve, placement, n):
    t = 2 * np.pi * np.arange(n) / n
    return placement.center + placement.eps * curve.point(t)


def boundary_distance(curve, placement, x, samples=2048):
    """Distance (mod Z^2) from points x to the hole boundary, by dense sampling."""
    pts = _hole_samples(curve, placement, samples)
    x = np.atleast_2d(np.asarray(x, dtype=float))
    out = np.empty(len(x))
    for b in _blocks(len(x), samples):
        d = _reduce(x[b, None, :] - pts[None, :, :])
        out[b] = np.min(np.hypot(d[..., 0], d[..., 1]), axis=1)
    return out


def min_eval_distance(curve, placement, discretization):
    nodes_speed = curve.speed(discretization.nodes)
    return 2.0 * discretization.weight * placement.eps * float(np.max(nodes_speed))


def _check_distance(curve, placement, discretization, x):
    dist = boundary_distance(curve, placement, x)
    need = min_eval_distance(curve, placement, discretization)
    if np.any(dist < need):
        raise NearBoundaryError(
            f"target at distance {float(np.min(dist)):.3e} from the hole boundary; "
            f"the minimum evaluation distance is {need:.3e}"
        )


def _sources(curve, placement, discretization):
    nodes = NodeSet.sample(curve, discretization)
    x = placement.center + placement.eps * nodes.y
    sw = placement.eps * nodes.speed * discretization.weight
    return x, nodes.normal, sw


# bound on target-source pairs per kernel call, to cap memory on large grids
PAIR_BLOCK = 1 << 14


def _blocks(n_targets, n_sources):
    step = max(1, PAIR_BLOCK // max(n_sources, 1))
    return (slice(i, i + step) for i in range(0, n_targets, step))


def eval_dlp(density, curve, placement, discretization, x, green=None, check=True):
    """Periodic double layer plus constant, w_per[mu](x) + c, at off-boundary points."""
    x = np.asarray(x, dtype=float)
    shape = x.shape[:-1]
    pts = x.reshape(-1, 2)
    if check:
        _check_distance(curve, placement, discretization, pts)
    src, nu, sw = _sources(curve, placement, discretization)
    mu = np.asarray(density.values, dtype=float)
    if not np.any(mu):
        return np.full(shape, float(density.constant))
    g = _green(green)
    vals = np.empty(len(pts))
    for b in _blocks(len(pts), len(src)):
        d = pts[b, None, :] - src[None, :, :]
        grad = g.evaluate(d.reshape(-1, 2), order=1).gradient.reshape(d.shape)
        vals[b] = -np.einsum("pki,ki->pk", grad, nu) @ (mu * sw)
    return (vals + density.constant).reshape(shape)


def eval_dlp_gradient(density, curve, placement, discretization, x, green=None, check=True):
    """Gradient of the periodic double layer, from the Hessian of S_per."""
    x = np.asarray(x, dtype=float)
    shape = x.shape[:-1]
    pts = x.reshape(-1, 2)
    if check:
        _check_distance(curve, placement, discretization, pts)
    src, nu, sw = _sources(curve, placement, discretization)
    mu = np.asarray(density.values, dtype=float)
    if not np.any(mu):
        return np.zeros(shape + (2,))
    g = _green(green)
    grad = np.empty((len(pts), 2))
    for b in _blocks(len(pts), len(src)):
        d = pts[b, None, :] - src[None, :, :]
        hess = g.evaluate(d.reshape(-1, 2), order=2).hessian.reshape(d.shape + (2,))
        grad[b] = -np.einsum("pkij,kj,k->pi", hess, nu, mu * sw)
    return grad.reshape(shape + (2,))


def trig_interpolate(values, t):
    """Evaluate the trigonometric interpolant of equispaced samples at parameters t."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    coef = np.fft.rfft(values) / n
    k = np.arange(len(coef))
    t = np.asarray(t, dtype=float)
    phase = np.exp(1j * np.multiply.outer(t, k))
    weights = np.full(len(coef), 2.0)
    weights[0] = 1.0
    if n % 2 == 0:
        # split Nyquist mode symmetrically: cos(n t / 2) only
        weights[-1] = 1.0
        coef = coef.copy()
        coef[-1] = coef[-1].real
    return (phase @ (weights * coef)).real


def spectral_derivative(values):
    """d/dt of the trigonometric interpolant at the nodes (Nyquist mode dropped)."""
    n = len(values)
    coef = np.fft.rfft(values)
    k = np.arange(len(coef))
    dcoef = 1j * k * coef
    if n % 2 == 0:
        dcoef[-1] = 0.0
    return np.fft.irfft(dcoef, n)


def exterior_trace(density, curve, placement, discretization, t, green=None):
    """Exterior boundary value -mu(t)/2 + (W mu)(t) + c at arbitrary parameters t.

    Nystrom interpolation: the smooth kernel is integrated by the node rule at
    the target t, and mu(t) is the trigonometric interpolant of the node values.
    The kernel is split into its scale-invariant classical part, evaluated on
    cancellation-free chords, and the smooth lattice correction.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    s = discretization.nodes
    mu = np.asarray(density.values, dtype=float)
    kern = _classical_kernel(curve, t, s) + _correction_kernel(curve, t, s, placement.eps, green)
    sw = curve.speed(s) * discretization.weight
    return -0.5 * trig_interpolate(mu, t) + kern @ (mu * sw) + density.constant


def offset_trace(density, curve, placement, discretization, t, factors=(4.0, 2.0), green=None):
    """Exterior trace by evaluation along the normal at offsets factor*h and
    linear extrapolation to zero offset (h = node spacing on the hole boundary).

    Low order; used as an independent cross-check of ``exterior_trace``.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    h = discretization.weight * placement.eps * float(np.max(curve.speed(discretization.nodes)))
    x0 = placement.center + placement.eps * curve.point(t)
    nu = curve.normal(t)
    d1, d2 = factors[0] * h, factors[1] * h
    v1 = eval_dlp(density, curve, placement, discretization, x0 + d1 * nu, green, check=False)
    v2 = eval_dlp(density, curve, placement, discretization, x0 + d2 * nu, green, check=False)
    return (d1 * v2 - d2 * v1) / (d1 - d2)


def kress_log_weights(n_nodes):
    """Weights R_k with int_0^{2pi} log(4 sin^2((t_i - s)/2)) f(s) ds ~ sum_j R_{i-j} f_j."""
    n = n_nodes // 2
    tk = np.pi * np.arange(n_nodes) / n
    m = np.arange(1, n)
    r = -(2 * np.pi / n) * (np.cos(np.outer(tk, m)) / m).sum(axis=1)
    r -= (np.pi / n**2) * np.cos(n * tk)
    idx = np.subtract.outer(np.arange(n_nodes), np.arange(n_nodes)) % n_nodes
    return r[idx]


def single_layer_matrix(curve, placement, discretization, green=None):
    """Matrix of phi -> int S_per(x(t_i) - x(s)) phi(s) ds on the hole boundary.

    Integration is in the curve parameter s (no speed factor).  The logarithmic
    singularity is treated by product quadrature on the reference curve.
    """
    nodes = NodeSet.sample(curve, discretization)
    n = discretization.n_nodes
    w = discretization.weight
    eps = placement.eps
    t = discretization.nodes
    d = _pair_chords(curve, t, t)
    r2 = np.einsum("jki,jki->jk", d, d)
    s2 = 4.0 * np.sin(0.5 * np.subtract.outer(t, t)) ** 2
    np.fill_diagonal(r2, 1.0)
    np.fill_diagonal(s2, 1.0)
    smooth_log = np.log(r2 / s2)
    np.fill_diagonal(smooth_log, np.log(nodes.speed**2))
    reg = _green(green).regular_unchecked((eps * d).reshape(-1, 2), order=0).value.reshape(n, n)
    return (
        kress_log_weights(n) / (2.0 * TWO_PI)
        + w * (smooth_log / (2.0 * TWO_PI) + np.log(eps) / TWO_PI + reg)
    )


def normal_flux(density, curve, placement, discretization, green=None):
    """Normal derivative (outward of the hole) of the double layer at the nodes.

    Uses the planar identity, valid for kernels with Laplacian -1 off the lattice,

        grad w_per[mu](x) = int mu nu dsigma - J int grad S_per(x - y) dmu/ds ds,

    whose normal component on the boundary is nu . C + d/ds S_per[dmu/ds];
    the single layer trace is differentiated spectrally.
    """
    nodes = NodeSet.sample(curve, discretization)
    eps = placement.eps
    mu = np.asarray(density.values, dtype=float)
    sw = eps * nodes.speed * discretization.weight
    c_vec = (nodes.normal * (mu * sw)[:, None]).sum(axis=0)
    dmu = spectral_derivative(mu)
    v = single_layer_matrix(curve, placement, discretization, green) @ dmu
    return nodes.normal @ c_vec + spectral_derivative(v) / (eps * nodes.speed)
