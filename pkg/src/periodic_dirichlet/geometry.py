"""Hole shapes, their placement w + eps * Omega in the unit cell, and trapezoid nodes."""
from dataclasses import dataclass, field

import numpy as np

from .errors import InadmissiblePlacementError, InvalidDiscretizationError, InvalidShapeError

CURVE_KINDS = ("disk", "ellipse", "star")


@dataclass(frozen=True)
class BoundaryCurve:
    """Smooth closed curve y(t), t in [0, 2 pi), counterclockwise, star-shaped about 0.

    ``kind`` is one of ``disk`` (``radius``), ``ellipse`` (``a``, ``b``) or ``star``
    (``r0``, ``amp``, ``m``; radial function r0 + amp cos(m t)).
    """

    kind: str
    params: tuple

    def __post_init__(self):
        p = dict(self.params)
        if self.kind == "disk":
            if not p.get("radius", 0) > 0:
                raise InvalidShapeError("disk radius must be positive")
        elif self.kind == "ellipse":
            if not (p.get("a", 0) > 0 and p.get("b", 0) > 0):
                raise InvalidShapeError("ellipse semi-axes must be positive")
        elif self.kind == "star":
            r0, amp, m = p.get("r0", 0), p.get("amp", -1), p.get("m", 0)
            if int(m) != m or m < 2:
                raise InvalidShapeError("star lobe count m must be an integer >= 2")
            if not (r0 > amp >= 0):
                raise InvalidShapeError("star needs r0 > amp >= 0 (positive radial function)")
        else:
            raise InvalidShapeError(f"unknown curve kind {self.kind!r}; expected one of {CURVE_KINDS}")

    @property
    def shape_params(self):
        return dict(self.params)

    def _polar(self, t):
        """Radial function and its first two derivatives (disk and star)."""
        p = self.shape_params
        if self.kind == "disk":
            r = np.full_like(t, p["radius"])
            return r, np.zeros_like(t), np.zeros_like(t)
        m = p["m"]
        c, s = np.cos(m * t), np.sin(m * t)
        return p["r0"] + p["amp"] * c, -p["amp"] * m * s, -p["amp"] * m * m * c

    def derivatives(self, t):
        """Return y(t), y'(t), y''(t), each of shape t.shape + (2,)."""
        t = np.asarray(t, dtype=float)
        c, s = np.cos(t), np.sin(t)
        if self.kind == "ellipse":
            a, b = self.shape_params["a"], self.shape_params["b"]
            y = np.stack([a * c, b * s], axis=-1)
            dy = np.stack([-a * s, b * c], axis=-1)
            return y, dy, -y
        r, dr, ddr = self._polar(t)
        y = np.stack([r * c, r * s], axis=-1)
        dy = np.stack([dr * c - r * s, dr * s + r * c], axis=-1)
        ddy = np.stack(
            [ddr * c - 2 * dr * s - r * c, ddr * s + 2 * dr * c - r * s], axis=-1
        )
        return y, dy, ddy

    def chord(self, t, s):
        """y(t) - y(s) without cancellation, via sum-to-product identities.

        Shapes of ``t`` and ``s`` broadcast; returns broadcast shape + (2,).
        """
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        half = 0.5 * (t - s)
        mid = 0.5 * (t + s)
        dcos = -2.0 * np.sin(mid) * np.sin(half)
        dsin = 2.0 * np.cos(mid) * np.sin(half)
        p = self.shape_params
        if self.kind == "ellipse":
            return np.stack([p["a"] * dcos, p["b"] * dsin], axis=-1)
        if self.kind == "disk":
            return p["radius"] * np.stack([dcos, dsin], axis=-1)
        m = p["m"]
        rt = p["r0"] + p["amp"] * np.cos(m * t)
        dr = -2.0 * p["amp"] * np.sin(m * mid) * np.sin(m * half)
        return np.stack([rt * dcos + dr * np.cos(s), rt * dsin + dr * np.sin(s)], axis=-1)

    def point(self, t):
        return self.derivatives(t)[0]

    def tangent(self, t):
        return self.derivatives(t)[1]

    def speed(self, t):
        dy = self.tangent(t)
        return np.hypot(dy[..., 0], dy[..., 1])

    def normal(self, t):
        """Outward unit normal: the unit tangent rotated clockwise."""
        dy = self.tangent(t)
        sp = np.hypot(dy[..., 0], dy[..., 1])
        return np.stack([dy[..., 1] / sp, -dy[..., 0] / sp], axis=-1)

    def curvature(self, t):
        """Signed curvature, positive for a counterclockwise convex curve."""
        _, dy, ddy = self.derivatives(t)
        cross = dy[..., 0] * ddy[..., 1] - dy[..., 1] * ddy[..., 0]
        return cross / np.hypot(dy[..., 0], dy[..., 1]) ** 3

    def radial(self, t):
        return np.hypot(*np.moveaxis(self.point(t), -1, 0))

    @property
    def max_radius(self):
        p = self.shape_params
        if self.kind == "disk":
            return float(p["radius"])
        if self.kind == "ellipse":
            return float(max(p["a"], p["b"]))
        return float(p["r0"] + p["amp"])

    @property
    def area(self):
        p = self.shape_params
        if self.kind == "disk":
            return float(np.pi * p["radius"] ** 2)
        if self.kind == "ellipse":
            return float(np.pi * p["a"] * p["b"])
        return float(np.pi * (p["r0"] ** 2 + 0.5 * p["amp"] ** 2))

    def parameter_of_direction(self, phi):
        """Parameter t whose point y(t) lies on the ray from 0 at angle ``phi``."""
        phi = np.asarray(phi, dtype=float)
        if self.kind == "ellipse":
            a, b = self.shape_params["a"], self.shape_params["b"]
            return np.mod(np.arctan2(a * np.sin(phi), b * np.cos(phi)), 2 * np.pi)
        return np.mod(phi, 2 * np.pi)

    def to_dict(self):
        return {"kind": self.kind, **self.shape_params}


def make_curve(kind, **shape):
    """Build a BoundaryCurve, e.g. ``make_curve("star", r0=1, amp=0.3, m=5)``."""
    keys = {"disk": ("radius",), "ellipse": ("a", "b"), "star": ("r0", "amp", "m")}
    if kind not in keys:
        raise InvalidShapeError(f"unknown curve kind {kind!r}; expected one of {CURVE_KINDS}")
    missing = [k for k in keys[kind] if k not in shape]
    extra = [k for k in shape if k not in keys[kind]]
    if missing or extra:
        raise InvalidShapeError(f"{kind} takes parameters {keys[kind]}, got {tuple(shape)}")
    params = {k: (int(shape[k]) if k == "m" else float(shape[k])) for k in keys[kind]}
    return BoundaryCurve(kind, tuple(params.items()))


@dataclass(frozen=True)
class HolePlacement:
    """Hole center ``w`` in ]0,1[^2 and scale ``eps``; admissibility is checked eagerly."""

    curve: BoundaryCurve
    w: tuple
    eps: float

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(float(v) for v in self.w))
        w = np.array(self.w)
        if w.shape != (2,) or np.any(w <= 0) or np.any(w >= 1):
            raise InadmissiblePlacementError(f"hole center w={self.w} must lie in ]0,1[^2")
        if not self.eps > 0:
            raise InadmissiblePlacementError(f"eps must be positive, got {self.eps}")
        reach = self.eps * self.curve.max_radius
        if np.any(w - reach <= 0) or np.any(w + reach >= 1):
            raise InadmissiblePlacementError(
                f"hole w + eps*Omega with eps={self.eps} leaves the unit cell "
                f"(needs eps < {self.max_eps:.6g})"
            )

    @property
    def center(self):
        return np.array(self.w)

    @property
    def max_eps(self):
        """Admissibility bound: largest eps with cl(w + eps Omega) inside the cell."""
        w = np.array(self.w)
        return float(np.min(np.minimum(w, 1 - w)) / self.curve.max_radius)


def hole_boundary_point(curve, placement, t):
    """Point w + eps y(t), normal nu(t) and scaled speed eps |y'(t)| on the hole boundary."""
    point = placement.center + placement.eps * curve.point(t)
    return point, curve.normal(t), placement.eps * curve.speed(t)


@dataclass(frozen=True)
class Discretization:
    n_nodes: int
    nodes: np.ndarray = field(repr=False, compare=False)
    weights: np.ndarray = field(repr=False, compare=False)

    @property
    def weight(self):
        return 2 * np.pi / self.n_nodes

    def integrate(self, values):
        return np.sum(values * self.weights, axis=-1)


def discretize(n_nodes):
    """Equispaced trapezoid rule with ``n_nodes`` (even, >= 16) points on [0, 2 pi)."""
    if int(n_nodes) != n_nodes or n_nodes < 16 or n_nodes % 2:
        raise InvalidDiscretizationError(f"N must be an even integer >= 16, got {n_nodes}")
    n_nodes = int(n_nodes)
    nodes = 2 * np.pi * np.arange(n_nodes) / n_nodes
    weights = np.full(n_nodes, 2 * np.pi / n_nodes)
    return Discretization(n_nodes, nodes, weights)


@dataclass(frozen=True)
class NodeSet:
    """Curve quantities sampled at the discretization nodes (reference scale)."""

    y: np.ndarray
    dy: np.ndarray
    speed: np.ndarray
    normal: np.ndarray
    curvature: np.ndarray

    @classmethod
    def sample(cls, curve, disc):
        t = disc.nodes
        y, dy, _ = curve.derivatives(t)
        return cls(y, dy, curve.speed(t), curve.normal(t), curve.curvature(t))
