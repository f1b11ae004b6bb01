import numpy as np
import pytest

from periodic_dirichlet import HolePlacement, discretize, hole_boundary_point, make_curve
from periodic_dirichlet.errors import (
    InadmissiblePlacementError,
    InvalidDiscretizationError,
    InvalidShapeError,
)
from periodic_dirichlet.geometry import NodeSet

T = np.linspace(0, 2 * np.pi, 401)
CURVES = [
    make_curve("disk", radius=1.3),
    make_curve("ellipse", a=1.0, b=0.6),
    make_curve("star", r0=1.0, amp=0.3, m=5),
]


def test_disk_closed_form(disk):
    y = disk.point(T)
    assert np.allclose(y, np.stack([np.cos(T), np.sin(T)], axis=-1), atol=1e-15)
    assert np.allclose(disk.normal(T), y, atol=1e-15)
    assert np.allclose(disk.curvature(T), 1.0, atol=1e-14)


def test_degenerate_ellipse_is_the_disk(disk):
    e = make_curve("ellipse", a=1.0, b=1.0)
    assert np.max(np.abs(e.point(T) - disk.point(T))) <= 1e-15


def test_star_perimeter_self_converges(star):
    per = [discretize(n).integrate(star.speed(discretize(n).nodes)) for n in (256, 512)]
    assert abs(per[0] - per[1]) <= 1e-12 * per[1]


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.kind)
def test_normal_is_unit_outward_and_orthogonal(curve):
    nu = curve.normal(T)
    dy = curve.tangent(T)
    assert np.allclose(np.linalg.norm(nu, axis=-1), 1.0, atol=1e-14)
    assert np.max(np.abs(np.sum(nu * dy, axis=-1))) <= 1e-12
    # outward: points away from the origin inside the hole
    assert np.all(np.sum(nu * curve.point(T), axis=-1) > 0)


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.kind)
def test_counterclockwise_orientation(curve):
    # enclosed signed area via the trapezoid rule equals the closed-form area
    disc = discretize(256)
    y, dy, _ = curve.derivatives(disc.nodes)
    signed = 0.5 * disc.integrate(y[:, 0] * dy[:, 1] - y[:, 1] * dy[:, 0])
    assert signed == pytest.approx(curve.area, rel=1e-13)
    assert np.all(curve.radial(T) > 0)


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.kind)
def test_curvature_matches_tangent_angle_differences(curve):
    h = 1e-5
    ang = lambda t: np.unwrap(np.arctan2(curve.tangent(t)[..., 1], curve.tangent(t)[..., 0]))
    dtheta = (np.arctan2(
        np.sin(ang(T + h) - ang(T - h)), np.cos(ang(T + h) - ang(T - h))
    )) / (2 * h)
    assert np.max(np.abs(dtheta / curve.speed(T) - curve.curvature(T))) <= 1e-6


def test_disk_curvature_is_reciprocal_radius():
    assert np.allclose(make_curve("disk", radius=2.5).curvature(T), 0.4, rtol=0, atol=1e-15)


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.kind)
def test_stable_chord_matches_difference(curve):
    t = np.linspace(0.1, 6.0, 50)
    s = t[::-1]
    assert np.allclose(curve.chord(t, s), curve.point(t) - curve.point(s), atol=1e-14)


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.kind)
def test_parameter_of_direction_inverts_polar_angle(curve):
    phi = np.arctan2(curve.point(T)[:, 1], curve.point(T)[:, 0])
    t = curve.parameter_of_direction(phi)
    assert np.allclose(curve.point(t), curve.point(T), atol=1e-12)


def test_boundary_point_example(disk):
    point, normal, speed = hole_boundary_point(disk, HolePlacement(disk, (0.5, 0.5), 0.25), 0.0)
    assert np.allclose(point, [0.75, 0.5], atol=1e-16)
    assert np.allclose(normal, [1.0, 0.0], atol=1e-16)
    assert speed == pytest.approx(0.25, abs=1e-16)


@pytest.mark.parametrize("eps", [0.01, 0.1, 0.37])
def test_disk_boundary_at_distance_eps(disk, eps):
    point, _, _ = hole_boundary_point(disk, HolePlacement(disk, (0.5, 0.5), eps), T)
    assert np.allclose(np.linalg.norm(point - 0.5, axis=-1), eps, atol=1e-15)


def test_star_admissibility(star):
    placement = HolePlacement(star, (0.5, 0.5), 0.2)
    point, _, _ = hole_boundary_point(star, placement, T)
    assert np.max(np.linalg.norm(point - 0.5, axis=-1)) == pytest.approx(0.26, abs=1e-12)
    assert star.max_radius == pytest.approx(1.3, abs=1e-12)
    assert placement.max_eps == pytest.approx(0.5 / 1.3)


def test_inadmissible_placements(disk, star):
    with pytest.raises(InadmissiblePlacementError):
        HolePlacement(star, (0.5, 0.5), 0.4)
    with pytest.raises(InadmissiblePlacementError):
        HolePlacement(disk, (0.1, 0.5), 0.2)
    with pytest.raises(InadmissiblePlacementError):
        HolePlacement(disk, (1.0, 0.5), 0.01)
    with pytest.raises(InadmissiblePlacementError):
        HolePlacement(disk, (0.5, 0.5), 0.0)


def test_invalid_shapes():
    with pytest.raises(InvalidShapeError):
        make_curve("disk", radius=0.0)
    with pytest.raises(InvalidShapeError):
        make_curve("star", r0=1.0, amp=1.2, m=5)
    with pytest.raises(InvalidShapeError):
        make_curve("star", r0=1.0, amp=0.2, m=1)
    with pytest.raises(InvalidShapeError):
        make_curve("square", side=1.0)
    with pytest.raises(InvalidShapeError):
        make_curve("disk", r=1.0)


def test_quadrature_examples():
    disc = discretize(64)
    assert disc.integrate(np.ones(64)) == pytest.approx(2 * np.pi, abs=1e-14)
    assert abs(disc.integrate(np.cos(3 * disc.nodes))) <= 1e-14
    big = make_curve("disk", radius=2.0)
    assert disc.integrate(big.speed(disc.nodes)) == pytest.approx(4 * np.pi, abs=1e-13)


@pytest.mark.parametrize("n", [15, 17, 8, 0, 32.5])
def test_invalid_discretization(n):
    with pytest.raises(InvalidDiscretizationError):
        discretize(n)


def test_node_set_matches_curve(star):
    disc = discretize(32)
    nodes = NodeSet.sample(star, disc)
    assert np.allclose(nodes.y, star.point(disc.nodes))
    assert np.allclose(nodes.normal, star.normal(disc.nodes))


def test_to_dict_round_trip(star):
    d = star.to_dict()
    kind = d.pop("kind")
    assert make_curve(kind, **d) == star
