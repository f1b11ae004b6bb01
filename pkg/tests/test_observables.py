import numpy as np
import pytest

from periodic_dirichlet import (
    BoundaryData,
    ExperimentConfig,
    analyticity_fit,
    discretize,
    energy,
    eval_u,
    fd_solve,
    solve,
    sweep,
)
from periodic_dirichlet.errors import FitError, FluxUnresolvedError
from periodic_dirichlet.observables import boundary_flux, cell_boundary_flux, solve_config

COS = BoundaryData(0.0, (1.0,))
SWEEP_EPS = np.geomspace(0.02, 0.2, 10)


@pytest.fixture(scope="module")
def cos_config(disk):
    return ExperimentConfig(disk, (0.5, 0.5), COS, 64)


@pytest.fixture(scope="module")
def cos_sweep(cos_config):
    return sweep(cos_config, SWEEP_EPS, [(0.1, 0.1), (0.9, 0.3)])


def column(records, kind, point=None):
    rows = [r for r in records if r.kind == kind and (point is None or r.point == point)]
    return [(r.eps, r.value) for r in rows]


def test_constant_data_everywhere_one(star):
    density, system = solve(star, discretize(128), BoundaryData(1.0), 0.2)
    pts = np.array([[0.1, 0.1], [0.9, 0.2], [0.5, 0.05]])
    assert np.allclose(eval_u(density, system, pts), 1.0, atol=1e-10)
    assert abs(energy(density, system)) <= 1e-10


def test_periodic_values(disk_cos_02):
    density, system = disk_cos_02
    x = np.array([0.15, 0.35])
    assert abs(eval_u(density, system, x + [0.0, 1.0]) - eval_u(density, system, x)) <= 1e-10


def test_value_matches_fd_oracle(disk):
    density, system = solve(disk, discretize(64), COS, 0.1)
    grid = fd_solve(disk, system.placement, COS, 256)
    assert abs(float(eval_u(density, system, np.array([0.1, 0.1]))) - grid.value_at((0.1, 0.1))) <= 5e-2


def test_small_eps_energy_near_exterior_limit(disk):
    density, system = solve(disk, discretize(64), COS, 0.05)
    assert energy(density, system) == pytest.approx(np.pi, rel=0.02)


def test_energy_positive_and_cell_flux_cancels(star):
    g = BoundaryData(0.3, (1.0,), (0.0, 0.5))
    density, system = solve(star, discretize(128), g, 0.2, w=(0.45, 0.55))
    assert energy(density, system) >= -1e-9
    assert abs(cell_boundary_flux(density, system)) <= 1e-8


def test_unresolved_flux_flagged(star):
    g = BoundaryData(0.0, (0.0,) * 3 + (1.0,))
    density, system = solve(star, discretize(32), g, 0.2)
    with pytest.raises(FluxUnresolvedError, match="increase N"):
        energy(density, system)
    density, system = solve(star, discretize(128), g, 0.2)
    assert np.isfinite(boundary_flux(density, system)).all()


def test_sweep_cardinality_and_order(cos_config):
    records = sweep(cos_config, [0.2, 0.1], [(0.1, 0.1)])
    assert [(r.kind, r.eps) for r in records] == [("u", 0.1), ("energy", 0.1), ("u", 0.2), ("energy", 0.2)]
    assert all(r.accepted and r.residual <= 1e-6 and r.n_nodes == 64 for r in records)
    assert records[0].u_value is not None and records[0].energy is None
    assert records[1].energy is not None and records[1].point is None


def test_sweep_constant_data(disk):
    config = ExperimentConfig(disk, (0.5, 0.5), BoundaryData(1.0), 32)
    records = sweep(config, [0.05, 0.2], [(0.1, 0.1)])
    assert all(abs(v - 1.0) <= 1e-10 for _, v in column(records, "u"))
    assert all(abs(v) <= 1e-10 for _, v in column(records, "energy"))


def test_sweep_is_deterministic(cos_config):
    a = sweep(cos_config, [0.2, 0.07], [(0.1, 0.1)], workers=1)
    b = sweep(cos_config, [0.07, 0.2], [(0.1, 0.1)], workers=3)
    assert a == b


def test_sweep_flags_failures(disk):
    config = ExperimentConfig(disk, (0.5, 0.5), COS, 64)
    records = sweep(config, [0.2, 0.6], [(0.1, 0.1)])
    bad = [r for r in records if r.eps == 0.6]
    assert len(bad) == 2 and all(not r.accepted and np.isnan(r.value) for r in bad)
    assert all(r.accepted for r in records if r.eps == 0.2)


def test_sweep_values_decay_geometrically(cos_sweep):
    vals = np.array([v for _, v in column(cos_sweep, "u", (0.1, 0.1))])
    assert np.all(np.diff(vals) < 0) or np.all(np.diff(vals) > 0)


class TestFit:
    def test_constant(self):
        eps = np.linspace(0.02, 0.2, 8)
        fit = analyticity_fit(list(zip(eps, np.full(8, 3.0))), 4)
        assert fit.coefficients[0] == pytest.approx(3.0, abs=1e-12)
        assert np.all(np.abs(fit.coefficients[1:]) <= 1e-12)
        assert fit.value_at_zero == pytest.approx(3.0, abs=1e-12)

    def test_polynomial_reproduction(self):
        eps = np.linspace(0.02, 0.2, 6)
        fit = analyticity_fit(list(zip(eps, 1 + 2 * eps + eps**2)), 2)
        assert fit.max_rel_residual <= 1e-12
        assert fit.value_at_zero == pytest.approx(1.0, abs=1e-12)
        assert np.allclose(fit.monomial_coefficients, [1.0, 2.0, 1.0], atol=1e-10)
        assert fit(0.5) == pytest.approx(2.25, abs=1e-10)

    def test_degenerate_inputs(self):
        with pytest.raises(FitError):
            analyticity_fit([(0.1, 1.0), (0.2, 2.0), (0.3, 3.0)], 2)
        with pytest.raises(FitError):
            analyticity_fit([(0.1, 1.0), (0.1, 2.0), (0.3, 3.0), (0.4, 1.0)], 2)
        with pytest.raises(FitError):
            analyticity_fit([(0.1, 1.0), (0.2, np.nan), (0.3, 3.0), (0.4, 1.0)], 2)

    def test_decay_ratio_tracks_analytic_radius(self):
        eps = np.linspace(0.02, 0.2, 12)
        close = analyticity_fit(list(zip(eps, 1 / (eps + 0.01))), 8)
        far = analyticity_fit(list(zip(eps, 1 / (eps + 1.0))), 8)
        assert far.coeff_decay_ratio < close.coeff_decay_ratio < 1

    def test_u_value_at_zero_is_circle_constant(self, cos_sweep):
        fit = analyticity_fit(column(cos_sweep, "u", (0.1, 0.1)), 8)
        assert abs(fit.value_at_zero) <= 1e-4
        assert fit.max_rel_residual <= 1e-6

    def test_constant_limit_independent_of_point(self, cos_sweep):
        a = analyticity_fit(column(cos_sweep, "u", (0.1, 0.1)), 8)
        b = analyticity_fit(column(cos_sweep, "u", (0.9, 0.3)), 8)
        assert abs(a.value_at_zero - b.value_at_zero) <= 1e-4

    def test_energy_scaling(self, cos_sweep):
        fit = analyticity_fit(column(cos_sweep, "energy"), 8)
        assert np.isfinite(fit.value_at_zero)
        assert fit.coeff_decay_ratio < 0.9

    def test_first_order_coefficient_stable(self, cos_sweep):
        samples = column(cos_sweep, "u", (0.1, 0.1))
        c6 = analyticity_fit(samples, 6).monomial_coefficients[1]
        c8 = analyticity_fit(samples, 8).monomial_coefficients[1]
        assert c6 != 0 and abs(c8 - c6) <= 0.1 * abs(c6)


def test_solve_config_reports_residual(cos_config):
    _, _, res = solve_config(cos_config, 0.25)
    assert res <= 1e-6
