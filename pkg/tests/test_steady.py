import logging
from dataclasses import replace

import numpy as np
import pytest

from quickfv.errors import ConfigurationError, NumericalError
from quickfv.grid import FluxFunction, Grid, SchemeConfig, State, Topology, burgers_flux, linear_flux
from quickfv.problems import constant_problem, steady_burgers, steady_viscous_burgers
from quickfv.residual import residual_values
from quickfv.steady import (GROWTH_LIMIT, first_order_face_d, first_order_jacobian, first_order_residual,
                            roundoff_floor, solve_steady)

from helpers import diffusion_problem

PADDED = Topology.DIRICHLET_PADDED


def _grid(n=15):
    return Grid.uniform(n, topology=PADDED)


def _interior_rows(jac, g):
    rows = np.arange(2, g.n_cells - 2)
    return jac.lower[rows], jac.diag[rows], jac.upper[rows]


def test_linear_flux_rows_are_upwind(rng):
    a = 0.8
    g = _grid()
    problem = replace(constant_problem(0.0, a=a), flux=linear_flux(a))
    jac = first_order_jacobian(State(rng.standard_normal(15), g), problem, SchemeConfig())
    lo, di, up = _interior_rows(jac, g)
    assert np.allclose(lo, -a / g.h) and np.allclose(di, a / g.h) and np.allclose(up, 0.0)


def test_diffusion_rows_are_three_point(rng):
    nu = 0.4
    g = _grid()
    jac = first_order_jacobian(State(rng.standard_normal(15), g), diffusion_problem(nu),
                               SchemeConfig())
    lo, di, up = _interior_rows(jac, g)
    h2 = g.h ** 2
    assert np.allclose(lo, -nu / h2) and np.allclose(di, 2 * nu / h2) and np.allclose(up, -nu / h2)


def test_padded_rows_are_identity(rng):
    g = _grid()
    jac = first_order_jacobian(State(rng.standard_normal(15), g), steady_burgers(), SchemeConfig())
    dense = jac.to_dense()
    for r in (0, 1, 13, 14):
        assert np.array_equal(dense[r], np.eye(15)[r])


def test_burgers_at_unity_matches_linear_speed_one():
    g = _grid()
    ones = State(np.ones(15), g)
    burgers = first_order_jacobian(ones, steady_burgers(), SchemeConfig())
    linear = first_order_jacobian(ones, replace(steady_burgers(), flux=linear_flux(1.0)),
                                  SchemeConfig())
    assert np.allclose(burgers.to_dense(), linear.to_dense())


@pytest.mark.parametrize("problem", [steady_burgers(), steady_viscous_burgers(0.3)])
def test_jacobian_matches_finite_differences(problem, rng):
    g = _grid(21)
    u = problem.exact_point(g.centers) + 0.1 * rng.standard_normal(21)
    cfg = SchemeConfig()
    jac = first_order_jacobian(State(u, g), problem, cfg).to_dense()
    d = first_order_face_d(u, problem)
    eps = 1e-6
    for j in range(21):
        up, um = u.copy(), u.copy()
        up[j] += eps
        um[j] -= eps
        col = (first_order_residual(up, g, problem, cfg, d)
               - first_order_residual(um, g, problem, cfg, d)) / (2 * eps)
        assert np.allclose(jac[2:-2, j], col[2:-2], rtol=0, atol=1e-6 * np.abs(jac).max())


@pytest.mark.parametrize("problem, cfg", [
    (steady_burgers(), SchemeConfig(kappa=0.5)),
    (steady_burgers(), SchemeConfig(kappa=0.0)),
    (steady_viscous_burgers(), SchemeConfig(kappa=1 / 3)),
    (steady_viscous_burgers(), SchemeConfig(kappa=0.5, alpha=4 / 3)),
])
def test_converges_to_high_order_residual(problem, cfg):
    g = _grid(31)
    u0 = problem.exact_point(g.centers)
    sol, report = solve_steady(State(u0, g), problem, cfg, tol=1e-12)
    assert report.converged
    res = residual_values(sol.values, g, problem, cfg)
    assert np.mean(np.abs(res[g.interior])) <= report.tolerance
    assert report.history[-1] == report.final_residual_l1
    # boundary cells keep their exact values bit for bit
    assert np.array_equal(sol.values[g.fixed_mask], u0[g.fixed_mask])


@pytest.mark.parametrize("n", [15, 63, 127])
def test_zero_initialisation_converges(n):
    problem = steady_burgers()
    g = _grid(n)
    u0 = np.where(g.fixed_mask, problem.exact_point(g.centers), 0.0)
    sol, report = solve_steady(State(u0, g), problem, SchemeConfig())
    assert report.converged
    assert np.max(np.abs(sol.values - problem.exact_point(g.centers))) < 1e-3


def test_non_convergence_is_reported(caplog):
    problem = steady_burgers()
    g = _grid(31)
    u0 = np.where(g.fixed_mask, problem.exact_point(g.centers), 0.0)
    _, report = solve_steady(State(u0, g), problem, SchemeConfig(), max_iter=2)
    assert not report.converged
    assert report.iterations == 2 and 1 <= len(report.history) <= 3
    assert "stopped after" in caplog.text


def test_rejected_steps_are_logged(caplog):
    problem = steady_burgers()
    g = _grid(63)
    u0 = np.where(g.fixed_mask, problem.exact_point(g.centers), 0.0)
    with caplog.at_level(logging.DEBUG, logger="quickfv.steady"):
        _, report = solve_steady(State(u0, g), problem, SchemeConfig())
    assert report.converged
    assert "rejected step" in caplog.text
    # accepted iterates never grow the residual by more than the allowed factor
    h = np.array(report.history)
    assert np.all(h[1:] <= GROWTH_LIMIT * h[:-1])


def test_stall_raises():
    # a flux with the wrong-signed derivative makes every Newton step worse
    bad = replace(steady_burgers(), flux=FluxFunction(lambda u: 0.5 * u * u, lambda u: -50 * u))
    g = _grid(15)
    u0 = np.where(g.fixed_mask, bad.exact_point(g.centers), 0.0)
    with pytest.raises(NumericalError, match="diverged|stalled"):
        solve_steady(State(u0, g), bad, SchemeConfig())


def test_tolerance_is_raised_to_roundoff_floor():
    problem = steady_viscous_burgers()
    g = _grid(127)
    u0 = problem.exact_point(g.centers)
    _, report = solve_steady(State(u0, g), problem, SchemeConfig(kappa=1 / 3), tol=1e-16)
    forcing = problem.forcing_cell_avg(g.centers, g.h)
    assert report.tolerance == roundoff_floor(u0, g, problem, 1.0, forcing)
    assert report.converged


def test_history_csv(tmp_path):
    problem = steady_burgers()
    g = _grid()
    _, report = solve_steady(State(problem.exact_point(g.centers), g), problem, SchemeConfig())
    text = report.write_csv(tmp_path / "h.csv").read_text().splitlines()
    assert text[0] == "iteration,residual_l1"
    assert len(text) == len(report.history) + 1
    assert float(text[-1].split(",")[1]) == report.final_residual_l1


def test_periodic_grid_rejected():
    with pytest.raises(ConfigurationError):
        solve_steady(State(np.zeros(16), Grid.uniform(16)), steady_burgers(), SchemeConfig())
