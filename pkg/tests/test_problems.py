import numpy as np
import pytest

from quickfv.acceptance import BURGERS_PANELS, gauss_cell_average
from quickfv.errors import NumericalError
from quickfv.grid import Grid, SchemeConfig, State, Topology
from quickfv.harness import STEADY_GRIDS, UNSTEADY_GRIDS
from quickfv.problems import (PROBLEMS, burgers_characteristic_foot, steady_burgers,
                              steady_viscous_burgers, unsteady_burgers, unsteady_linear)
from quickfv.time_march import TimeMarchConfig, march

PADDED = Topology.DIRICHLET_PADDED
TWO_PI = 2 * np.pi


@pytest.mark.parametrize("problem", [steady_burgers(), steady_viscous_burgers(),
                                     steady_viscous_burgers(0.01)])
@pytest.mark.parametrize("n", STEADY_GRIDS)
def test_steady_cell_averages_against_gauss(problem, n):
    g = Grid.uniform(n, topology=PADDED)
    x, h = g.centers, g.h
    assert np.max(np.abs(problem.forcing_cell_avg(x, h)
                         - gauss_cell_average(problem.forcing_point, x, h))) <= 1e-12
    assert np.max(np.abs(problem.exact_cell_avg(x, h)
                         - gauss_cell_average(problem.exact_point, x, h))) <= 1e-12


@pytest.mark.parametrize("n", UNSTEADY_GRIDS)
def test_unsteady_cell_averages_against_gauss(n):
    g = Grid.uniform(n)
    x, h = g.centers, g.h
    lin = unsteady_linear()
    assert np.max(np.abs(lin.exact_cell_avg(x, h) - gauss_cell_average(lin.exact_point, x, h))) \
        <= 1e-12
    bur = unsteady_burgers()
    ref = gauss_cell_average(bur.exact_point, x, h, panels=BURGERS_PANELS)
    assert np.max(np.abs(bur.exact_cell_avg(x, h) - ref)) <= 1e-12


def test_exact_point_at_origin():
    assert steady_burgers().exact_point(0.0) == 0.0


def test_cell_average_deconvolution():
    # avg - u = (h^2/24) u_xx + O(h^4) with u_xx = -4 sin 2x
    x = np.linspace(0.1, 0.9, 9)
    errs = []
    for h in (0.1, 0.05, 0.025):
        avg = steady_burgers().exact_cell_avg(x, h)
        errs.append(np.max(np.abs(avg - np.sin(2 * x) + h * h / 6 * np.sin(2 * x))))
    assert np.log2(errs[0] / errs[1]) == pytest.approx(4, abs=0.1)
    assert np.log2(errs[1] / errs[2]) == pytest.approx(4, abs=0.1)


def test_viscous_reduces_to_inviscid_forcing():
    x = np.linspace(0, 1, 50)
    a, b = steady_viscous_burgers(0.0), steady_burgers()
    assert np.allclose(a.forcing_point(x), b.forcing_point(x), rtol=0, atol=1e-15)
    assert np.allclose(a.forcing_cell_avg(x, 0.1), b.forcing_cell_avg(x, 0.1), rtol=0, atol=1e-15)


@pytest.mark.parametrize("nu", [0.0, 1.0, 0.25])
def test_steady_exact_solutions_satisfy_pde(nu):
    x = np.linspace(0, 1, 1000)
    p = steady_viscous_burgers(nu)
    u, ux, uxx = np.sin(2 * x), 2 * np.cos(2 * x), -4 * np.sin(2 * x)
    assert np.allclose(p.exact_point(x), u, rtol=0, atol=0)
    assert np.max(np.abs(u * ux - nu * uxx - p.forcing_point(x))) <= 1e-12


def test_burgers_reference_initial_and_stationary_zeros():
    p = unsteady_burgers()
    x = np.linspace(0, 1, 33)
    assert np.array_equal(p.exact_point(x, 0.0), np.sin(TWO_PI * x))
    for t in (0.02, 0.105, 0.15):
        assert np.allclose(p.exact_point(np.array([0.0, 0.5]), t), 0.0, atol=1e-14)


def test_burgers_reference_solves_characteristic_equation():
    x = np.linspace(0, 1, 257)
    t = 0.105
    u, xi = burgers_characteristic_foot(x, t)
    assert np.max(np.abs(u - np.sin(TWO_PI * (x - u * t)))) <= 1e-13
    assert np.allclose(xi, x - u * t)


def test_burgers_reference_refuses_shocked_time():
    with pytest.raises(NumericalError):
        burgers_characteristic_foot(np.array([0.3]), 0.2)


def test_burgers_cell_average_at_time_zero():
    g = Grid.uniform(16)
    got = unsteady_burgers().exact_cell_avg(g.centers, g.h, 0.0)
    lin = unsteady_linear().exact_cell_avg(g.centers, g.h, 0.0)
    assert np.allclose(got, lin, rtol=0, atol=1e-14)


def test_linear_exact_is_translation():
    p = unsteady_linear(0.75)
    x = np.linspace(0, 1, 40)
    for t in (0.0, 0.105, 1.7):
        assert np.allclose(p.exact_point(x, t), p.exact_point((x - 0.75 * t) % 1.0, 0.0),
                           rtol=0, atol=1e-13)


def test_final_time_is_configurable():
    p = unsteady_burgers(final_time=0.05)
    x = np.array([0.3])
    assert p.final_time == 0.05
    assert p.exact_point(x) == p.exact_point(x, 0.05)


def test_problem_registry():
    assert set(PROBLEMS) == {"steady_burgers", "steady_viscous_burgers", "unsteady_burgers",
                             "unsteady_linear"}
    assert all(PROBLEMS[k]().steady == k.startswith("steady") for k in PROBLEMS)


def _fine_march_gap(n, dt, steps):
    """L1 gap between the reference cell averages on ``n`` cells and block means of a
    marched solution on ``10 n`` cells, plus the 32-cell discretization error."""
    p = unsteady_burgers()
    fine = Grid.uniform(10 * n)
    sol = march(State(p.initial(fine.centers), fine), p, SchemeConfig(), TimeMarchConfig(dt, steps))
    coarse = Grid.uniform(n)
    # block means of point values approximate cell averages to O(h_fine^2)
    blocks = sol.values.reshape(n, 10).mean(axis=1)
    gap = np.mean(np.abs(blocks - p.exact_cell_avg(coarse.centers, coarse.h)))
    g32 = Grid.uniform(32)
    sol32 = march(State(p.initial(g32.centers), g32), p, SchemeConfig(),
                  TimeMarchConfig(0.000125, 840))
    return gap, np.mean(np.abs(sol32.values - p.exact_point(g32.centers)))


def test_burgers_reference_against_fine_march():
    gap, err32 = _fine_march_gap(256, 0.000125, 840)
    assert gap * 100 <= err32


@pytest.mark.slow
def test_burgers_reference_against_fine_march_full_size():
    gap, err32 = _fine_march_gap(2048, 0.0000125, 8400)
    assert gap * 100 <= err32
