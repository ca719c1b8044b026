"""Exit criteria for the package, runnable from pytest and from ``quickfv verify``.

Every check compares against an oracle that does not share code with the
path being checked: integer stencils, dense elimination, Gauss-Legendre
quadrature, finite differences, or the Runge-Kutta stability polynomial.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .grid import (Grid, ReconMode, SchemeConfig, State, TimeTreatment, Topology, burgers_flux,
                   zero_flux)
from .harness import (REFERENCE_TIME, STEADY_GRIDS, UNSTEADY_GRIDS, Experiment, SchemeRun,
                      run_grid_sequence)
from .linalg import TridiagonalSystem, mass_matrix, solve_tridiagonal
from .problems import (Problem, steady_burgers, steady_viscous_burgers, unsteady_burgers,
                       unsteady_linear)
from .reconstruction import interp_left, interp_right
from .residual import residual_values
from .steady import first_order_face_d, first_order_jacobian, first_order_residual
from .time_march import make_rhs, march, ssp_rk3
from .metrics import observed_order

ORDER_TOL = 0.3
HALF, THIRD = 0.5, 1.0 / 3.0
BURGERS_PANELS = 16


@dataclass
class Criterion:
    number: int
    title: str
    checks: list[tuple[str, bool]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(ok for _, ok in self.checks)

    def check(self, text: str, ok) -> bool:
        self.checks.append((text, bool(ok)))
        return bool(ok)

    def order(self, what: str, value: float, target: float, tol: float = ORDER_TOL):
        self.check(f"{what}: order {value:.3f} (target {target} +/- {tol})",
                   abs(value - target) <= tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] criterion {self.number}: {self.title}"


@functools.lru_cache(maxsize=None)
def _steady_run(experiment: Experiment, scheme: SchemeConfig) -> SchemeRun:
    return run_grid_sequence(experiment, scheme, STEADY_GRIDS)


@functools.lru_cache(maxsize=None)
def _unsteady_run(experiment: Experiment, scheme: SchemeConfig) -> SchemeRun:
    return run_grid_sequence(experiment, scheme, UNSTEADY_GRIDS, REFERENCE_TIME)


def _finest(run: SchemeRun, norm: str) -> float:
    return run.table(norm, True).finest_order


def _last3(run: SchemeRun, norm: str) -> float:
    return run.table(norm, False).fitted_order(3)


def _unsteady(kappa, treatment, recon=ReconMode.SOLUTION):
    return SchemeConfig(kappa=kappa, time_treatment=treatment, recon_mode=recon)


# 1-7: convergence studies -------------------------------------------------

def criterion_steady_burgers() -> Criterion:
    c = Criterion(1, "steady Burgers orders (kappa = 1/2, 1/3, 0)")
    exp = Experiment.STEADY_BURGERS
    quick = _steady_run(exp, SchemeConfig(kappa=HALF))
    muscl = _steady_run(exp, SchemeConfig(kappa=THIRD))
    fromm = _steady_run(exp, SchemeConfig(kappa=0.0))
    c.order("kappa=1/2 te_point", _finest(quick, "te_point"), 3.0)
    c.order("kappa=1/2 de_point", _finest(quick, "de_point"), 3.0)
    c.order("kappa=1/3 te_cellavg", _finest(muscl, "te_cellavg"), 3.0)
    c.order("kappa=1/3 de_cellavg", _finest(muscl, "de_cellavg"), 3.0)
    c.order("kappa=0 de_point", _finest(fromm, "de_point"), 2.0)
    return c


def criterion_viscous_auto_alpha() -> Criterion:
    c = Criterion(2, "steady viscous Burgers with compatible alpha")
    exp = Experiment.STEADY_VISC_BURGERS
    for kappa, target in ((HALF, 3.0), (THIRD, 2.0), (0.0, 2.0)):
        run = _steady_run(exp, SchemeConfig(kappa=kappa))
        c.order(f"kappa={kappa:.4g} te_point", _finest(run, "te_point"), target)
        c.order(f"kappa={kappa:.4g} de_point", _finest(run, "de_point"), target)
        order = _finest(run, "de_cellavg")
        c.check(f"kappa={kappa:.4g} de_cellavg: order {order:.3f} <= 2.3", order <= 2.3)
    return c


def criterion_viscous_alpha_four_thirds() -> Criterion:
    c = Criterion(3, "steady viscous Burgers with alpha = 4/3 loses third order")
    run = _steady_run(Experiment.STEADY_VISC_BURGERS, SchemeConfig(kappa=HALF, alpha=4.0 / 3.0))
    c.order("kappa=1/2 te_point", _finest(run, "te_point"), 2.0)
    c.order("kappa=1/2 de_point", _finest(run, "de_point"), 2.0)
    return c


def criterion_coupled_quick() -> Criterion:
    c = Criterion(4, "unsteady Burgers, coupled and lumped mass (kappa = 1/2)")
    coupled = _unsteady_run(Experiment.UNSTEADY_BURGERS, _unsteady(HALF, TimeTreatment.COUPLED_MASS))
    lumped = _unsteady_run(Experiment.UNSTEADY_BURGERS, _unsteady(HALF, TimeTreatment.LUMPED_MASS))
    c.order("coupled de_point", _last3(coupled, "de_point"), 3.0)
    c.order("coupled de_cellavg", _last3(coupled, "de_cellavg"), 2.0)
    c.order("lumped de_point", _last3(lumped, "de_point"), 2.0)
    return c


def criterion_quickest_burgers() -> Criterion:
    c = Criterion(5, "QUICKEST on unsteady Burgers")
    exp = Experiment.UNSTEADY_BURGERS
    sol = _unsteady_run(exp, _unsteady(THIRD, TimeTreatment.QUICKEST_FD))
    flx = _unsteady_run(exp, _unsteady(THIRD, TimeTreatment.QUICKEST_FD, ReconMode.FLUX))
    c.order("solution interpolation de_point", _last3(sol, "de_point"), 2.0)
    c.order("flux interpolation de_point", _last3(flx, "de_point"), 3.0)
    return c


def criterion_quickest_linear() -> Criterion:
    c = Criterion(6, "QUICKEST on unsteady linear convection (a = 0.75)")
    exp = Experiment.UNSTEADY_LINEAR
    sol_cfg = _unsteady(THIRD, TimeTreatment.QUICKEST_FD)
    flx_cfg = _unsteady(THIRD, TimeTreatment.QUICKEST_FD, ReconMode.FLUX)
    c.order("solution interpolation de_point", _last3(_unsteady_run(exp, sol_cfg), "de_point"), 3.0)
    c.order("flux interpolation de_point", _last3(_unsteady_run(exp, flx_cfg), "de_point"), 3.0)

    problem = unsteady_linear()
    rng = np.random.default_rng(6)
    same = True
    for n in (32, 257):
        grid = Grid.uniform(n)
        for u in (problem.initial(grid.centers), rng.standard_normal(n)):
            r_sol = make_rhs(grid, problem, sol_cfg)(u)
            r_flx = make_rhs(grid, problem, flx_cfg)(u)
            same &= np.array_equal(r_sol, r_flx)
    c.check("solution and flux interpolation residuals are bit-identical", same)
    return c


def criterion_vanleer() -> Criterion:
    c = Criterion(7, "explicit residual-corrected QUICK (kappa = 1/2)")
    run = _unsteady_run(Experiment.UNSTEADY_BURGERS, _unsteady(HALF, TimeTreatment.VANLEER_EXPLICIT))
    c.order("de_point", _last3(run, "de_point"), 3.0)
    c.order("de_cellavg", _last3(run, "de_cellavg"), 2.0)
    return c


# 8: property suite ----------------------------------------------------------

def _diffusion_only(nu: float = 1.0) -> Problem:
    return replace(steady_viscous_burgers(nu), flux=zero_flux(), has_forcing=False)


def _stencil_apply(u: np.ndarray, weights, denom: float) -> np.ndarray:
    """Centered five-point stencil written out term by term (periodic)."""
    w = np.asarray(weights, dtype=float)
    acc = np.zeros_like(u)
    for w_k, shift in zip(w, (2, 1, 0, -1, -2)):
        acc += w_k * np.roll(u, shift)
    return acc / denom


def check_quadratic_exactness(c: Criterion, rng):
    worst = 0.0
    for _ in range(200):
        a, b, q = rng.uniform(-5, 5, 3)
        x0, h = rng.uniform(-2, 2), rng.uniform(0.01, 1.0)
        p = lambda x: a + b * x + q * x * x  # noqa: E731
        face = x0 + 0.5 * h
        scale = 1.0 + abs(p(face))
        worst = max(worst,
                    abs(interp_left(p(x0 - h), p(x0), p(x0 + h), HALF) - p(face)) / scale,
                    abs(interp_right(p(x0), p(x0 + h), p(x0 + 2 * h), HALF) - p(face)) / scale)
    c.check(f"quadratic exactness of kappa=1/2 interpolation (max rel err {worst:.1e} <= 1e-13)",
            worst <= 1e-13)


def check_cubic_average(c: Criterion, rng):
    worst = 0.0
    for _ in range(200):
        coef = rng.uniform(-5, 5, 4)
        x0, h = rng.uniform(-2, 2), rng.uniform(0.01, 1.0)
        p = lambda x: np.polyval(coef, x)  # noqa: E731
        face = x0 + 0.5 * h
        avg = 0.5 * (interp_left(p(x0 - h), p(x0), p(x0 + h), HALF)
                     + interp_right(p(x0), p(x0 + h), p(x0 + 2 * h), HALF))
        worst = max(worst, abs(avg - p(face)) / (1.0 + abs(p(face))))
    c.check(f"average of left/right kappa=1/2 traces is cubic-exact (max rel err {worst:.1e})",
            worst <= 1e-12)


def check_diffusion_stencils(c: Criterion, rng):
    problem = _diffusion_only()
    for n in (16, 33):
        grid = Grid.uniform(n)
        u = rng.standard_normal(n)
        scale = np.max(np.abs(u)) / grid.h ** 2
        target = -_stencil_apply(u, (-1, 28, -54, 28, -1), 24.0 * grid.h ** 2)
        for kappa in (0.0, THIRD, HALF):
            res = residual_values(u, grid, problem, SchemeConfig(kappa=kappa))
            err = np.max(np.abs(res - target)) / scale
            c.check(f"auto-alpha diffusion stencil (-1,28,-54,28,-1)/24h^2, kappa={kappa:.4g}, "
                    f"n={n} (rel err {err:.1e})", err <= 1e-13)
        target = -_stencil_apply(u, (-1, 16, -30, 16, -1), 12.0 * grid.h ** 2)
        res = residual_values(u, grid, problem, SchemeConfig(kappa=HALF, alpha=4.0 / 3.0))
        err = np.max(np.abs(res - target)) / scale
        c.check(f"alpha=4/3 diffusion stencil (-1,16,-30,16,-1)/12h^2, n={n} (rel err {err:.1e})",
                err <= 1e-13)


def check_mass_matrix(c: Criterion):
    ok = True
    for n in (3, 8, 257):
        for cyclic in (True, False):
            m = mass_matrix(n, cyclic)
            rows = m.to_dense().sum(axis=1)
            if not cyclic:
                rows = rows[1:-1]
            ok &= np.all(np.abs(rows - 1.0) <= 2 * np.finfo(float).eps)
    c.check("mass-matrix row sums equal 1", ok)


def _dense_cyclic(lower, diag, upper) -> np.ndarray:
    n = len(diag)
    a = np.zeros((n, n))
    for i in range(n):
        a[i, i] = diag[i]
        a[i, (i - 1) % n] += lower[i]
        a[i, (i + 1) % n] += upper[i]
    return a


def check_cyclic_solve(c: Criterion, rng):
    worst = 0.0
    for n in (4, 5, 17, 64):
        for _ in range(5):
            lower, upper = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
            diag = np.abs(lower) + np.abs(upper) + rng.uniform(0.5, 2.0, n)
            rhs = rng.standard_normal(n)
            x = solve_tridiagonal(TridiagonalSystem(lower, diag, upper, cyclic=True), rhs)
            ref = np.linalg.solve(_dense_cyclic(lower, diag, upper), rhs)
            worst = max(worst, np.max(np.abs(x - ref)) / np.max(np.abs(ref)))
    c.check(f"cyclic Thomas/Sherman-Morrison vs dense elimination (rel err {worst:.1e} <= 1e-12)",
            worst <= 1e-12)


def check_rk3_amplification(c: Criterion):
    worst = 0.0
    for z in (-2.5, -1.0, -0.3, 0.1, 0.7, 1.0, 0.5j, -0.2 + 1.3j):
        lam, dt = z / 0.01, 0.01
        u = ssp_rk3(np.array([1.0 + 0j]), lambda v: lam * v, dt)[0]
        exact = 1 + z + z ** 2 / 2 + z ** 3 / 6
        worst = max(worst, abs(u - exact) / max(1.0, abs(exact)))
    c.check(f"SSP RK3 amplification equals 1+z+z^2/2+z^3/6 (max err {worst:.1e} <= 1e-14)",
            worst <= 1e-14)


def check_conservation(c: Criterion):
    problem = unsteady_burgers()
    grid = Grid.uniform(64)
    u0 = problem.initial(grid.centers) + 0.3
    for treatment, kappa in ((TimeTreatment.COUPLED_MASS, HALF), (TimeTreatment.LUMPED_MASS, HALF),
                             (TimeTreatment.QUICKEST_FD, THIRD),
                             (TimeTreatment.VANLEER_EXPLICIT, HALF)):
        end = march(State(u0, grid), problem, SchemeConfig(kappa=kappa, time_treatment=treatment),
                    REFERENCE_TIME)
        drift = abs(np.sum(end.values) - np.sum(u0))
        c.check(f"sum(u) drift over 840 steps, {treatment.value}: {drift:.1e} <= 1e-10",
                drift <= 1e-10)


def check_first_order_jacobian(c: Criterion, rng):
    worst = 0.0
    for problem in (steady_burgers(), steady_viscous_burgers()):
        grid = Grid.uniform(15, topology=Topology.DIRICHLET_PADDED)
        u = problem.exact_point(grid.centers) + 0.05 * rng.standard_normal(grid.n_cells)
        cfg = SchemeConfig(kappa=HALF)
        jac = first_order_jacobian(State(u, grid), problem, cfg).to_dense()
        d = first_order_face_d(u, problem)
        eps = 1e-6
        fd = np.zeros_like(jac)
        for j in range(grid.n_cells):
            up, um = u.copy(), u.copy()
            up[j] += eps
            um[j] -= eps
            fd[:, j] = (first_order_residual(up, grid, problem, cfg, d)
                        - first_order_residual(um, grid, problem, cfg, d)) / (2 * eps)
        rows = slice(2, grid.n_cells - 2)
        worst = max(worst, np.max(np.abs(jac[rows] - fd[rows])) / np.max(np.abs(jac[rows])))
    c.check(f"first-order Jacobian vs central finite differences (rel err {worst:.1e} <= 1e-6)",
            worst <= 1e-6)


def gauss_cell_average(func: Callable, x: np.ndarray, h: float, points: int = 5,
                       panels: int = 1) -> np.ndarray:
    """Cell average of ``func`` by ``points``-point Gauss-Legendre on ``panels`` sub-cells."""
    nodes, weights = np.polynomial.legendre.leggauss(points)
    sub = h / panels
    total = np.zeros_like(np.asarray(x, dtype=float))
    for k in range(panels):
        mid = x - 0.5 * h + (k + 0.5) * sub
        total = total + sum(w * func(mid + 0.5 * sub * s) for s, w in zip(nodes, weights))
    return total / (2.0 * panels)


def check_cell_averages(c: Criterion):
    worst = 0.0
    for problem in (steady_burgers(), steady_viscous_burgers()):
        for n in STEADY_GRIDS:
            grid = Grid.uniform(n, topology=Topology.DIRICHLET_PADDED)
            x, h = grid.centers, grid.h
            worst = max(worst,
                        np.max(np.abs(problem.forcing_cell_avg(x, h)
                                      - gauss_cell_average(problem.forcing_point, x, h))),
                        np.max(np.abs(problem.exact_cell_avg(x, h)
                                      - gauss_cell_average(problem.exact_point, x, h))))
    for n in UNSTEADY_GRIDS:
        grid = Grid.uniform(n)
        x, h = grid.centers, grid.h
        linear = unsteady_linear()
        worst = max(worst, np.max(np.abs(linear.exact_cell_avg(x, h)
                                         - gauss_cell_average(linear.exact_point, x, h))))
    c.check(f"closed-form cell averages vs 5-point Gauss-Legendre (max abs err {worst:.1e} "
            f"<= 1e-12)", worst <= 1e-12)

    # The steepening Burgers profile needs sub-panels before a 5-point rule is
    # itself accurate to 1e-12 on the 32-cell grid.
    burgers, worst = unsteady_burgers(), 0.0
    for n in UNSTEADY_GRIDS:
        grid = Grid.uniform(n)
        x, h = grid.centers, grid.h
        worst = max(worst, np.max(np.abs(burgers.exact_cell_avg(x, h) - gauss_cell_average(
            burgers.exact_point, x, h, panels=BURGERS_PANELS))))
    c.check(f"characteristic Burgers cell averages vs composite 5-point Gauss-Legendre "
            f"({BURGERS_PANELS} panels; max abs err {worst:.1e} <= 1e-12)", worst <= 1e-12)


def criterion_properties() -> Criterion:
    c = Criterion(8, "property suite")
    rng = np.random.default_rng(8)
    check_quadratic_exactness(c, rng)
    check_cubic_average(c, rng)
    check_diffusion_stencils(c, rng)
    check_mass_matrix(c)
    check_cyclic_solve(c, rng)
    check_rk3_amplification(c)
    check_conservation(c)
    check_first_order_jacobian(c, rng)
    check_cell_averages(c)
    return c


# 9: dissipation term --------------------------------------------------------

def dissipation_difference_norm(n: int, kappa: float) -> float:
    """L1 norm of the face-differenced ``D (u_R - u_L)`` for smooth Burgers data."""
    grid = Grid.uniform(n)
    u = 2.0 + np.sin(2.0 * np.pi * grid.centers)
    e = np.concatenate((u[-2:], u, u[:1]))
    u_L = interp_left(e[:-3], e[1:-2], e[2:-1], kappa)
    u_R = interp_right(e[1:-2], e[2:-1], e[3:], kappa)
    term = np.abs(burgers_flux().df(0.5 * (u_L + u_R))) * (u_R - u_L)
    return float(np.mean(np.abs(np.roll(term, -1) - term)))


def criterion_dissipation_order() -> Criterion:
    c = Criterion(9, "face-differenced dissipation term is O(h^4)")
    grids = (32, 64, 128, 256)
    for kappa in (0.0, THIRD, HALF):
        errs = [dissipation_difference_norm(n, kappa) for n in grids]
        slope = observed_order(errs[-2], errs[-1], 1.0 / grids[-2], 1.0 / grids[-1])
        c.check(f"kappa={kappa:.4g}: slope {slope:.3f} >= 3.7", slope >= 3.7)
    return c


CRITERIA = (
    criterion_steady_burgers,
    criterion_viscous_auto_alpha,
    criterion_viscous_alpha_four_thirds,
    criterion_coupled_quick,
    criterion_quickest_burgers,
    criterion_quickest_linear,
    criterion_vanleer,
    criterion_properties,
    criterion_dissipation_order,
)


def run_all(verbose: bool = False, echo=print) -> list[Criterion]:
    results = []
    for fn in CRITERIA:
        crit = fn()
        results.append(crit)
        echo(crit.line())
        if verbose or not crit.passed:
            for text, ok in crit.checks:
                echo(f"    {'ok  ' if ok else 'FAIL'} {text}")
    return results
