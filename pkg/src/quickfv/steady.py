"""Steady solves by defect correction.

The high-order residual is driven to zero with Newton-like updates whose
matrix is the exact Jacobian of the first-order upwind scheme (two-point
traces, dissipation coefficient frozen per iteration) plus a pseudo-time
term that is ramped away.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import ConfigurationError, NumericalError
from .flux import dissipation_coefficient
from .grid import Grid, SchemeConfig, State
from .linalg import TridiagonalSystem, solve_tridiagonal
from .problems import Problem
from .residual import effective_nu, forcing_values, residual_values

log = logging.getLogger(__name__)

CFL_START = 10.0
CFL_DROP = 1e6
CFL_MIN = 1e-3
GROWTH_LIMIT = 2.0
DIVERGENCE_FACTOR = 1e8


@dataclass
class SteadySolveReport:
    iterations: int
    final_residual_l1: float
    converged: bool
    history: list[float] = field(default_factory=list)
    tolerance: float = 0.0

    def write_csv(self, path):
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["iteration", "residual_l1"])
            for k, r in enumerate(self.history):
                w.writerow([k, repr(r)])
        return path


def _require_padded(grid: Grid):
    if grid.periodic:
        raise ConfigurationError("the steady solver works on Dirichlet-padded grids")


def first_order_face_d(u: np.ndarray, problem: Problem) -> np.ndarray:
    """Dissipation coefficient on faces 5/2 .. n-3/2 from two-point traces."""
    return dissipation_coefficient(u[1:-2], u[2:-1], problem.flux)


def first_order_residual(u: np.ndarray, grid: Grid, problem: Problem, config: SchemeConfig,
                         frozen_d: Optional[np.ndarray] = None) -> np.ndarray:
    """Residual of the first-order scheme; ``frozen_d`` fixes the face dissipation."""
    _require_padded(grid)
    f = problem.flux.f
    u_L, u_R = u[1:-2], u[2:-1]
    d = first_order_face_d(u, problem) if frozen_d is None else frozen_d
    nu = effective_nu(problem, config)
    face = 0.5 * (f(u_L) + f(u_R)) - 0.5 * d * (u_R - u_L) - nu * (u_R - u_L) / grid.h
    res = np.zeros(grid.n_cells)
    forcing = forcing_values(grid, problem, config.forcing_mode)
    res[grid.interior] = np.diff(face) / grid.h - forcing[grid.interior]
    return res


def first_order_jacobian(state: State, problem: Problem, config: SchemeConfig) -> TridiagonalSystem:
    grid = state.grid
    _require_padded(grid)
    u, h, n = state.values, grid.h, grid.n_cells
    df = problem.flux.df
    d = first_order_face_d(u, problem)
    nu = effective_nu(problem, config)
    # face k joins cells k+1 and k+2 (0-based)
    dF_dleft = 0.5 * df(u[1:-2]) + 0.5 * d + nu / h
    dF_dright = 0.5 * df(u[2:-1]) - 0.5 * d - nu / h

    lower, diag, upper = np.zeros(n), np.ones(n), np.zeros(n)
    rows = np.arange(2, n - 2)
    lower[rows] = -dF_dleft[rows - 2] / h
    diag[rows] = (dF_dleft[rows - 1] - dF_dright[rows - 2]) / h
    upper[rows] = dF_dright[rows - 1] / h
    return TridiagonalSystem(lower, diag, upper, cyclic=False)


def _l1(res: np.ndarray, grid: Grid) -> float:
    return float(np.mean(np.abs(res[grid.interior])))


def roundoff_floor(u: np.ndarray, grid: Grid, problem: Problem, nu: float,
                   forcing: np.ndarray) -> float:
    """Smallest residual level double precision can resolve for this operator.

    The diffusion part scales rounding errors in ``u`` by ``nu / h^2``, which
    for ``nu = 1`` on 127 cells already sits near 1e-12.
    """
    scale = (float(np.max(np.abs(problem.flux.f(u)))) / grid.h
             + nu * float(np.max(np.abs(u))) / grid.h ** 2
             + float(np.max(np.abs(forcing))))
    return 8.0 * np.finfo(float).eps * scale


def solve_steady(state0: State, problem: Problem, config: SchemeConfig, tol: float = 1e-12,
                 max_iter: int = 10000) -> tuple[State, SteadySolveReport]:
    """Iterate ``(J1 + I/dtau) du = -Res`` until the L1 residual reaches ``tol``.

    ``tol`` is raised to the round-off floor of the operator when it is below
    it; the value used is stored in the report. Padded cells are never touched.
    A step that leaves the residual non-finite or ``GROWTH_LIMIT`` times larger
    is discarded and retried with a quarter of the pseudo-time CFL; accepted
    steps double it. ``max_iter`` counts linear solves, accepted or not.
    Divergence and stalls raise :class:`NumericalError`.
    """
    grid = state0.grid
    _require_padded(grid)
    interior = grid.interior
    forcing = forcing_values(grid, problem, config.forcing_mode)
    nu = effective_nu(problem, config)
    u = state0.values.copy()
    tol = max(tol, roundoff_floor(u, grid, problem, nu, forcing))

    res = residual_values(u, grid, problem, config, forcing)
    r = _l1(res, grid)
    if not np.isfinite(r):
        raise NumericalError("non-finite residual at the initial state")
    history = [r]
    cfl = CFL_START

    for it in range(max_iter + 1):
        if r <= tol:
            return State(u, grid), SteadySolveReport(it, r, True, history, tol)
        if it == max_iter:
            break

        jac = first_order_jacobian(State(u, grid), problem, config)
        diag = jac.diag.copy()
        if cfl <= CFL_DROP:
            speed = float(np.max(np.abs(problem.flux.df(u)))) + 2.0 * nu / grid.h
            if speed > 0:
                diag[interior] += speed / (cfl * grid.h)
        rhs = -res
        rhs[grid.fixed_mask] = 0.0
        du = solve_tridiagonal(TridiagonalSystem(jac.lower, diag, jac.upper), rhs)
        trial = u.copy()
        trial[interior] += du[interior]
        with np.errstate(over="ignore", invalid="ignore"):
            trial_res = residual_values(trial, grid, problem, config, forcing)
            r_trial = _l1(trial_res, grid)

        if np.isfinite(r_trial) and r_trial <= GROWTH_LIMIT * r:
            u, res, r = trial, trial_res, r_trial
            history.append(r)
            cfl *= 2.0
            if r > DIVERGENCE_FACTOR * history[0]:
                raise NumericalError(f"steady solve diverged at iteration {it}: L1 residual "
                                     f"{r:.3e} from {history[0]:.3e}")
        elif cfl <= CFL_MIN:
            raise NumericalError(f"steady solve stalled at iteration {it}: pseudo-time CFL "
                                 f"{cfl:.3g} cannot reduce the residual {r:.3e}")
        else:
            log.debug("rejected step %d (residual %.3e -> %.3e), CFL %.3g -> %.3g",
                      it, r, r_trial, cfl, cfl / 4.0)
            cfl = max(cfl / 4.0, CFL_MIN)

    log.warning("steady solve stopped after %d iterations at L1 residual %.3e", max_iter, r)
    return State(u, grid), SteadySolveReport(max_iter, r, False, history, tol)
