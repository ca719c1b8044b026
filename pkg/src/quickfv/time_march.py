"""Semi-discrete time integration of point values with SSP RK3.

Four treatments of the time derivative are available:

* ``COUPLED_MASS``: ``M du/dt = -Res`` with the cyclic ``(1, 22, 1)/24`` mass
  matrix inverted at every stage.
* ``LUMPED_MASS``: ``du/dt = -Res``.
* ``QUICKEST_FD``: finite-difference form with ``kappa = 1/3`` and forcing
  taken as a point value.
* ``VANLEER_EXPLICIT``: ``du/dt = -(Res - delta^2 Res / 24)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import ConfigurationError, NumericalError
from .grid import ForcingMode, Grid, SchemeConfig, State, TimeTreatment
from .linalg import mass_matrix, solve_tridiagonal
from .problems import Problem
from .residual import effective_nu, forcing_values, residual_values

QUICKEST_KAPPA = 1.0 / 3.0


@dataclass(frozen=True)
class TimeMarchConfig:
    dt: float
    n_steps: int
    treatment: Optional[TimeTreatment] = None

    def __post_init__(self):
        if not self.dt > 0:
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if self.n_steps < 1:
            raise ConfigurationError(f"n_steps must be at least 1, got {self.n_steps}")

    @property
    def final_time(self) -> float:
        return self.n_steps * self.dt


def _require_periodic(grid: Grid):
    if not grid.periodic:
        raise ConfigurationError("unsteady treatments need a periodic grid")


def quickest_config(config: SchemeConfig, problem: Problem) -> SchemeConfig:
    if not math.isclose(config.kappa, QUICKEST_KAPPA, rel_tol=0, abs_tol=1e-12):
        raise ConfigurationError(f"QUICKEST requires kappa = 1/3, got {config.kappa}")
    if effective_nu(problem, config) != 0:
        raise ConfigurationError("QUICKEST is only defined here for nu = 0")
    return replace(config, kappa=QUICKEST_KAPPA, forcing_mode=ForcingMode.POINT_VALUE)


def vanleer_correction(res: np.ndarray) -> np.ndarray:
    return res - (np.roll(res, -1) - 2.0 * res + np.roll(res, 1)) / 24.0


def make_rhs(grid: Grid, problem: Problem, config: SchemeConfig,
             treatment: Optional[TimeTreatment] = None) -> Callable[[np.ndarray], np.ndarray]:
    """Right-hand side ``u -> du/dt`` on raw arrays, with forcing and mass matrix cached."""
    _require_periodic(grid)
    treatment = treatment or config.time_treatment
    if treatment is TimeTreatment.QUICKEST_FD:
        config = quickest_config(config, problem)
    forcing = forcing_values(grid, problem, config.forcing_mode)

    def residual(u):
        return residual_values(u, grid, problem, config, forcing)

    if treatment is TimeTreatment.COUPLED_MASS:
        mass = mass_matrix(grid.n_cells, cyclic=True)
        return lambda u: -solve_tridiagonal(mass, residual(u))
    if treatment is TimeTreatment.VANLEER_EXPLICIT:
        return lambda u: -vanleer_correction(residual(u))
    return lambda u: -residual(u)


def rhs_coupled(state: State, problem: Problem, config: SchemeConfig) -> np.ndarray:
    return make_rhs(state.grid, problem, config, TimeTreatment.COUPLED_MASS)(state.values)


def rhs_lumped(state: State, problem: Problem, config: SchemeConfig) -> np.ndarray:
    return make_rhs(state.grid, problem, config, TimeTreatment.LUMPED_MASS)(state.values)


def rhs_quickest(state: State, problem: Problem, config: SchemeConfig) -> np.ndarray:
    return make_rhs(state.grid, problem, config, TimeTreatment.QUICKEST_FD)(state.values)


def rhs_vanleer(state: State, problem: Problem, config: SchemeConfig) -> np.ndarray:
    return make_rhs(state.grid, problem, config, TimeTreatment.VANLEER_EXPLICIT)(state.values)


RHS = {
    TimeTreatment.COUPLED_MASS: rhs_coupled,
    TimeTreatment.LUMPED_MASS: rhs_lumped,
    TimeTreatment.QUICKEST_FD: rhs_quickest,
    TimeTreatment.VANLEER_EXPLICIT: rhs_vanleer,
}


def ssp_rk3(u: np.ndarray, rhs: Callable[[np.ndarray], np.ndarray], dt: float) -> np.ndarray:
    """Three-stage, third-order SSP Runge-Kutta step on an array."""
    u1 = u + dt * rhs(u)
    u2 = 0.75 * u + 0.25 * (u1 + dt * rhs(u1))
    return u / 3.0 + 2.0 / 3.0 * (u2 + dt * rhs(u2))


def ssp_rk3_step(state: State, rhs: Callable[[State], np.ndarray], dt: float) -> State:
    if not dt > 0:
        raise ConfigurationError(f"dt must be positive, got {dt}")
    grid = state.grid

    def stage(v):
        if not np.all(np.isfinite(v)):
            raise NumericalError("non-finite values in an SSP RK3 stage")
        return np.asarray(rhs(State(v, grid)), dtype=float)

    u = ssp_rk3(state.values, stage, dt)
    if not np.all(np.isfinite(u)):
        raise NumericalError("non-finite values after SSP RK3 step")
    return State(u, grid)


def march(state0: State, problem: Problem, config: SchemeConfig, tm: TimeMarchConfig,
          snapshot: Optional[Callable[[int, np.ndarray], None]] = None) -> State:
    """Advance ``state0`` by ``tm.n_steps`` steps of size ``tm.dt``.

    ``snapshot(step, u)`` is called after every step when given.
    """
    if problem.final_time is not None and abs(tm.final_time - problem.final_time) > 1e-12:
        raise ConfigurationError(
            f"{tm.n_steps} steps of {tm.dt} reach t = {tm.final_time}, "
            f"problem ends at t = {problem.final_time}")
    rhs = make_rhs(state0.grid, problem, config, tm.treatment)
    u = state0.values.copy()
    for step in range(1, tm.n_steps + 1):
        u = ssp_rk3(u, rhs, tm.dt)
        if not np.all(np.isfinite(u)):
            raise NumericalError(f"non-finite solution at step {step}")
        if snapshot is not None:
            snapshot(step, u)
    return State(u, state0.grid)
