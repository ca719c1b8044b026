"""Per-cell flux balance minus forcing.

``Res_i = (F_{i+1/2} - F_{i-1/2}) / h - s_i`` where ``s_i`` is the exact cell
average of the forcing or its point value at the cell center.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .flux import FaceFlux, convective_flux, diffusive_flux
from .grid import FluxFunction, ForcingMode, Grid, ReconMode, SchemeConfig, State, neighbor
from .problems import Problem
from .reconstruction import (FaceData, extended_values, face_flux_states, face_states,
                             interp_left, interp_right, sweep_faces)

log = logging.getLogger(__name__)


@dataclass
class ResidualVector:
    values: np.ndarray
    grid: Grid

    @property
    def interior(self) -> np.ndarray:
        return self.values[self.grid.interior]

    @property
    def nonfinite_cells(self) -> list[int]:
        return [int(i) + 1 for i in np.flatnonzero(~np.isfinite(self.values))]


def effective_nu(problem: Problem, config: SchemeConfig) -> float:
    return problem.nu if config.nu is None else config.nu


def reconstructs_flux(config: SchemeConfig, flux: FluxFunction) -> bool:
    """Whether face fluxes come from interpolated flux samples.

    A linear flux commutes with the interpolation, so both modes evaluate
    ``a * u_L`` and share the exact same arithmetic.
    """
    return config.recon_mode is ReconMode.FLUX and flux.linear_speed is None


def face_fluxes(u: np.ndarray, grid: Grid, problem: Problem, config: SchemeConfig):
    """Convective and diffusive fluxes on every face, one evaluation per face.

    Periodic grids return faces 1/2 .. n-1/2; padded grids faces 5/2 .. n-3/2.
    """
    flux = problem.flux
    e = extended_values(u, grid.periodic)
    u_L, u_R = sweep_faces(e, config.kappa)
    if reconstructs_flux(config, flux):
        f_L, f_R = sweep_faces(flux.f(e), config.kappa)
    else:
        f_L = f_R = None
    conv = convective_flux(u_L, u_R, flux, config.dissipation, f_L, f_R)

    nu = effective_nu(problem, config)
    if nu == 0:
        return conv, np.zeros_like(conv)
    if config.diffusion_kappa != config.kappa:
        u_L, u_R = sweep_faces(e, config.diffusion_kappa)
    dudx = (e[2:-1] - e[1:-2]) / grid.h
    diff = diffusive_flux(FaceData(u_L, u_R, dudx, dudx), nu, config.resolved_alpha, grid.h)
    return conv, diff


def forcing_values(grid: Grid, problem: Problem, mode: ForcingMode) -> np.ndarray:
    x = grid.centers
    if not problem.has_forcing:
        return np.zeros(grid.n_cells)
    if mode is ForcingMode.CELL_AVERAGED:
        return np.asarray(problem.forcing_cell_avg(x, grid.h), dtype=float)
    return np.asarray(problem.forcing_point(x), dtype=float)


def flux_balance(u: np.ndarray, grid: Grid, problem: Problem, config: SchemeConfig) -> np.ndarray:
    """``(F_{i+1/2} - F_{i-1/2}) / h`` per cell; zero on padded cells."""
    conv, diff = face_fluxes(u, grid, problem, config)
    total = conv + diff
    out = np.zeros(grid.n_cells)
    if grid.periodic:
        out[:] = (np.roll(total, -1) - total) / grid.h
    else:
        out[grid.interior] = np.diff(total) / grid.h
    return out


def residual_values(u: np.ndarray, grid: Grid, problem: Problem, config: SchemeConfig,
                    forcing: np.ndarray | None = None) -> np.ndarray:
    """Array form of :func:`assemble_residual`; ``forcing`` may be precomputed."""
    res = flux_balance(u, grid, problem, config)
    if forcing is None:
        forcing = forcing_values(grid, problem, config.forcing_mode)
    if grid.periodic:
        res -= forcing
    else:
        res[grid.interior] -= forcing[grid.interior]
    return res


def assemble_residual(state: State, problem: Problem, config: SchemeConfig) -> ResidualVector:
    if state.values.shape != (state.grid.n_cells,):
        raise ConfigurationError("state length does not match its grid")
    out = ResidualVector(residual_values(state.values, state.grid, problem, config), state.grid)
    bad = out.nonfinite_cells
    if bad:
        log.warning("non-finite residual in %d cells, first at cell %d", len(bad), bad[0])
    return out


def flux_at_face(state: State, problem: Problem, config: SchemeConfig, i: int) -> FaceFlux:
    """Numerical flux at face i+1/2 (1-based ``i``), evaluated face by face."""
    face = face_states(state, i, config)
    flux = problem.flux
    if reconstructs_flux(config, flux):
        f_L, f_R = face_flux_states(state, flux, i, config.kappa)
    else:
        f_L = f_R = None
    conv = float(convective_flux(face.u_L, face.u_R, flux, config.dissipation, f_L, f_R))

    nu = effective_nu(problem, config)
    if config.diffusion_kappa != config.kappa:
        g = state.grid
        um1, u0, up1, up2 = (state[neighbor(g, i, k)] for k in (-1, 0, 1, 2))
        face = FaceData(interp_left(um1, u0, up1, config.diffusion_kappa),
                        interp_right(u0, up1, up2, config.diffusion_kappa),
                        face.dudx_L, face.dudx_R)
    diff = float(diffusive_flux(face, nu, config.resolved_alpha if nu else 0.0, state.grid.h))
    return FaceFlux(conv, diff)
