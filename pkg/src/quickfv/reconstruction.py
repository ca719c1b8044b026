"""kappa-interpolation of face values and quadratic-consistent face derivatives.

All functions accept scalars or equally shaped arrays, so the same code serves
single-face probes and whole-grid sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import FluxFunction, SchemeConfig, State, neighbor


def interp_left(v_im1, v_i, v_ip1, kappa):
    """Value at face i+1/2 seen from cell i."""
    return 0.5 * (v_i + v_ip1) - 0.25 * (1.0 - kappa) * (v_ip1 - 2.0 * v_i + v_im1)


def interp_right(v_i, v_ip1, v_ip2, kappa):
    """Value at face i+1/2 seen from cell i+1."""
    return 0.5 * (v_ip1 + v_i) - 0.25 * (1.0 - kappa) * (v_ip2 - 2.0 * v_ip1 + v_i)


@dataclass(frozen=True)
class FaceData:
    u_L: float
    u_R: float
    dudx_L: float
    dudx_R: float


def _stencil(state: State, i: int):
    g = state.grid
    return tuple(state[neighbor(g, i, k)] for k in (-1, 0, 1, 2))


def face_states(state: State, i: int, config: SchemeConfig) -> FaceData:
    """Left/right traces and derivatives at face i+1/2 (1-based ``i``)."""
    um1, u0, up1, up2 = _stencil(state, i)
    dudx = (up1 - u0) / state.grid.h
    return FaceData(
        interp_left(um1, u0, up1, config.kappa),
        interp_right(u0, up1, up2, config.kappa),
        dudx,
        dudx,
    )


def face_flux_states(state: State, flux: FluxFunction, i: int, kappa: float):
    """Directly reconstructed fluxes ``(f_L, f_R)`` at face i+1/2."""
    fm1, f0, fp1, fp2 = (float(flux.f(np.float64(v))) for v in _stencil(state, i))
    return interp_left(fm1, f0, fp1, kappa), interp_right(f0, fp1, fp2, kappa)


def extended_values(u: np.ndarray, periodic: bool) -> np.ndarray:
    """Values laid out so that every face of the grid has its four-cell stencil.

    Periodic grids get two wrapped cells on the left and one on the right and
    yield the n distinct faces 1/2 .. n-1/2; padded grids are used as-is and
    yield faces 5/2 .. n-3/2.
    """
    if periodic:
        return np.concatenate((u[-2:], u, u[:1]))
    return u


def sweep_faces(e: np.ndarray, kappa: float):
    """Interpolated traces for every face resolvable in the extended array ``e``.

    Face ``k`` sits between ``e[k+1]`` and ``e[k+2]``.
    """
    um1, u0, up1, up2 = e[:-3], e[1:-2], e[2:-1], e[3:]
    return interp_left(um1, u0, up1, kappa), interp_right(u0, up1, up2, kappa)
