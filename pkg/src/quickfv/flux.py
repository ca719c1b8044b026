"""Upwind convective flux and alpha-damping diffusive flux at a face."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import FluxFunction, resolve_alpha  # noqa: F401  (re-exported)
from .reconstruction import FaceData


@dataclass(frozen=True)
class FaceFlux:
    convective: float
    diffusive: float

    @property
    def total(self) -> float:
        return self.convective + self.diffusive


def dissipation_coefficient(u_L, u_R, flux: FluxFunction):
    # |df/du| at the mean of the two traces
    return np.abs(flux.df(0.5 * (u_L + u_R)))


def convective_flux(u_L, u_R, flux: FluxFunction, dissipation: bool = True,
                    f_L=None, f_R=None):
    """Upwind flux ``(f_L + f_R)/2 - D/2 (u_R - u_L)``.

    ``f_L``/``f_R`` default to the flux of the solution traces; passing
    directly reconstructed fluxes keeps the dissipation in solution variables.
    """
    if f_L is None:
        f_L = flux.f(u_L)
    if f_R is None:
        f_R = flux.f(u_R)
    central = 0.5 * (f_L + f_R)
    if not dissipation:
        return central
    return central - 0.5 * dissipation_coefficient(u_L, u_R, flux) * (u_R - u_L)


def diffusive_flux(face: FaceData, nu: float, alpha: float, h: float):
    """``-nu * [(dudx_L + dudx_R)/2 + alpha/(2h) (u_R - u_L)]``.

    The jump penalty enters the face gradient, so it damps like the upwind
    term of the convective flux.
    """
    if nu == 0:
        return 0.0 * face.u_L
    return -nu * (0.5 * (face.dudx_L + face.dudx_R) + alpha / (2.0 * h) * (face.u_R - face.u_L))


def diffusion_stencil(kappa: float, alpha: float) -> np.ndarray:
    """Five-point weights ``w`` with ``(F^d_{i+1/2} - F^d_{i-1/2})/h = -nu/h^2 * w . u``.

    Closed form of the alpha-damping diffusion scheme on a uniform grid.
    """
    c = alpha * (kappa - 1.0)
    return np.array([c, -4.0 * (c - 2.0), 2.0 * (3.0 * c - 8.0), -4.0 * (c - 2.0), c]) / 8.0
