"""Small builders shared by several test modules."""

from dataclasses import replace

import numpy as np

from quickfv.grid import zero_flux
from quickfv.problems import steady_viscous_burgers


def diffusion_problem(nu: float = 1.0):
    """Pure diffusion ``-nu u_xx`` on a padded grid, no forcing."""
    return replace(steady_viscous_burgers(nu), flux=zero_flux(), has_forcing=False)


def five_point(u: np.ndarray, weights, denom: float) -> np.ndarray:
    """Periodic centered stencil, summed term by term."""
    out = np.zeros_like(u)
    for w, shift in zip(weights, (2, 1, 0, -1, -2)):
        out += w * np.roll(u, shift)
    return out / denom
