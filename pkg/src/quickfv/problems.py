"""Test problems with exact point values, exact cell averages and exact forcing.

Steady problems use ``u = sin(2x)`` on [0, 1] with Dirichlet padding; the
unsteady ones start from ``sin(2 pi x)`` on the periodic unit interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NumericalError
from .grid import FluxFunction, Topology, burgers_flux, linear_flux

TWO_PI = 2.0 * math.pi


def _zero(x, *args, **kwargs):
    return np.zeros_like(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class Problem:
    """Exact data for one experiment.

    Callables take cell centers ``x`` (and ``h`` for cell averages). Unsteady
    problems also take a time ``t`` that defaults to ``final_time``.
    """

    name: str
    flux: FluxFunction
    nu: float
    exact_point: Callable
    exact_cell_avg: Callable
    forcing_point: Callable = _zero
    forcing_cell_avg: Callable = _zero
    initial: Optional[Callable] = None
    final_time: Optional[float] = None
    topology: Topology = Topology.DIRICHLET_PADDED
    length: float = 1.0
    has_forcing: bool = True

    @property
    def steady(self) -> bool:
        return self.final_time is None


def _sin2x_cell_avg(x, h):
    x = np.asarray(x, dtype=float)
    return (np.cos(h - 2.0 * x) - np.cos(h + 2.0 * x)) / (2.0 * h)


def steady_burgers() -> Problem:
    """``(u^2/2)_x = 2 sin(2x) cos(2x)``, exact ``u = sin(2x)``."""

    def forcing_point(x):
        x = np.asarray(x, dtype=float)
        return 2.0 * np.sin(2.0 * x) * np.cos(2.0 * x)

    def forcing_cell_avg(x, h):
        x = np.asarray(x, dtype=float)
        return (np.cos(h - 2.0 * x) ** 2 - np.cos(h + 2.0 * x) ** 2) / (2.0 * h)

    return Problem(
        name="steady_burgers",
        flux=burgers_flux(),
        nu=0.0,
        exact_point=lambda x: np.sin(2.0 * np.asarray(x, dtype=float)),
        exact_cell_avg=_sin2x_cell_avg,
        forcing_point=forcing_point,
        forcing_cell_avg=forcing_cell_avg,
    )


def steady_viscous_burgers(nu: float = 1.0) -> Problem:
    """``(u^2/2)_x = nu u_xx + s`` with ``s = 2 sin 2x cos 2x + 4 nu sin 2x``."""
    base = steady_burgers()

    def forcing_point(x):
        x = np.asarray(x, dtype=float)
        return base.forcing_point(x) + 4.0 * nu * np.sin(2.0 * x)

    def forcing_cell_avg(x, h):
        # average of 4 nu sin(2x) is +(2 nu / h)[cos(h - 2x) - cos(h + 2x)]
        x = np.asarray(x, dtype=float)
        return (base.forcing_cell_avg(x, h)
                + 2.0 * nu / h * (np.cos(h - 2.0 * x) - np.cos(h + 2.0 * x)))

    return Problem(
        name="steady_viscous_burgers",
        flux=base.flux,
        nu=nu,
        exact_point=base.exact_point,
        exact_cell_avg=base.exact_cell_avg,
        forcing_point=forcing_point,
        forcing_cell_avg=forcing_cell_avg,
    )


def burgers_characteristic_foot(x, t, tol: float = 1e-13, max_iter: int = 100):
    """Solve ``u = sin(2 pi (x - u t))`` for ``u`` by Newton iteration.

    Returns ``(u, xi)`` with ``xi = x - u t`` the foot of the characteristic.
    Valid before the gradient catastrophe at ``t = 1 / (2 pi)``.
    """
    x = np.asarray(x, dtype=float)
    u = np.sin(TWO_PI * x)
    if t == 0:
        return u, x.copy()
    if TWO_PI * t >= 1.0:
        raise NumericalError(f"t = {t} is past shock formation at t = {1 / TWO_PI:.6f}")
    for _ in range(max_iter):
        phase = TWO_PI * (x - u * t)
        g = u - np.sin(phase)
        dg = 1.0 + TWO_PI * t * np.cos(phase)
        step = g / dg
        u = u - step
        if np.max(np.abs(step)) <= tol:
            break
    else:
        raise NumericalError("characteristic iteration did not converge")
    return u, x - u * t


def unsteady_burgers(final_time: float = 0.105) -> Problem:
    """Periodic ``u_t + (u^2/2)_x = 0`` from ``sin(2 pi x)``; reference by characteristics."""

    def exact_point(x, t=final_time):
        return burgers_characteristic_foot(x, t)[0]

    def exact_cell_avg(x, h, t=final_time):
        # Along characteristics dx = (1 + t u0'(xi)) dxi, so the cell integral
        # is G(xi_b) - G(xi_a) with G = -cos(2 pi xi)/(2 pi) + t sin^2(2 pi xi)/2.
        x = np.asarray(x, dtype=float)

        def antiderivative(edge):
            _, xi = burgers_characteristic_foot(edge, t)
            return -np.cos(TWO_PI * xi) / TWO_PI + 0.5 * t * np.sin(TWO_PI * xi) ** 2

        return (antiderivative(x + 0.5 * h) - antiderivative(x - 0.5 * h)) / h

    return Problem(
        name="unsteady_burgers",
        flux=burgers_flux(),
        nu=0.0,
        exact_point=exact_point,
        exact_cell_avg=exact_cell_avg,
        initial=lambda x: np.sin(TWO_PI * np.asarray(x, dtype=float)),
        final_time=final_time,
        topology=Topology.PERIODIC,
        has_forcing=False,
    )


def unsteady_linear(a: float = 0.75, final_time: float = 0.105) -> Problem:
    """Periodic ``u_t + (a u)_x = 0`` from ``sin(2 pi x)``."""

    def exact_point(x, t=final_time):
        return np.sin(TWO_PI * (np.asarray(x, dtype=float) - a * t))

    def exact_cell_avg(x, h, t=final_time):
        x = np.asarray(x, dtype=float) - a * t
        return (np.cos(TWO_PI * (x - 0.5 * h)) - np.cos(TWO_PI * (x + 0.5 * h))) / (TWO_PI * h)

    return Problem(
        name="unsteady_linear",
        flux=linear_flux(a),
        nu=0.0,
        exact_point=exact_point,
        exact_cell_avg=exact_cell_avg,
        initial=lambda x: np.sin(TWO_PI * np.asarray(x, dtype=float)),
        final_time=final_time,
        topology=Topology.PERIODIC,
        has_forcing=False,
    )


def constant_problem(value: float = 1.0, a: float = 1.0, nu: float = 0.0,
                     topology: Topology = Topology.DIRICHLET_PADDED) -> Problem:
    """Linear flux, no forcing, constant exact solution. Every scheme is exact on it."""
    return Problem(
        name="constant",
        flux=linear_flux(a),
        nu=nu,
        exact_point=lambda x: np.full_like(np.asarray(x, dtype=float), value),
        exact_cell_avg=lambda x, h: np.full_like(np.asarray(x, dtype=float), value),
        topology=topology,
        has_forcing=False,
    )


PROBLEMS = {
    "steady_burgers": steady_burgers,
    "steady_viscous_burgers": steady_viscous_burgers,
    "unsteady_burgers": unsteady_burgers,
    "unsteady_linear": unsteady_linear,
}
