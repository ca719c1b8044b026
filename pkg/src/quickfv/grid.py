"""Grid, solution state and scheme configuration shared by every other module.

Cell indices in the public interface are 1-based (cells ``1 .. n``); arrays
are stored 0-based, so cell ``i`` lives at ``values[i - 1]``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import ConfigurationError

PAD_WIDTH = 2


class Topology(enum.Enum):
    PERIODIC = "periodic"
    DIRICHLET_PADDED = "padded"


class ReconMode(enum.Enum):
    SOLUTION = "solution"
    FLUX = "flux"


class TimeTreatment(enum.Enum):
    COUPLED_MASS = "coupled"
    LUMPED_MASS = "lumped"
    QUICKEST_FD = "quickest"
    VANLEER_EXPLICIT = "vanleer"


class ForcingMode(enum.Enum):
    CELL_AVERAGED = "cellavg"
    POINT_VALUE = "point"


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D cell layout on ``[x_left, x_left + n_cells * h]``."""

    n_cells: int
    h: float
    x_left: float = 0.0
    topology: Topology = Topology.PERIODIC

    def __post_init__(self):
        if self.n_cells < 1:
            raise ConfigurationError(f"n_cells must be positive, got {self.n_cells}")
        if not self.h > 0:
            raise ConfigurationError(f"cell width must be positive, got {self.h}")
        if self.topology is Topology.DIRICHLET_PADDED and self.n_cells < 2 * PAD_WIDTH + 1:
            raise ConfigurationError(
                f"padded grid needs at least {2 * PAD_WIDTH + 1} cells, got {self.n_cells}"
            )

    @classmethod
    def uniform(cls, n_cells: int, length: float = 1.0, x_left: float = 0.0,
                topology: Topology = Topology.PERIODIC) -> "Grid":
        return cls(n_cells, length / n_cells, x_left, topology)

    @property
    def periodic(self) -> bool:
        return self.topology is Topology.PERIODIC

    @property
    def length(self) -> float:
        return self.n_cells * self.h

    @property
    def centers(self) -> np.ndarray:
        return self.x_left + (np.arange(1, self.n_cells + 1) - 0.5) * self.h

    @property
    def interior(self) -> slice:
        """0-based slice of the cells that carry unknowns."""
        if self.periodic:
            return slice(0, self.n_cells)
        return slice(PAD_WIDTH, self.n_cells - PAD_WIDTH)

    @property
    def fixed_mask(self) -> np.ndarray:
        mask = np.zeros(self.n_cells, dtype=bool)
        if not self.periodic:
            mask[:PAD_WIDTH] = True
            mask[-PAD_WIDTH:] = True
        return mask


def cell_center(grid: Grid, i: int) -> float:
    if not 1 <= i <= grid.n_cells:
        raise IndexError(f"cell index {i} outside [1, {grid.n_cells}]")
    return grid.x_left + (i - 0.5) * grid.h


def neighbor(grid: Grid, i: int, offset: int) -> int:
    """Index of cell ``i + offset`` with the grid's wrap rule (1-based)."""
    if abs(offset) > PAD_WIDTH:
        raise ValueError(f"stencil offset {offset} exceeds {PAD_WIDTH}")
    if not 1 <= i <= grid.n_cells:
        raise IndexError(f"cell index {i} outside [1, {grid.n_cells}]")
    j = i + offset
    if grid.periodic:
        return (j - 1) % grid.n_cells + 1
    if not 1 <= j <= grid.n_cells:
        raise IndexError(f"stencil cell {j} leaves padded grid of {grid.n_cells} cells")
    return j


@dataclass
class State:
    """Point values of the numerical solution at the cell centers."""

    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.grid.n_cells,):
            raise ValueError(
                f"state has shape {self.values.shape}, grid has {self.grid.n_cells} cells"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("state contains non-finite values")

    def __getitem__(self, i: int) -> float:
        return float(self.values[i - 1])

    def copy(self) -> "State":
        return State(self.values.copy(), self.grid)


@dataclass(frozen=True)
class FluxFunction:
    f: Callable[[np.ndarray], np.ndarray]
    df: Callable[[np.ndarray], np.ndarray]
    name: str = "flux"
    linear_speed: Optional[float] = None


def burgers_flux() -> FluxFunction:
    return FluxFunction(lambda u: 0.5 * u * u, lambda u: u, "burgers")


def linear_flux(a: float) -> FluxFunction:
    return FluxFunction(lambda u: a * u, lambda u: a + 0.0 * u, f"linear({a:g})", a)


def zero_flux() -> FluxFunction:
    return FluxFunction(lambda u: 0.0 * u, lambda u: 0.0 * u, "zero", 0.0)


AUTO = "auto"


def resolve_alpha(kappa: float, alpha_setting: Union[str, float] = AUTO) -> float:
    """Damping coefficient of the diffusive flux.

    ``"auto"`` picks the value that makes the diffusion scheme compatible with
    the chosen reconstruction, ``1 / (3 (1 - kappa))``.
    """
    if isinstance(alpha_setting, str):
        if alpha_setting.lower() != AUTO:
            raise ConfigurationError(f"alpha must be 'auto' or a number, got {alpha_setting!r}")
        if kappa == 1:
            raise ConfigurationError("automatic alpha is undefined for kappa = 1")
        return 1.0 / (3.0 * (1.0 - kappa))
    alpha = float(alpha_setting)
    if not math.isfinite(alpha):
        raise ConfigurationError(f"alpha must be finite, got {alpha}")
    return alpha


@dataclass(frozen=True)
class SchemeConfig:
    """One member of the scheme family.

    ``nu=None`` takes the diffusion coefficient from the problem being solved;
    ``kappa_diffusion=None`` reuses ``kappa`` for the damping term.
    """

    kappa: float = 0.5
    alpha: Union[str, float] = AUTO
    recon_mode: ReconMode = ReconMode.SOLUTION
    dissipation: bool = True
    nu: Optional[float] = None
    time_treatment: TimeTreatment = TimeTreatment.COUPLED_MASS
    forcing_mode: ForcingMode = ForcingMode.CELL_AVERAGED
    kappa_diffusion: Optional[float] = None
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not math.isfinite(self.kappa):
            raise ConfigurationError(f"kappa must be finite, got {self.kappa}")
        if self.nu is not None and self.nu < 0:
            raise ConfigurationError(f"nu must be non-negative, got {self.nu}")

    @property
    def diffusion_kappa(self) -> float:
        return self.kappa if self.kappa_diffusion is None else self.kappa_diffusion

    @property
    def resolved_alpha(self) -> float:
        return resolve_alpha(self.diffusion_kappa, self.alpha)

    def legend(self, steady: bool = False) -> str:
        """Short human label: kappa, non-default alpha, flux recon, treatment."""
        if self.label:
            return self.label
        parts = [f"\u03ba={kappa_text(self.kappa)}"]
        if not isinstance(self.alpha, str):
            parts.append(f"\u03b1={self.alpha:.4g}")
        if self.recon_mode is ReconMode.FLUX:
            parts.append("flux")
        if not steady:
            parts.append(self.time_treatment.value)
        return " ".join(parts)

    def name(self) -> str:
        if self.label:
            return self.label
        alpha = self.alpha if isinstance(self.alpha, str) else f"{self.alpha:.6g}"
        return (f"k={kappa_text(self.kappa)}|a={alpha}|{self.recon_mode.value}"
                f"|{self.time_treatment.value}|{self.forcing_mode.value}"
                f"{'' if self.dissipation else '|nodiss'}")


def kappa_text(kappa: float) -> str:
    for num, den in ((0, 1), (1, 3), (1, 2), (1, 1), (-1, 1), (2, 3)):
        if abs(kappa - num / den) < 1e-14:
            return f"{num}/{den}" if den != 1 else f"{num}"
    return f"{kappa:.6g}"
