"""Finite-volume QUICK scheme family for 1-D conservation laws on uniform grids."""

from .errors import ConfigurationError, NumericalError, QuickFVError, SingularPivotError
from .grid import (AUTO, FluxFunction, ForcingMode, Grid, ReconMode, SchemeConfig, State,
                   TimeTreatment, Topology, burgers_flux, cell_center, linear_flux, neighbor,
                   resolve_alpha)
from .residual import assemble_residual, flux_at_face
from .time_march import TimeMarchConfig, march

__version__ = "0.1.0"
