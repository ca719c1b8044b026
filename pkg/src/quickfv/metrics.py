"""L1 error norms and observed orders of accuracy."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .grid import Grid, SchemeConfig, State
from .problems import Problem
from .residual import residual_values

UNDEFINED_ORDER = float("nan")


@dataclass
class ErrorReport:
    n_cells: int
    h: float
    te_point: Optional[float] = None
    te_cellavg: Optional[float] = None
    de_point: Optional[float] = None
    de_cellavg: Optional[float] = None


def _mean_abs(v: np.ndarray, grid: Grid, interior_only: bool = True) -> float:
    if interior_only:
        v = v[grid.interior]
    return float(np.mean(np.abs(v)))


def truncation_error_norms(problem: Problem, config: SchemeConfig, grid: Grid):
    """Residual norms with the exact point values and exact cell averages substituted."""
    x = grid.centers
    u_point = np.asarray(problem.exact_point(x), dtype=float)
    u_avg = np.asarray(problem.exact_cell_avg(x, grid.h), dtype=float)
    te_point = _mean_abs(residual_values(u_point, grid, problem, config), grid)
    te_cellavg = _mean_abs(residual_values(u_avg, grid, problem, config), grid)
    return te_point, te_cellavg


def discretization_error_norms(solution: State, problem: Problem, grid: Grid,
                               interior_only: bool = True):
    """Point-value and cell-average errors of a point-valued solution.

    The numerical values are compared as they are against both readings of the
    exact solution. Padded grids average over the unknown cells only.
    """
    x = grid.centers
    u = solution.values
    de_point = _mean_abs(u - problem.exact_point(x), grid, interior_only)
    de_cellavg = _mean_abs(u - problem.exact_cell_avg(x, grid.h), grid, interior_only)
    return de_point, de_cellavg


def observed_order(e_coarse: float, e_fine: float, h_coarse: float, h_fine: float) -> float:
    values = (e_coarse, e_fine, h_coarse, h_fine)
    if not all(v is not None and math.isfinite(v) and v > 0 for v in values) or h_coarse == h_fine:
        return UNDEFINED_ORDER
    return math.log(e_coarse / e_fine) / math.log(h_coarse / h_fine)


def least_squares_order(hs: Sequence[float], errors: Sequence[float], last: int = 3) -> float:
    """Slope of ``log e`` against ``log h`` over the ``last`` finest grids."""
    pairs = [(h, e) for h, e in zip(hs, errors) if e is not None and e > 0]
    pairs = sorted(pairs, reverse=True)[-last:]
    if len(pairs) < 2:
        return UNDEFINED_ORDER
    lh, le = np.log(np.array(pairs)).T
    return float(np.polyfit(lh, le, 1)[0])


@dataclass
class OrderRow:
    h_coarse: float
    h_fine: float
    error_coarse: float
    error_fine: float
    observed_order: float


@dataclass
class OrderTable:
    norm: str
    label: str
    rows: list[OrderRow] = field(default_factory=list)
    hs: list[float] = field(default_factory=list)
    errors: list[float] = field(default_factory=list)

    @classmethod
    def from_sequence(cls, norm: str, label: str, hs: Sequence[float],
                      errors: Sequence[Optional[float]]) -> "OrderTable":
        order = np.argsort(hs)[::-1]
        hs = [float(hs[k]) for k in order]
        errors = [errors[k] for k in order]
        rows = [OrderRow(hc, hf, ec, ef, observed_order(ec, ef, hc, hf))
                for hc, hf, ec, ef in zip(hs, hs[1:], errors, errors[1:])]
        return cls(norm, label, rows, hs, list(errors))

    @property
    def finest_order(self) -> float:
        return self.rows[-1].observed_order if self.rows else UNDEFINED_ORDER

    def fitted_order(self, last: int = 3) -> float:
        return least_squares_order(self.hs, self.errors, last)
