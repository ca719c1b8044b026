"""Tridiagonal and cyclic-tridiagonal solves (Thomas algorithm).

Row ``i`` of a :class:`TridiagonalSystem` reads
``lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]``. In a cyclic system the
wrap-around entries ``A[0, n-1] = lower[0]`` and ``A[n-1, 0] = upper[n-1]``
are active; otherwise those two entries are ignored.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .errors import SingularPivotError


@dataclass(frozen=True)
class TridiagonalSystem:
    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray
    cyclic: bool = False

    def __post_init__(self):
        for name in ("lower", "diag", "upper"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        n = self.diag.shape[0]
        if self.lower.shape != (n,) or self.upper.shape != (n,):
            raise ValueError("lower, diag and upper must have equal length")

    @property
    def n(self) -> int:
        return self.diag.shape[0]

    def to_dense(self) -> np.ndarray:
        n = self.n
        a = np.diag(self.diag)
        a[np.arange(1, n), np.arange(n - 1)] = self.lower[1:]
        a[np.arange(n - 1), np.arange(1, n)] = self.upper[:-1]
        if self.cyclic:
            a[0, n - 1] += self.lower[0]
            a[n - 1, 0] += self.upper[n - 1]
        return a


def mass_matrix(n: int, cyclic: bool = True) -> TridiagonalSystem:
    """``(1, 22, 1) / 24`` coupling of point-value time derivatives."""
    return TridiagonalSystem(np.full(n, 1.0 / 24.0), np.full(n, 22.0 / 24.0),
                             np.full(n, 1.0 / 24.0), cyclic)


def matvec(sys: TridiagonalSystem, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (sys.n,):
        raise ValueError(f"vector of length {x.shape} does not match system of size {sys.n}")
    y = sys.diag * x
    y[1:] += sys.lower[1:] * x[:-1]
    y[:-1] += sys.upper[:-1] * x[1:]
    if sys.cyclic:
        y[0] += sys.lower[0] * x[-1]
        y[-1] += sys.upper[-1] * x[0]
    return y


@numba.njit(cache=True)
def _thomas(a, b, c, d, x):
    # returns the failing row, or -1
    n = b.shape[0]
    cp = np.empty(n)
    dp = np.empty(n)
    if b[0] == 0.0:
        return 0
    cp[0] = c[0] / b[0]
    dp[0] = d[0] / b[0]
    for i in range(1, n):
        m = b[i] - a[i] * cp[i - 1]
        if m == 0.0:
            return i
        cp[i] = c[i] / m
        dp[i] = (d[i] - a[i] * dp[i - 1]) / m
    x[n - 1] = dp[n - 1]
    for i in range(n - 2, -1, -1):
        x[i] = dp[i] - cp[i] * x[i + 1]
    return -1


def _solve_open(lower, diag, upper, rhs) -> np.ndarray:
    x = np.empty_like(rhs)
    bad = _thomas(lower, diag, upper, rhs, x)
    if bad >= 0:
        raise SingularPivotError(int(bad))
    return x


def solve_tridiagonal(sys: TridiagonalSystem, rhs) -> np.ndarray:
    """Solve ``A x = rhs``; cyclic systems use a Sherman-Morrison correction."""
    rhs = np.ascontiguousarray(rhs, dtype=float)
    n = sys.n
    if n < 3:
        raise ValueError(f"tridiagonal solve needs n >= 3, got {n}")
    if rhs.shape != (n,):
        raise ValueError(f"rhs of shape {rhs.shape} does not match system of size {n}")
    if not sys.cyclic:
        return _solve_open(sys.lower, sys.diag, sys.upper, rhs)

    beta = sys.lower[0]     # A[0, n-1]
    alpha = sys.upper[-1]   # A[n-1, 0]
    gamma = -sys.diag[0] if sys.diag[0] != 0 else -1.0
    diag = sys.diag.copy()
    diag[0] -= gamma
    diag[-1] -= alpha * beta / gamma
    x = _solve_open(sys.lower, diag, sys.upper, rhs)
    u = np.zeros(n)
    u[0] = gamma
    u[-1] = alpha
    z = _solve_open(sys.lower, diag, sys.upper, u)
    vx = x[0] + beta / gamma * x[-1]
    vz = z[0] + beta / gamma * z[-1]
    denom = 1.0 + vz
    if denom == 0.0:
        raise SingularPivotError(n - 1)
    return x - (vx / denom) * z
