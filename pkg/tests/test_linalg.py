import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quickfv.errors import SingularPivotError
from quickfv.linalg import TridiagonalSystem, mass_matrix, matvec, solve_tridiagonal


def dense_oracle(lower, diag, upper, cyclic):
    """Matrix written entry by entry, independent of TridiagonalSystem.to_dense."""
    n = len(diag)
    a = np.zeros((n, n))
    for i in range(n):
        a[i, i] = diag[i]
        if i > 0:
            a[i, i - 1] = lower[i]
        elif cyclic:
            a[0, n - 1] = lower[0]
        if i < n - 1:
            a[i, i + 1] = upper[i]
        elif cyclic:
            a[n - 1, 0] = upper[n - 1]
    return a


def test_identity():
    n = 6
    sys = TridiagonalSystem(np.zeros(n), np.ones(n), np.zeros(n))
    rhs = np.arange(n, dtype=float)
    assert np.array_equal(solve_tridiagonal(sys, rhs), rhs)


def test_four_by_four_cyclic_against_dense():
    lower = np.array([0.5, -1.0, 0.25, 2.0])
    diag = np.array([4.0, 5.0, 3.0, 6.0])
    upper = np.array([1.0, 0.5, -0.75, 1.5])
    rhs = np.array([1.0, -2.0, 3.0, 0.5])
    x = solve_tridiagonal(TridiagonalSystem(lower, diag, upper, cyclic=True), rhs)
    ref = np.linalg.solve(dense_oracle(lower, diag, upper, True), rhs)
    assert np.allclose(x, ref, rtol=1e-12, atol=0)


@st.composite
def dominant_system(draw):
    n = draw(st.integers(3, 40))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    lower, upper = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
    diag = (np.abs(lower) + np.abs(upper) + rng.uniform(0.1, 3, n)) * rng.choice([-1, 1], n)
    return lower, diag, upper, rng.standard_normal(n)


@given(data=dominant_system(), cyclic=st.booleans())
def test_random_systems_against_dense(data, cyclic):
    lower, diag, upper, rhs = data
    sys = TridiagonalSystem(lower, diag, upper, cyclic)
    x = solve_tridiagonal(sys, rhs)
    ref = np.linalg.solve(dense_oracle(lower, diag, upper, cyclic), rhs)
    assert np.max(np.abs(x - ref)) <= 1e-12 * np.max(np.abs(ref))
    assert np.allclose(sys.to_dense(), dense_oracle(lower, diag, upper, cyclic))


@given(data=dominant_system(), cyclic=st.booleans())
def test_matvec_matches_dense(data, cyclic):
    lower, diag, upper, x = data
    y = matvec(TridiagonalSystem(lower, diag, upper, cyclic), x)
    assert np.allclose(y, dense_oracle(lower, diag, upper, cyclic) @ x, rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("n", [3, 8, 100])
def test_mass_matrix_rows_sum_to_one(n):
    m = mass_matrix(n)
    assert np.all(np.abs(m.to_dense().sum(axis=1) - 1.0) <= 2 * np.finfo(float).eps)
    assert np.allclose(matvec(m, np.full(n, 3.5)), 3.5, rtol=1e-15)
    assert np.array_equal(matvec(m, np.zeros(n)), np.zeros(n))


def test_mass_matrix_on_quadratic_gives_cell_average():
    # (u_{i-1} + 22 u_i + u_{i+1}) / 24 = x_i^2 + h^2/12 when u = x^2, h = 1
    n = 12
    x = np.arange(n, dtype=float)
    y = matvec(mass_matrix(n, cyclic=False), x ** 2)
    assert np.allclose(y[1:-1], x[1:-1] ** 2 + 1.0 / 12.0, rtol=0, atol=1e-12)


def test_mass_matrix_round_trip(rng):
    m = mass_matrix(257)
    v = rng.standard_normal(257)
    back = solve_tridiagonal(m, matvec(m, v))
    assert np.max(np.abs(back - v)) <= 1e-12 * np.max(np.abs(v))


def test_singular_pivot_reports_row():
    sys = TridiagonalSystem(np.array([0.0, 1.0, 1.0]), np.array([1.0, 1.0, 1.0]),
                            np.array([1.0, 1.0, 0.0]))
    with pytest.raises(SingularPivotError) as err:
        solve_tridiagonal(sys, np.ones(3))
    assert err.value.index == 1


def test_shape_checks():
    with pytest.raises(ValueError):
        TridiagonalSystem(np.zeros(3), np.ones(4), np.zeros(4))
    with pytest.raises(ValueError):
        solve_tridiagonal(mass_matrix(2), np.ones(2))
    with pytest.raises(ValueError):
        solve_tridiagonal(mass_matrix(5), np.ones(4))
    with pytest.raises(ValueError):
        matvec(mass_matrix(5), np.ones(4))
