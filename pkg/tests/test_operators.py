import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial
from scipy import sparse

from src.kdv.errors import ConfigurationError, DimensionError, FactorizationError
from src.kdv.grid import SpatialGrid, StateField, l2_norm, named_profile
from src.kdv.operators import (
    BandedMatrix,
    build_linear_operator,
    first_derivative,
    nonlinear_term,
    nonlinear_values,
    solve_banded,
)


def _random_banded(rng, n, kl, ku):
    offsets = list(range(-kl, ku + 1))
    diagonals = [rng.uniform(-1, 1, n - abs(k)) for k in offsets]
    matrix = sparse.diags(diagonals, offsets, format="csr")
    return (matrix + 10.0 * sparse.identity(n)).tocsr()


def test_identity_solve_returns_rhs(rng):
    rhs = rng.standard_normal(20)
    np.testing.assert_array_equal(solve_banded(BandedMatrix.identity(20), rhs), rhs)


def test_diagonally_dominant_solve(rng):
    matrix = _random_banded(rng, 64, 2, 2)
    banded = BandedMatrix.from_sparse(matrix, 2, 2)
    rhs = rng.standard_normal(64)
    x = banded.solve(rhs)
    assert np.linalg.norm(matrix @ x - rhs) <= 1e-12 * np.linalg.norm(rhs)


def test_band_layout_round_trip(rng):
    matrix = _random_banded(rng, 12, 2, 1)
    banded = BandedMatrix.from_sparse(matrix, 2, 1)
    np.testing.assert_array_equal(banded.to_dense(), matrix.toarray())
    v = rng.standard_normal(12)
    np.testing.assert_allclose(banded.matvec(v), matrix @ v, rtol=1e-14)


def test_tridiagonal_laplacian():
    n = 10
    matrix = sparse.diags([-np.ones(n - 1), 2 * np.ones(n), -np.ones(n - 1)], [-1, 0, 1])
    x = BandedMatrix.from_sparse(matrix, 1, 1).solve(np.ones(n))
    i = np.arange(1, n + 1)
    np.testing.assert_allclose(x, i * (n + 1 - i) / 2.0, rtol=1e-12)


def test_factorization_is_computed_once(rng):
    banded = BandedMatrix.from_sparse(_random_banded(rng, 30, 2, 2), 2, 2)
    assert not banded.is_factorized
    first = banded.solve(rng.standard_normal(30))
    lu = banded._lu
    assert banded.is_factorized
    second = banded.solve(rng.standard_normal(30))
    assert banded._lu is lu
    assert first.shape == second.shape == (30,)


def test_solve_several_right_hand_sides(rng):
    matrix = _random_banded(rng, 16, 2, 2)
    rhs = rng.standard_normal((16, 3))
    x = BandedMatrix.from_sparse(matrix, 2, 2).solve(rhs)
    assert x.shape == (16, 3)
    np.testing.assert_allclose(matrix @ x, rhs, atol=1e-12)


def test_singular_matrix_is_rejected():
    with pytest.raises(FactorizationError):
        BandedMatrix(np.zeros((5, 8)), 2, 2).factorize()


def test_entries_outside_the_band_are_rejected():
    with pytest.raises(DimensionError):
        BandedMatrix.from_sparse(sparse.eye(6, k=3), 2, 2)
    with pytest.raises(DimensionError):
        BandedMatrix(np.zeros((4, 8)), 2, 2)


def test_first_derivative_is_skew_symmetric(grid_2pi):
    d1 = first_derivative(grid_2pi)
    assert abs(d1 + d1.T).max() == 0.0


def test_operator_is_dissipative(rng):
    grid = SpatialGrid(2 * math.pi, 128)
    op = build_linear_operator(grid)
    for _ in range(1000):
        y = rng.standard_normal(grid.n_interior)
        form = op.quadratic_form(y)
        assert form <= 1e-10
        assert form == pytest.approx(-op.boundary_flux(y), rel=1e-9, abs=1e-9)


def test_operator_is_pentadiagonal(small_grid):
    op = build_linear_operator(small_grid)
    np.testing.assert_allclose(op.banded.to_dense(), op.dense())
    assert op.gershgorin_bound() > 0


def _consistency_error(n):
    w = Polynomial([0, 0, 0, 0, 0, 1]) * Polynomial([1, -1]) ** 4
    exact = -(w.deriv(1) + w.deriv(3))
    grid = SpatialGrid(1.0, n)
    op = build_linear_operator(grid)
    x = grid.nodes
    return grid.h, float(np.max(np.abs(op.matrix @ w(x) - exact(x))))


def test_operator_is_second_order_consistent_for_flat_boundary_profiles():
    # w''(0) = 0 and w'''(L) = 0, so neither ghost closure is visible
    hs, errors = zip(*(_consistency_error(n) for n in (63, 127, 255, 511)))
    slope = np.polyfit(np.log(hs), np.log(errors), 1)[0]
    assert 1.8 <= slope <= 2.2


@pytest.mark.parametrize("n", [63, 127, 255])
def test_consistency_error_of_a_cubic_profile_is_known_row_by_row(n):
    # w = x (L - x)^2 on L = 1: w''(0) = -4 and w'''(L) = 6
    w = Polynomial([0, 1]) * Polynomial([1, -1]) ** 2
    exact = -(w.deriv(1) + w.deriv(3))
    grid = SpatialGrid(1.0, n)
    x = grid.nodes
    h = grid.h
    error = build_linear_operator(grid).matrix @ w(x) - exact(x)
    # interior: the central D1 error h^2 w'''/6, D3 is exact on cubics
    np.testing.assert_allclose(error[1:-1], -h ** 2, rtol=1e-3)
    # odd ghost at x = 0 contributes -w''(0) / (2h)
    assert error[0] == pytest.approx(2.0 / h - h ** 2, rel=1e-9)
    # mirror ghost at x = L contributes w'''(L) / 6
    assert error[-1] == pytest.approx(1.0 - h ** 2, abs=1e-6)


def test_one_minus_cos_is_nearly_stationary_away_from_x0():
    for n in (127, 255):
        grid = SpatialGrid(2 * math.pi, n)
        y = named_profile("one-minus-cos", grid)
        residual = build_linear_operator(grid).matrix @ y.values
        assert np.max(np.abs(residual[1:])) <= grid.h ** 2
        # the odd reflection at x = 0 does not match the even profile 1 - cos x
        assert abs(residual[0]) == pytest.approx(0.5 / grid.h, rel=0.05)


def test_nonlinear_term_of_zero(small_grid):
    np.testing.assert_array_equal(nonlinear_term(StateField.zeros(small_grid)).values, 0.0)


def test_skew_nonlinear_term_conserves_energy(rng):
    grid = SpatialGrid(2 * math.pi, 128)
    for _ in range(100):
        y = StateField(grid, rng.standard_normal(grid.n_interior))
        assert abs(grid.h * np.dot(nonlinear_term(y).values, y.values)) <= 1e-10


def test_nonlinear_term_is_second_order():
    errors = []
    for n in (127, 255):
        grid = SpatialGrid(2 * math.pi, n)
        y = named_profile("sine", grid)
        exact = np.sin(grid.nodes) * np.cos(grid.nodes)
        err = np.max(np.abs(nonlinear_term(y).values - exact))
        assert err <= grid.h ** 2
        errors.append(err)
    assert errors[0] / errors[1] >= 3.5


def test_central_advection_option(small_grid):
    y = named_profile("sine", small_grid)
    d1 = first_derivative(small_grid)
    np.testing.assert_allclose(nonlinear_values(y.values, d1, "central"), y.values * (d1 @ y.values))
    with pytest.raises(ConfigurationError):
        nonlinear_values(y.values, d1, "upwind")


def test_nonlinear_values_accepts_stacked_fields(small_grid, rng):
    rows = rng.standard_normal((4, small_grid.n_interior))
    d1 = first_derivative(small_grid)
    stacked = nonlinear_values(rows, d1)
    for row, out in zip(rows, stacked):
        np.testing.assert_allclose(nonlinear_values(row, d1), out, rtol=1e-14)
    assert l2_norm(StateField(small_grid, stacked[0])) > 0
