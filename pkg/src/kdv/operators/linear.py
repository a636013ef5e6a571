"""Discretization of A y = -y_x - y_xxx with y(0) = y(L) = 0 and y_x(L) = 0.

D1 is the central difference with Dirichlet zeros, hence skew-symmetric.
D3 is the central five-point stencil. Two nodes fall outside the grid:

  * left ghost y_{-1}: odd reflection, y_{-1} = -y_1
  * right ghost y_{n+2}: mirror through x = L, y_{n+2} = y_n  (y_x(L) = 0)

Both closures add +1/(2h^3) on a diagonal corner of D3, so that
<A_h y, y>_h = -(y_1^2 + y_n^2) / (2h^2) <= 0 for every y.

The odd ghost assumes y_xx(0) = 0, which the boundary conditions do not
impose. Row 1 therefore carries a truncation error of -y_xx(0) / (2h),
and row n one of y_xxx(L) / 6. Every other row is second order. With the
uniform h-weighted inner product and bandwidth 2, requiring sym(D3) to be
positive semidefinite forces rows 2 and 3 to be central and row 1 to be
(1/2, -1, 1/2) / h^3, which is exactly the odd reflection; the only
consistent bandwidth-2 row 1, (3, -3, 1) / h^3, has an indefinite
symmetric part. The boundary rows do not spoil global second order
convergence of the time-dependent problem.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse

from src.kdv.grid import SpatialGrid
from src.kdv.operators.banded import BandedMatrix

logger = logging.getLogger(__name__)

BANDWIDTH = 2


@lru_cache(maxsize=32)
def first_derivative(grid: SpatialGrid) -> sparse.csr_matrix:
    n, h = grid.n_interior, grid.h
    off = np.full(n - 1, 1.0 / (2.0 * h))
    return sparse.diags([-off, off], [-1, 1], format="csr")


@lru_cache(maxsize=32)
def third_derivative(grid: SpatialGrid) -> sparse.csr_matrix:
    n, h = grid.n_interior, grid.h
    c = 1.0 / (2.0 * h ** 3)
    main = np.zeros(n)
    main[0] += c
    main[-1] += c
    return sparse.diags(
        [np.full(n - 2, -c), np.full(n - 1, 2.0 * c), main, np.full(n - 1, -2.0 * c), np.full(n - 2, c)],
        [-2, -1, 0, 1, 2],
        format="csr",
    )


@dataclass(frozen=True, eq=False)
class DiscreteLinearOperator:
    grid: SpatialGrid
    d1: sparse.csr_matrix
    d3: sparse.csr_matrix
    matrix: sparse.csr_matrix

    @property
    def banded(self) -> BandedMatrix:
        return BandedMatrix.from_sparse(self.matrix, BANDWIDTH, BANDWIDTH)

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()

    def quadratic_form(self, values: np.ndarray) -> float:
        """<A_h y, y>_h."""
        return float(self.grid.h * np.dot(self.matrix @ values, values))

    def boundary_flux(self, values: np.ndarray) -> float:
        """Exact value of -<A_h y, y>_h, the energy leaving through the two ends."""
        return float((values[0] ** 2 + values[-1] ** 2) / (2.0 * self.grid.h ** 2))

    def gershgorin_bound(self) -> float:
        return float(np.max(np.abs(self.matrix).sum(axis=1)))

    def shifted(self, alpha: float) -> sparse.csr_matrix:
        """I + alpha * A_h."""
        return (sparse.identity(self.grid.n_interior, format="csr") + alpha * self.matrix).tocsr()


@lru_cache(maxsize=32)
def build_linear_operator(grid: SpatialGrid) -> DiscreteLinearOperator:
    # grid validation already guarantees n_interior >= 4
    d1 = first_derivative(grid)
    d3 = third_derivative(grid)
    matrix = (-d1 - d3).tocsr()
    logger.debug("Built A_h on n=%d, h=%.6g", grid.n_interior, grid.h)
    return DiscreteLinearOperator(grid=grid, d1=d1, d3=d3, matrix=matrix)
