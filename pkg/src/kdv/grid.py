"""Uniform grid on [0, L], nodal state fields and the discrete norms.

Boundary values y(0) = y(L) = 0 are never stored; every field holds the
interior nodes x_i = i*h, i = 1..n, only.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from src.kdv.errors import ConfigurationError, DimensionError, DomainError, NumericalError

logger = logging.getLogger(__name__)

MIN_INTERIOR_NODES = 4


@dataclass(frozen=True)
class SpatialGrid:
    length: float
    n_interior: int

    def __post_init__(self):
        if not np.isfinite(self.length) or self.length <= 0:
            raise DomainError(f"Domain length must be positive, got {self.length}")
        if int(self.n_interior) != self.n_interior or self.n_interior < MIN_INTERIOR_NODES:
            raise DimensionError(
                f"Grid needs at least {MIN_INTERIOR_NODES} interior nodes, got {self.n_interior}"
            )
        object.__setattr__(self, "length", float(self.length))
        object.__setattr__(self, "n_interior", int(self.n_interior))

    @property
    def h(self) -> float:
        return self.length / (self.n_interior + 1)

    @cached_property
    def nodes(self) -> np.ndarray:
        x = self.h * np.arange(1, self.n_interior + 1)
        x.setflags(write=False)
        return x

    @cached_property
    def full_nodes(self) -> np.ndarray:
        """Nodes including both boundary points, x_0 = 0 and x_{n+1} = L."""
        x = self.h * np.arange(0, self.n_interior + 2)
        x[-1] = self.length
        x.setflags(write=False)
        return x

    @property
    def weights(self) -> np.ndarray:
        # trapezoid weights collapse to h on the interior since boundary values are zero
        return np.full(self.n_interior, self.h)


@dataclass(frozen=True, eq=False)
class StateField:
    grid: SpatialGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float, copy=True)
        if values.shape != (self.grid.n_interior,):
            raise DimensionError(
                f"State has shape {values.shape}, grid expects ({self.grid.n_interior},)"
            )
        if not np.all(np.isfinite(values)):
            raise NumericalError("State contains non-finite values (NaN or Inf)")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: SpatialGrid) -> "StateField":
        return cls(grid, np.zeros(grid.n_interior))

    def padded(self) -> np.ndarray:
        """Values with the two Dirichlet zeros attached."""
        return np.concatenate(([0.0], self.values, [0.0]))

    def with_values(self, values: np.ndarray) -> "StateField":
        return StateField(self.grid, values)

    def _check_grid(self, other: "StateField"):
        if other.grid != self.grid:
            raise DimensionError("Fields live on different grids")

    def __add__(self, other: "StateField") -> "StateField":
        self._check_grid(other)
        return StateField(self.grid, self.values + other.values)

    def __sub__(self, other: "StateField") -> "StateField":
        self._check_grid(other)
        return StateField(self.grid, self.values - other.values)

    def __mul__(self, c: float) -> "StateField":
        return StateField(self.grid, c * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> "StateField":
        return StateField(self.grid, -self.values)


def l2_norm(y: StateField) -> float:
    v = y.values
    return float(np.sqrt(y.grid.h * np.dot(v, v)))


def h1_seminorm(y: StateField) -> float:
    """L2 norm of the discrete gradient over all n+2 nodes.

    Central differences inside, second order one-sided at the two ends,
    integrated with the trapezoid rule.
    """
    grad = np.gradient(y.padded(), y.grid.h, edge_order=2)
    return float(np.sqrt(trapezoid(grad * grad, dx=y.grid.h)))


def boundary_slope(y: StateField) -> float:
    """One-sided second-order estimate of y_x(t, 0) using y(0) = 0."""
    v = y.values
    return float((4.0 * v[0] - v[1]) / (2.0 * y.grid.h))


def weighted_energy(y: StateField) -> float:
    """Discrete version of the integral of x*y^2 over (0, L)."""
    v = y.values
    return float(y.grid.h * np.dot(y.grid.nodes, v * v))


PROFILE_NAMES = ("zero", "one-minus-cos", "gaussian", "sine", "tabulated")


def named_profile(name: str, grid: SpatialGrid, scale: Optional[float] = None,
                  table: Optional[Tuple[np.ndarray, np.ndarray]] = None) -> StateField:
    """
    Sample a named initial profile on the grid.

    Args:
        name: one of PROFILE_NAMES
        grid: target grid
        scale: if given, the field is rescaled to this L2 norm
        table: (x, y) samples for the "tabulated" profile, linearly interpolated

    Returns:
        StateField with the profile values
    """
    x = grid.nodes
    if name == "zero":
        values = np.zeros_like(x)
    elif name == "one-minus-cos":
        values = 1.0 - np.cos(x)
    elif name == "gaussian":
        width = grid.length / 8.0
        values = np.exp(-((x - 0.5 * grid.length) / width) ** 2)
    elif name == "sine":
        values = np.sin(x)
    elif name == "tabulated":
        if table is None:
            raise ConfigurationError("Profile 'tabulated' needs a table of (x, y) samples")
        tx, ty = (np.asarray(col, dtype=float) for col in table)
        if tx.ndim != 1 or tx.shape != ty.shape or tx.size < 2:
            raise ConfigurationError("Tabulated profile needs two equal-length columns with >= 2 rows")
        if np.any(np.diff(tx) <= 0):
            raise ConfigurationError("Tabulated profile abscissae must be strictly increasing")
        values = np.interp(x, tx, ty, left=0.0, right=0.0)
    else:
        raise ConfigurationError(
            f"Unknown initial profile '{name}', expected one of {', '.join(PROFILE_NAMES)}"
        )

    field = StateField(grid, values)
    if scale is not None:
        norm = l2_norm(field)
        if norm == 0.0:
            if scale != 0.0:
                raise ConfigurationError(f"Cannot rescale profile '{name}': it is identically zero")
            return field
        logger.debug("Rescaling profile %s from norm %.6g to %.6g", name, norm, scale)
        field = field * (scale / norm)
    return field
