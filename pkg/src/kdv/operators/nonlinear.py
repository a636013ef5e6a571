import numpy as np

from src.kdv.errors import ConfigurationError
from src.kdv.grid import StateField
from src.kdv.operators.linear import first_derivative

ADVECTION_SCHEMES = ("skew", "central")


def nonlinear_values(values: np.ndarray, d1, scheme: str = "skew") -> np.ndarray:
    """y*y_x on raw node values; a 2-D array is treated as one field per row.

    The skew form (y*D1y + D1(y*y))/3 satisfies <N(y), y>_h = 0 exactly
    because D1 is skew-symmetric.
    """
    columns = values.T
    if scheme == "skew":
        out = (columns * (d1 @ columns) + d1 @ (columns * columns)) / 3.0
    elif scheme == "central":
        out = columns * (d1 @ columns)
    else:
        raise ConfigurationError(f"Unknown advection scheme '{scheme}', expected one of {ADVECTION_SCHEMES}")
    return np.asarray(out).T


def nonlinear_term(y: StateField, scheme: str = "skew") -> StateField:
    return StateField(y.grid, nonlinear_values(y.values, first_derivative(y.grid), scheme))
