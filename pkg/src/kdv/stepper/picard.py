"""Picard iteration of the Duhamel map

    Gamma(z)(t) = W(t) y0 + int_0^t W(t - s) G(z(s)) ds,   G(z) = -N(z) - f(z),

with W(t) = exp(t A_h) and the trapezoid rule in s. Dense, so only for small grids.
"""
import logging
from dataclasses import dataclass
from typing import List

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import expm

from src.core.config import get_settings
from src.kdv.control.feedback import FeedbackLaw, control_values
from src.kdv.diagnostics.energy import bt_norm_from_series
from src.kdv.errors import ConfigurationError, NonContractionError
from src.kdv.grid import StateField
from src.kdv.operators.linear import build_linear_operator
from src.kdv.operators.nonlinear import nonlinear_values
from src.kdv.stepper.semi_implicit import steps_for
from src.kdv.stepper.trajectory import Trajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PicardResult:
    trajectory: Trajectory
    iterations: int
    differences: List[float]
    ratios: List[float]

    @property
    def contracting(self) -> bool:
        """Successive-difference ratios end below one."""
        tail = [r for r in self.ratios[-3:] if np.isfinite(r)]
        return all(r < 1.0 for r in tail)


def _bt_norm_rows(rows: np.ndarray, times: np.ndarray, h: float) -> float:
    l2_sq = h * np.einsum("ij,ij->i", rows, rows)
    padded = np.pad(rows, ((0, 0), (1, 1)))
    grad = np.gradient(padded, h, axis=1, edge_order=2)
    h1_sq = trapezoid(grad * grad, dx=h, axis=1)
    return bt_norm_from_series(times, l2_sq, h1_sq)


def picard_mild_solution(y0: StateField, law: FeedbackLaw, final_time: float, tol: float,
                         dt: float = 1e-3, nonlinear: bool = True, advection: str = "skew",
                         max_iter: int = None) -> PicardResult:
    settings = get_settings()
    max_iter = settings.KDV_PICARD_MAX_ITER if max_iter is None else max_iter
    grid = y0.grid
    if grid.n_interior > settings.KDV_PICARD_MAX_N:
        raise ConfigurationError(
            f"Picard oracle is dense and limited to n <= {settings.KDV_PICARD_MAX_N}, got n={grid.n_interior}"
        )
    if not tol > 0:
        raise ConfigurationError(f"Picard tolerance must be positive, got {tol}")

    operator = build_linear_operator(grid)
    h = grid.h
    count = steps_for(final_time, dt)
    dt = final_time / count
    times = dt * np.arange(count + 1)
    times[-1] = final_time
    propagator = expm(dt * operator.dense())

    free = np.empty((count + 1, grid.n_interior))
    free[0] = y0.values
    for k in range(1, count + 1):
        free[k] = propagator @ free[k - 1]

    def forcing(rows):
        g = -control_values(law, rows, h)
        if nonlinear:
            g -= nonlinear_values(rows, operator.d1, advection)
        return g

    def gamma(rows):
        g = forcing(rows)
        out = free.copy()
        integral = np.zeros(grid.n_interior)
        for k in range(1, count + 1):
            integral = propagator @ (integral + 0.5 * dt * g[k - 1]) + 0.5 * dt * g[k]
            out[k] += integral
        return out

    z = np.zeros_like(free)
    differences, ratios = [], []
    for iteration in range(1, max_iter + 1):
        z_next = gamma(z)
        diff = _bt_norm_rows(z_next - z, times, h)
        if differences:
            ratios.append(diff / differences[-1] if differences[-1] > 0 else 0.0)
        differences.append(diff)
        z = z_next
        logger.debug("Picard iteration %d: B(T) difference %.3e", iteration, diff)
        if diff < tol:
            traj = Trajectory(grid, times, z, {"method": "picard", "dt": dt, "law": law.name})
            return PicardResult(trajectory=traj, iterations=iteration,
                                differences=differences, ratios=ratios)

    raise NonContractionError(
        f"Picard iteration did not reach tol={tol:g} in {max_iter} iterations "
        f"(last difference {differences[-1]:.3e}); use a smaller final time T"
    )
