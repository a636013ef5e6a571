"""Explicit RK4 micro-stepping of the same semi-discrete system, used as a reference."""
import logging

import numpy as np

from src.kdv.control.feedback import FeedbackLaw, control_values
from src.kdv.errors import NumericalError
from src.kdv.grid import StateField
from src.kdv.operators.linear import build_linear_operator
from src.kdv.operators.nonlinear import nonlinear_values
from src.kdv.stepper.semi_implicit import steps_for

logger = logging.getLogger(__name__)

# RK4 is stable on the imaginary axis up to 2*sqrt(2); stay well inside
RK4_STABILITY_FRACTION = 1.5


def rk4_reference(y0: StateField, law: FeedbackLaw, final_time: float, nonlinear: bool = True,
                  advection: str = "skew", max_dt: float = None) -> StateField:
    operator = build_linear_operator(y0.grid)
    h = y0.grid.h
    matrix, d1 = operator.matrix, operator.d1

    def rhs(values):
        out = matrix @ values - control_values(law, values, h)
        if nonlinear:
            out -= nonlinear_values(values, d1, advection)
        return out

    dt_limit = RK4_STABILITY_FRACTION / operator.gershgorin_bound()
    if max_dt is not None:
        dt_limit = min(dt_limit, max_dt)
    count = steps_for(final_time, dt_limit)
    dt = final_time / count
    logger.debug("RK4 reference: %d micro-steps of %.3e", count, dt)

    y = y0.values.copy()
    for _ in range(count):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(y)):
        raise NumericalError("RK4 reference produced non-finite values")
    return StateField(y0.grid, y)
