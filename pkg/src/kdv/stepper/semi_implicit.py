"""Crank-Nicolson on A_h with an explicit Heun treatment of G(y) = -N(y) - f(y).

    predictor:  (I - dt/2 A) y*  = (I + dt/2 A) y + dt G(y)
    corrector:  (I - dt/2 A) y+  = (I + dt/2 A) y + dt/2 (G(y) + G(y*))
"""
import logging
import math

import numpy as np

from src.kdv.control.feedback import FeedbackLaw, ZeroFeedback, control_values
from src.kdv.errors import NumericalError
from src.kdv.grid import StateField
from src.kdv.operators.banded import BandedMatrix
from src.kdv.operators.linear import BANDWIDTH, DiscreteLinearOperator, build_linear_operator
from src.kdv.operators.nonlinear import nonlinear_values

logger = logging.getLogger(__name__)


def stable_dt(values: np.ndarray, h: float, cfl_safety: float) -> float:
    """Transport restriction dt <= cfl * h / max(1, max|y|); dispersion is implicit."""
    peak = float(np.max(np.abs(values))) if values.size else 0.0
    return cfl_safety * h / max(1.0, peak)


def steps_for(duration: float, dt: float) -> int:
    # absorb the representation error of e.g. 0.1 / 0.002
    return max(1, int(math.ceil(duration / dt - 1e-9)))


class SemiImplicitStepper:
    def __init__(self, operator: DiscreteLinearOperator, law: FeedbackLaw, dt: float,
                 nonlinear: bool = True, advection: str = "skew"):
        if not dt > 0:
            raise NumericalError(f"Time step must be positive, got {dt}")
        self.operator = operator
        self.law = law
        self.dt = dt
        self.nonlinear = nonlinear
        self.advection = advection
        self.lhs = BandedMatrix.from_sparse(operator.shifted(-0.5 * dt), BANDWIDTH, BANDWIDTH).factorize()
        self.rhs = operator.shifted(0.5 * dt)
        self._explicit = nonlinear or not isinstance(law, ZeroFeedback)
        # (G(y) + G(y*)) / 2 of the last step, the forcing the corrector actually applied
        self.mean_forcing = None

    def forcing(self, values: np.ndarray) -> np.ndarray:
        g = -control_values(self.law, values, self.operator.grid.h)
        if self.nonlinear:
            g -= nonlinear_values(values, self.operator.d1, self.advection)
        return g

    def advance(self, values: np.ndarray) -> np.ndarray:
        base = self.rhs @ values
        if not self._explicit:
            new = self.lhs.solve(base)
            self.mean_forcing = np.zeros_like(new)
        else:
            g0 = self.forcing(values)
            predicted = self.lhs.solve(base + self.dt * g0)
            g1 = self.forcing(predicted)
            self.mean_forcing = 0.5 * (g0 + g1)
            new = self.lhs.solve(base + self.dt * self.mean_forcing)
        if not np.all(np.isfinite(new)):
            raise NumericalError(f"Non-finite state after a step of size dt={self.dt:.6g}")
        return new


def step(y: StateField, dt: float, law: FeedbackLaw, nonlinear: bool = True,
         advection: str = "skew") -> StateField:
    stepper = SemiImplicitStepper(build_linear_operator(y.grid), law, dt, nonlinear, advection)
    return StateField(y.grid, stepper.advance(y.values))
