"""Time integration: semi-implicit stepper, RK4 reference and the Picard oracle"""
from .trajectory import Trajectory
from .semi_implicit import SemiImplicitStepper, stable_dt, step, steps_for
from .simulate import SimulationResult, simulate
from .reference import rk4_reference
from .picard import PicardResult, picard_mild_solution

__all__ = [
    'Trajectory',
    'SemiImplicitStepper',
    'stable_dt',
    'step',
    'steps_for',
    'SimulationResult',
    'simulate',
    'rk4_reference',
    'PicardResult',
    'picard_mild_solution',
]
