"""Spatial operators: banded storage, the linear KdV operator and the transport term"""
from .banded import BandedMatrix, solve_banded
from .linear import DiscreteLinearOperator, build_linear_operator, first_derivative, third_derivative
from .nonlinear import ADVECTION_SCHEMES, nonlinear_term, nonlinear_values

__all__ = [
    'BandedMatrix',
    'solve_banded',
    'DiscreteLinearOperator',
    'build_linear_operator',
    'first_derivative',
    'third_derivative',
    'ADVECTION_SCHEMES',
    'nonlinear_term',
    'nonlinear_values',
]
