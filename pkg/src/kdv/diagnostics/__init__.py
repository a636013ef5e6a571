"""Trajectory diagnostics and critical-length arithmetic"""
from .energy import (
    TRACE_COLUMNS,
    EnergyTrace,
    bt_norm,
    bt_norm_from_series,
    dissipation_residual,
    h1_balance_ratio,
    is_energy_monotone,
    max_energy_increase,
    measured_amplification,
    trace_bt_norm,
    trace_record,
    trace_regularity_ratio,
)
from .critical import CriticalLengthQuery, CriticalMatch, critical_length, critical_lengths

__all__ = [
    'TRACE_COLUMNS',
    'EnergyTrace',
    'bt_norm',
    'bt_norm_from_series',
    'dissipation_residual',
    'h1_balance_ratio',
    'is_energy_monotone',
    'max_energy_increase',
    'measured_amplification',
    'trace_bt_norm',
    'trace_record',
    'trace_regularity_ratio',
    'CriticalLengthQuery',
    'CriticalMatch',
    'critical_length',
    'critical_lengths',
]
