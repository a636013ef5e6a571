"""File output helpers"""
from .io import FLOAT_FORMAT, write_energy_csv, write_frame, write_snapshot_csv, write_text_report

__all__ = ['FLOAT_FORMAT', 'write_energy_csv', 'write_frame', 'write_snapshot_csv', 'write_text_report']
