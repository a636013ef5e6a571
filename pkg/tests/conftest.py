import math
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.core.config import get_settings
from src.kdv.diagnostics.energy import EnergyTrace
from src.kdv.grid import SpatialGrid, named_profile

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def grid_2pi():
    return SpatialGrid(2 * math.pi, 256)


@pytest.fixture
def small_grid():
    return SpatialGrid(2 * math.pi, 32)


@pytest.fixture
def one_minus_cos(grid_2pi):
    return named_profile("one-minus-cos", grid_2pi)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def scenario_dir():
    return SCENARIO_DIR


def make_trace(times, energy, **columns):
    """Synthetic energy trace; unspecified columns are zero."""
    times = np.asarray(times, dtype=float)
    frame = {
        "t": times,
        "E": np.asarray(energy, dtype=float),
        "boundary_slope": np.zeros_like(times),
        "control_l2": np.zeros_like(times),
        "weighted_E": np.zeros_like(times),
        "h1_sq": np.zeros_like(times),
        "dissipation_residual": np.zeros_like(times),
    }
    for key, value in columns.items():
        frame[key] = np.asarray(value, dtype=float)
    return EnergyTrace(pd.DataFrame(frame))
