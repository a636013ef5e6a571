from dataclasses import dataclass, field
from typing import Dict, Iterator

import numpy as np

from src.kdv.errors import ConfigurationError, DimensionError
from src.kdv.grid import SpatialGrid, StateField


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Strided snapshots y(t_k, .), one row of ``values`` per time."""
    grid: SpatialGrid
    times: np.ndarray
    values: np.ndarray
    provenance: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        values = np.array(self.values, dtype=float)
        if times.ndim != 1 or times.size == 0:
            raise ConfigurationError("Trajectory needs at least one time")
        if times[0] != 0.0:
            raise ConfigurationError(f"Trajectory must start at t = 0, got {times[0]}")
        if np.any(np.diff(times) <= 0):
            raise ConfigurationError("Trajectory times must be strictly increasing")
        if values.shape != (times.size, self.grid.n_interior):
            raise DimensionError(
                f"Snapshots have shape {values.shape}, expected ({times.size}, {self.grid.n_interior})"
            )
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self):
        return self.times.size

    @property
    def states(self) -> Iterator[StateField]:
        return (StateField(self.grid, row) for row in self.values)

    @property
    def final_state(self) -> StateField:
        return StateField(self.grid, self.values[-1])

    def truncated(self, t_max: float) -> "Trajectory":
        keep = self.times <= t_max
        return Trajectory(self.grid, self.times[keep], self.values[keep], dict(self.provenance))
