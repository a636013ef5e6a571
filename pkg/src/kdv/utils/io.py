import logging
from pathlib import Path
from typing import Mapping

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)

# 17 significant digits round-trip every double
FLOAT_FORMAT = "%.17g"

ENERGY_COLUMNS = ["t", "E", "sqrtE", "envelope_mu", "envelope_a", "control_l2", "boundary_slope"]
EXTRA_COLUMNS = ["weighted_E", "h1_sq", "dissipation_residual"]


def write_frame(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.debug("Wrote %d rows to %s", len(frame), path)
    return path


def energy_frame(trace, mu: float, gain: float) -> pd.DataFrame:
    """Energy trace plus the two theoretical curves E(0) exp(-2 mu t) and E(0) exp(-2 a t)."""
    t = trace.times
    energy = trace.energy
    frame = pd.DataFrame({
        "t": t,
        "E": energy,
        "sqrtE": np.sqrt(energy),
        "envelope_mu": energy[0] * np.exp(-2.0 * mu * t),
        "envelope_a": energy[0] * np.exp(-2.0 * gain * t),
        "control_l2": trace.column("control_l2"),
        "boundary_slope": trace.column("boundary_slope"),
    })
    for col in EXTRA_COLUMNS:
        frame[col] = trace.column(col)
    return frame


def write_energy_csv(trace, path: Path, mu: float, gain: float) -> Path:
    return write_frame(energy_frame(trace, mu, gain), path)


def snapshot_frame(trajectory) -> pd.DataFrame:
    """Long format (t, x, y) including both boundary nodes, ready for surface plots."""
    x = trajectory.grid.full_nodes
    padded = np.pad(trajectory.values, ((0, 0), (1, 1)))
    return pd.DataFrame({
        "t": np.repeat(trajectory.times, x.size),
        "x": np.tile(x, trajectory.times.size),
        "y": padded.ravel(),
    })


def write_snapshot_csv(trajectory, path: Path) -> Path:
    return write_frame(snapshot_frame(trajectory), path)


def _format(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def write_text_report(fields: Mapping[str, object], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for key, value in fields.items():
        if isinstance(value, Mapping):
            lines.append(f"{key}:")
            lines.extend(f"  {sub}: {_format(item)}" for sub, item in value.items())
        elif isinstance(value, (list, tuple)):
            lines.append(f"{key}:")
            lines.extend(f"  - {_format(item)}" for item in value)
        else:
            lines.append(f"{key}: {_format(value)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
