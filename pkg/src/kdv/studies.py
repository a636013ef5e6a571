"""Multi-run studies: combined (h, dt) refinement and continuous dependence on y0."""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from src.kdv.errors import ConfigurationError
from src.kdv.grid import SpatialGrid, StateField, l2_norm
from src.kdv.scenario import ScenarioFile, scenario_to_config
from src.kdv.stepper.semi_implicit import stable_dt
from src.kdv.stepper.simulate import SimulationResult, simulate

logger = logging.getLogger(__name__)

MIN_LEVELS = 3
# differences below this fraction of the solution size count as round-off
EXACT_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class ConvergenceTable:
    frame: pd.DataFrame
    exact: bool
    monotone: bool

    @property
    def orders(self) -> np.ndarray:
        return self.frame["order"].dropna().to_numpy()

    @property
    def observed_order(self) -> float:
        orders = self.orders
        return float(orders[-1]) if orders.size else math.nan


def restrict(values: np.ndarray, fine: SpatialGrid, coarse: SpatialGrid) -> np.ndarray:
    """Sample a fine-grid field at the coarse nodes (grids nested by a power of two)."""
    ratio, rem = divmod(fine.n_interior + 1, coarse.n_interior + 1)
    if rem or ratio < 1:
        raise ConfigurationError(f"Grids n={fine.n_interior} and n={coarse.n_interior} are not nested")
    return values[ratio * np.arange(1, coarse.n_interior + 1) - 1]


def _base_dt(scenario: ScenarioFile, base_dir: Path) -> float:
    if scenario.dt != "auto":
        return float(scenario.dt)
    config = scenario_to_config(scenario, base_dir)
    return stable_dt(config.initial.values, config.grid.h, config.cfl_safety)


def _run(scenario: ScenarioFile, base_dir: Path) -> SimulationResult:
    return simulate(scenario_to_config(scenario, base_dir))


def convergence_study(scenario: ScenarioFile, levels: int, jobs: int = 1,
                      base_dir: Path = Path(".")) -> ConvergenceTable:
    """
    Refine h and dt together: n_k + 1 = (n_0 + 1) 2^k and dt_k = dt_0 / 2^k.

    Errors are reported against the finest level; orders come from successive
    level differences, which do not suffer from the finest level's own error.
    """
    if levels < MIN_LEVELS:
        raise ConfigurationError(f"Convergence study needs at least {MIN_LEVELS} levels, got {levels}")
    dt0 = _base_dt(scenario, base_dir)
    variants = [
        scenario.model_copy(update={
            "n_interior": (scenario.n_interior + 1) * 2 ** k - 1,
            "dt": dt0 / 2 ** k,
            "snapshot_full": False,
            "name": f"{scenario.name}-level{k}",
        })
        for k in range(levels)
    ]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda s: _run(s, base_dir), variants))
    else:
        results = [_run(s, base_dir) for s in variants]

    finals: List[StateField] = [r.trajectory.final_state for r in results]
    finest = finals[-1]
    rows = []
    for k, (variant, result, final) in enumerate(zip(variants, results, finals)):
        grid = final.grid
        vs_finest = l2_norm(StateField(grid, final.values - restrict(finest.values, finest.grid, grid)))
        if k + 1 < levels:
            nxt = finals[k + 1]
            successive = l2_norm(StateField(grid, final.values - restrict(nxt.values, nxt.grid, grid)))
        else:
            successive = math.nan
        rows.append({
            "level": k,
            "n_interior": grid.n_interior,
            "dt": result.dt,
            "steps": result.steps,
            "error_vs_finest": vs_finest,
            "successive_difference": successive,
        })
    frame = pd.DataFrame(rows)
    diffs = frame["successive_difference"].to_numpy()[:-1]
    scale = max(1.0, l2_norm(finest))
    exact = bool(np.all(diffs <= EXACT_FLOOR * scale))
    orders = [math.nan]
    for k in range(1, levels):
        if k < levels - 1 and not exact and diffs[k] > 0:
            orders.append(math.log2(diffs[k - 1] / diffs[k]))
        else:
            orders.append(math.nan)
    frame["order"] = orders
    monotone = exact or bool(np.all(np.diff(diffs) < 0))
    if not monotone:
        logger.warning("Non-monotone refinement differences: %s", diffs)
    return ConvergenceTable(frame=frame, exact=exact, monotone=monotone)


@dataclass(frozen=True)
class DependenceReport:
    delta: float
    divergence: float
    ratio: float
    passed: bool


def continuous_dependence(scenario: ScenarioFile, delta: float, base_dir: Path = Path(".")) -> DependenceReport:
    """
    Perturb y0 by delta along sin(pi x / L) and measure sup_t ||y - y~||.

    Qualitative only: the run passes when the divergence stays below sqrt(delta).
    """
    if not delta > 0:
        raise ConfigurationError(f"Perturbation size must be positive, got {delta}")
    config = scenario_to_config(scenario, base_dir)
    grid = config.grid
    direction = np.sin(np.pi * grid.nodes / grid.length)
    direction /= l2_norm(StateField(grid, direction))
    perturbed = StateField(grid, config.initial.values + delta * direction)
    dt = config.dt
    if dt == "auto":
        peak = np.maximum(np.abs(config.initial.values), np.abs(perturbed.values))
        dt = min(stable_dt(peak, grid.h, config.cfl_safety), 0.5 * config.final_time)
    common = {"dt": dt, "snapshot_full": True, "max_retries": 0}
    base = simulate(config.model_copy(update=common))
    other = simulate(config.model_copy(update={**common, "initial": perturbed}))
    gaps = np.sqrt(grid.h * np.sum((base.trajectory.values - other.trajectory.values) ** 2, axis=1))
    divergence = float(np.max(gaps))
    return DependenceReport(delta=delta, divergence=divergence, ratio=divergence / delta,
                            passed=bool(divergence <= math.sqrt(delta)))
