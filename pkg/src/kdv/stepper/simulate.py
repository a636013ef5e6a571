import logging
import time
from dataclasses import dataclass

import numpy as np

from src.kdv.diagnostics.energy import EnergyTrace, dissipation_residual, trace_record
from src.kdv.errors import InstabilityError, NumericalError
from src.kdv.grid import StateField
from src.kdv.operators.linear import build_linear_operator
from src.kdv.scenario import SimConfig
from src.kdv.stepper.semi_implicit import SemiImplicitStepper, stable_dt, steps_for
from src.kdv.stepper.trajectory import Trajectory

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SimulationResult:
    trajectory: Trajectory
    trace: EnergyTrace
    steps: int
    dt: float
    retries: int
    wall_clock: float


def _energy(values: np.ndarray, h: float) -> float:
    return float(h * np.dot(values, values))


def simulate(config: SimConfig) -> SimulationResult:
    """
    Integrate the closed loop up to ``config.final_time``.

    Every step is checked for energy growth beyond the per-step slack. With
    ``dt = auto`` the step is shrunk to the transport limit as the state
    evolves and halved on growth (at most ``max_retries`` times); with a
    fixed step any growth aborts with advice.
    """
    started = time.perf_counter()
    grid, law = config.grid, config.law
    h = grid.h
    operator = build_linear_operator(grid)
    auto = config.dt == "auto"
    final_time = config.final_time

    def make_stepper(dt):
        return SemiImplicitStepper(operator, law, dt, config.nonlinear, config.advection)

    def segment(t_from, dt_target):
        count = steps_for(final_time - t_from, dt_target)
        return count, (final_time - t_from) / count

    y = config.initial.values.copy()
    t = 0.0
    dt_target = stable_dt(y, h, config.cfl_safety) if auto else config.dt
    if not auto and config.dt > stable_dt(y, h, config.cfl_safety):
        logger.warning("dt=%.6g exceeds the transport limit %.6g at t=0",
                       config.dt, stable_dt(y, h, config.cfl_safety))
    remaining, dt = segment(t, dt_target)
    seg_start, seg_index = t, 0
    stepper = make_stepper(dt)
    logger.info("Simulating n=%d, T=%g, dt=%.6g (%s), law=%s",
                grid.n_interior, final_time, dt, "auto" if auto else "fixed", law.name)

    stride = 1 if config.snapshot_full else config.stride
    records = [trace_record(0.0, config.initial, law)]
    snap_times, snap_values = [0.0], [y.copy()]
    steps = retries = 0

    while remaining > 0:
        if auto:
            limit = stable_dt(y, h, config.cfl_safety)
            if dt > limit * (1.0 + 1e-12):
                remaining, dt = segment(t, limit)
                seg_start, seg_index = t, 0
                stepper = make_stepper(dt)
                logger.debug("Transport limit tightened, dt -> %.6g at t=%.6g", dt, t)

        failure = None
        try:
            y_new = stepper.advance(y)
            e_old, e_new = _energy(y, h), _energy(y_new, h)
            if e_new - e_old > config.energy_slack * max(1.0, e_old):
                failure = f"energy grew from {e_old:.17g} to {e_new:.17g} at t={t:.6g}"
        except NumericalError as exc:
            failure = exc.detail

        if failure is not None:
            if auto and retries < config.max_retries:
                retries += 1
                remaining, dt = segment(t, 0.5 * dt)
                seg_start, seg_index = t, 0
                stepper = make_stepper(dt)
                logger.warning("%s; retry %d with dt=%.6g", failure, retries, dt)
                continue
            advice = (f"reduce dt below {0.5 * dt:.6g} or use dt = auto" if not auto
                      else f"gave up after {retries} halvings; refine the grid or lower cfl_safety")
            raise InstabilityError(f"Unstable run: {failure}; {advice}")

        seg_index += 1
        remaining -= 1
        t_new = final_time if remaining == 0 else seg_start + seg_index * dt
        residual = dissipation_residual(StateField(grid, y), StateField(grid, y_new), stepper.dt, law,
                                        stepper.mean_forcing)
        y, t = y_new, t_new
        steps += 1
        records.append(trace_record(t, StateField(grid, y), law, residual))
        if steps % stride == 0 or remaining == 0:
            snap_times.append(t)
            snap_values.append(y.copy())

    trajectory = Trajectory(grid, np.array(snap_times), np.array(snap_values), {
        "law": law.name,
        "dt": dt,
        "nonlinear": config.nonlinear,
        "advection": config.advection,
    })
    elapsed = time.perf_counter() - started
    logger.info("Finished %d steps in %.3fs (%d retries)", steps, elapsed, retries)
    return SimulationResult(trajectory=trajectory, trace=EnergyTrace.from_records(records),
                            steps=steps, dt=dt, retries=retries, wall_clock=elapsed)
