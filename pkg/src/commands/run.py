import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, ConfigDict

from src.core.config import get_settings
from src.kdv.control.envelope import decay_envelope, envelope_check
from src.kdv.control.feedback import LinearFeedback, SaturatedFeedback
from src.kdv.diagnostics.energy import (
    h1_balance_ratio,
    is_energy_monotone,
    max_energy_increase,
    measured_amplification,
    trace_bt_norm,
    trace_regularity_ratio,
)
from src.kdv.errors import PropertyViolation
from src.kdv.grid import l2_norm
from src.kdv.scenario import ScenarioFile, load_scenario, scenario_to_config
from src.kdv.stepper.simulate import simulate
from src.kdv.studies import continuous_dependence
from src.kdv.utils.io import write_energy_csv, write_snapshot_csv, write_text_report

logger = logging.getLogger(__name__)

H1_BALANCE_LIMIT = 1.1


class EnvelopeSummary(BaseModel):
    model_config = ConfigDict(extra="forbid")

    status: str
    rate: float
    slack: float
    worst_margin: float
    first_violation_time: Optional[float] = None
    radius: Optional[float] = None
    switch_time: Optional[float] = None
    amplification: Optional[float] = None
    alpha: Optional[float] = None
    measured_amplification: Optional[float] = None


class RunReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    scenario: Dict[str, object]
    seed: int
    envelope: EnvelopeSummary
    energy_monotone: bool
    max_energy_increase: float
    max_dissipation_residual: float
    h1_balance_ratio: float
    trace_regularity_ratio: float
    bt_norm: float
    continuous_dependence: Optional[Dict[str, float]] = None
    steps: int
    dt: float
    retries: int
    wall_clock_s: float
    files: List[str]
    failures: List[str]

    @property
    def passed(self) -> bool:
        return not self.failures


def _envelope_summary(law, trace, initial_norm: float, slack: float) -> EnvelopeSummary:
    if not isinstance(law, (LinearFeedback, SaturatedFeedback)):
        return EnvelopeSummary(status="inapplicable", rate=0.0, slack=slack, worst_margin=float("nan"))
    radius = initial_norm if initial_norm > 0 else getattr(law, "level", law.gain) / law.gain
    env = decay_envelope(law, radius)
    result = envelope_check(trace, env, slack)
    return EnvelopeSummary(
        status=result.status,
        rate=result.rate,
        slack=slack,
        worst_margin=result.worst_margin,
        first_violation_time=result.first_violation_time,
        radius=env.radius,
        switch_time=env.switch_time,
        amplification=env.amplification,
        alpha=env.alpha,
        measured_amplification=measured_amplification(trace, law.gain),
    )


def run_scenario(scenario: ScenarioFile, out_dir: Path, slack: float = None, seed: int = None,
                 base_dir: Path = Path(".")) -> RunReport:
    """Simulate one scenario, write its CSVs and report, and return the report."""
    settings = get_settings()
    seed = settings.KDV_DEFAULT_SEED if seed is None else seed
    if slack is None:
        slack = scenario.slack if scenario.slack is not None else settings.KDV_ENVELOPE_SLACK
    config = scenario_to_config(scenario, base_dir)
    law = config.law
    result = simulate(config)
    trace = result.trace

    envelope = _envelope_summary(law, trace, l2_norm(config.initial), slack)
    failures = []
    if envelope.status == "fail":
        failures.append(
            f"envelope violated at t={envelope.first_violation_time:.6g} (worst margin {envelope.worst_margin:.3e})"
        )
    monotone = is_energy_monotone(trace, settings.KDV_ENERGY_SLACK)
    if not monotone:
        failures.append("energy is not monotone")
    balance = h1_balance_ratio(trace, config.grid.length)
    if balance > H1_BALANCE_LIMIT:
        failures.append(f"weighted H1 balance ratio {balance:.4f} exceeds {H1_BALANCE_LIMIT}")

    dependence = None
    if scenario.perturbation > 0:
        dep = continuous_dependence(scenario, scenario.perturbation, base_dir)
        dependence = {"delta": dep.delta, "divergence": dep.divergence, "ratio": dep.ratio}
        if not dep.passed:
            failures.append(f"perturbation {dep.delta:g} diverged to {dep.divergence:.3e}")

    out_dir = Path(out_dir)
    mu = envelope.rate
    gain = getattr(law, "gain", 0.0)
    files = [
        write_energy_csv(trace, out_dir / f"{scenario.name}-energy.csv", mu, gain),
        write_snapshot_csv(result.trajectory, out_dir / f"{scenario.name}-snapshots.csv"),
    ]
    report_path = out_dir / f"{scenario.name}-report.txt"
    files.append(report_path)

    residuals = trace.column("dissipation_residual")
    report = RunReport(
        scenario=scenario.model_dump(),
        seed=seed,
        envelope=envelope,
        energy_monotone=monotone,
        max_energy_increase=max_energy_increase(trace),
        max_dissipation_residual=float(abs(residuals).max()),
        h1_balance_ratio=balance,
        trace_regularity_ratio=trace_regularity_ratio(trace),
        bt_norm=trace_bt_norm(trace),
        continuous_dependence=dependence,
        steps=result.steps,
        dt=result.dt,
        retries=result.retries,
        wall_clock_s=result.wall_clock,
        files=[str(f) for f in files],
        failures=failures,
    )
    fields = report.model_dump()
    fields["passed"] = report.passed
    write_text_report(fields, report_path)
    return report


def print_report(report: RunReport):
    env = report.envelope
    print(f"\nScenario: {report.scenario['name']}")
    print(f"Steps: {report.steps} (dt={report.dt:.6g}, retries={report.retries}) in {report.wall_clock_s:.2f}s")
    print(f"Envelope: {env.status} (rate {env.rate:.6g}, worst margin {env.worst_margin:.4g})")
    if env.amplification is not None:
        print(f"Amplification: theoretical {env.amplification:.6g}, measured {env.measured_amplification:.6g}")
    print(f"Max dissipation residual: {report.max_dissipation_residual:.3e}")
    print(f"H1 balance ratio: {report.h1_balance_ratio:.4f}")
    print(f"Trace regularity ratio: {report.trace_regularity_ratio:.4f}")
    print(f"B(T) norm: {report.bt_norm:.6g}")
    print(f"Seed: {report.seed}")
    for path in report.files:
        print(f"  wrote {path}")
    for failure in report.failures:
        print(f"FAILED: {failure}")


def cmd_run(args) -> int:
    settings = get_settings()
    out_dir = Path(args.out or settings.KDV_OUTPUT_DIR)
    scenarios = [(load_scenario(path), Path(path).parent) for path in args.scenario]

    def one(item):
        scenario, base_dir = item
        return run_scenario(scenario, out_dir, slack=args.slack, seed=args.seed, base_dir=base_dir)

    if args.jobs > 1 and len(scenarios) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(one, scenarios))
    else:
        reports = [one(item) for item in scenarios]

    failed = [r for r in reports if not r.passed]
    if not args.quiet:
        for report in reports:
            print_report(report)
    if failed:
        names = ", ".join(r.scenario["name"] for r in failed)
        raise PropertyViolation(f"Certificate checks failed for: {names}", seed=failed[0].seed)
    return 0
