"""Closed-loop checks at the reference resolution (L = 2pi, n = 256, T = 6)."""
import math

import numpy as np
import pytest

from src.commands.compare import compare_laws
from src.commands.run import run_scenario
from src.core.config import get_settings
from src.kdv.control import decay_envelope, envelope_check
from src.kdv.diagnostics import h1_balance_ratio, is_energy_monotone
from src.kdv.grid import l2_norm
from src.kdv.scenario import load_scenario, scenario_to_config
from src.kdv.stepper import simulate

pytestmark = pytest.mark.slow


def _run(path):
    config = scenario_to_config(load_scenario(path), path.parent)
    return config, simulate(config)


def test_saturated_feedback_decays_within_its_envelope(scenario_dir):
    config, result = _run(scenario_dir / "saturated-one-minus-cos.scn")
    r = l2_norm(config.initial)
    assert r == pytest.approx(math.sqrt(3 * math.pi), rel=1e-12)
    env = decay_envelope(config.law, r)
    assert env.mu == pytest.approx(0.16287, rel=1e-4)
    report = envelope_check(result.trace, env, slack=0.02)
    assert report.passed, report
    assert result.trace.times[-1] == 6.0
    assert np.all(result.trace.column("control_l2") <= 0.5 * (1 + 1e-12))
    assert is_energy_monotone(result.trace, get_settings().KDV_ENERGY_SLACK)
    assert h1_balance_ratio(result.trace, config.grid.length) <= 1.1
    assert np.max(np.abs(result.trace.column("dissipation_residual"))) <= 1e-6


def test_linear_feedback_decays_at_rate_a(scenario_dir):
    config, result = _run(scenario_dir / "linear-one-minus-cos.scn")
    env = decay_envelope(config.law, l2_norm(config.initial))
    assert env.mu == 1.0
    assert envelope_check(result.trace, env, slack=0.02).passed


def test_saturation_only_slows_the_decay(scenario_dir):
    scenario = load_scenario(scenario_dir / "saturated-one-minus-cos.scn")
    comparison = compare_laws(scenario, scenario_dir)
    assert comparison.passed
    assert comparison.worst_gap >= -1e-10


def _drift(scenario, n):
    config = scenario_to_config(scenario.model_copy(update={"n_interior": n}))
    energy = simulate(config).trace.energy
    return abs(energy[-1] / energy[0] - 1.0)


def test_stationary_profile_keeps_its_energy(scenario_dir):
    scenario = load_scenario(scenario_dir / "stationary-linear.scn")
    fine = _drift(scenario, 256)
    assert fine <= 1e-3
    assert _drift(scenario, 128) >= 2.5 * fine


def test_small_states_see_the_unsaturated_rate(scenario_dir):
    config, result = _run(scenario_dir / "saturated-small-convergence.scn")
    env = decay_envelope(config.law, l2_norm(config.initial))
    assert env.mu == 1.0
    assert envelope_check(result.trace, env, slack=0.02).passed


def test_end_to_end_report(tmp_path, scenario_dir):
    path = scenario_dir / "saturated-one-minus-cos.scn"
    report = run_scenario(load_scenario(path), tmp_path, base_dir=path.parent)
    assert report.passed, report.failures
    assert report.envelope.status == "pass"
    assert report.envelope.amplification == pytest.approx(math.exp(report.envelope.switch_time))
    assert report.envelope.measured_amplification <= report.envelope.amplification
    assert len(report.files) == 3
