import math

import numpy as np
import pytest

from src.kdv.errors import ConfigurationError
from src.kdv.grid import SpatialGrid
from src.kdv.scenario import load_scenario
from src.kdv.studies import continuous_dependence, convergence_study, restrict


def test_restrict_samples_coarse_nodes():
    fine, coarse = SpatialGrid(1.0, 15), SpatialGrid(1.0, 7)
    np.testing.assert_allclose(restrict(fine.nodes, fine, coarse), coarse.nodes)
    with pytest.raises(ConfigurationError):
        restrict(np.zeros(16), SpatialGrid(1.0, 16), coarse)


def test_convergence_needs_three_levels(scenario_dir):
    scenario = load_scenario(scenario_dir / "linear-decay-convergence.scn")
    with pytest.raises(ConfigurationError):
        convergence_study(scenario, 2)


def test_convergence_of_linear_feedback_run(scenario_dir):
    scenario = load_scenario(scenario_dir / "linear-decay-convergence.scn")
    table = convergence_study(scenario, 4, base_dir=scenario_dir)
    assert table.monotone
    assert not table.exact
    assert list(table.frame["n_interior"]) == [31, 63, 127, 255]
    np.testing.assert_allclose(table.frame["dt"], [0.02, 0.01, 0.005, 0.0025])
    assert np.all((table.orders >= 1.8) & (table.orders <= 2.2))


def test_convergence_runs_concurrently(scenario_dir):
    scenario = load_scenario(scenario_dir / "saturated-small-convergence.scn")
    serial = convergence_study(scenario, 3, base_dir=scenario_dir)
    threaded = convergence_study(scenario, 3, jobs=3, base_dir=scenario_dir)
    np.testing.assert_allclose(serial.frame["successive_difference"], threaded.frame["successive_difference"], rtol=1e-12)


def test_zero_profile_is_exact_at_every_level(scenario_dir):
    scenario = load_scenario(scenario_dir / "zero-profile.scn")
    table = convergence_study(scenario, 3, base_dir=scenario_dir)
    assert table.exact
    assert table.monotone
    assert math.isnan(table.observed_order)


def test_continuous_dependence_on_initial_data(scenario_dir):
    scenario = load_scenario(scenario_dir / "saturated-small-convergence.scn")
    report = continuous_dependence(scenario, 1e-3, base_dir=scenario_dir)
    assert report.passed
    assert report.divergence <= math.sqrt(1e-3)
    assert report.ratio == pytest.approx(report.divergence / 1e-3)
    with pytest.raises(ConfigurationError):
        continuous_dependence(scenario, 0.0)
