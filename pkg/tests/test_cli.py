import pandas as pd
import pytest

from src.commands import run as run_command
from src.kdv import saturation
from src.kdv.saturation import SectorGain
from src.kdv.stepper import SemiImplicitStepper
from src.main import main

ENERGY_HEADER = ("t,E,sqrtE,envelope_mu,envelope_a,control_l2,boundary_slope,"
                 "weighted_E,h1_sq,dissipation_residual")


@pytest.fixture
def small_suites(monkeypatch):
    monkeypatch.setenv("KDV_SECTOR_SAMPLES", "200")
    monkeypatch.setenv("KDV_LIPSCHITZ_SAMPLES", "2000")


def test_critical_lists_matching_pairs(capsys):
    assert main(["critical", "2pi"]) == 0
    assert "k=1 l=1" in capsys.readouterr().out


def test_critical_reports_non_critical_lengths(capsys):
    assert main(["critical", "5"]) == 0
    assert "not critical" in capsys.readouterr().out


def test_unreadable_length_exits_with_2(capsys):
    assert main(["critical", "two-pi"]) == 2
    assert "two-pi" in capsys.readouterr().err


def test_run_writes_outputs(tmp_path, scenario_dir, capsys):
    code = main(["run", "--scenario", str(scenario_dir / "zero-profile.scn"), "--out", str(tmp_path)])
    assert code == 0
    energy = tmp_path / "zero-profile-energy.csv"
    assert energy.read_text().splitlines()[0] == ENERGY_HEADER
    snapshots = pd.read_csv(tmp_path / "zero-profile-snapshots.csv")
    assert list(snapshots.columns) == ["t", "x", "y"]
    assert (snapshots["y"] == 0.0).all()
    report = (tmp_path / "zero-profile-report.txt").read_text()
    assert "passed: True" in report
    assert "Envelope: pass" in capsys.readouterr().out


def test_run_output_is_deterministic(tmp_path, scenario_dir):
    scenario = str(scenario_dir / "saturated-small-convergence.scn")
    for name in ("a", "b"):
        assert main(["run", "--scenario", scenario, "--out", str(tmp_path / name), "--quiet"]) == 0
    first = (tmp_path / "a" / "saturated-small-convergence-energy.csv").read_bytes()
    second = (tmp_path / "b" / "saturated-small-convergence-energy.csv").read_bytes()
    assert first == second


def test_run_several_scenarios_concurrently(tmp_path, scenario_dir):
    args = ["run", "--out", str(tmp_path), "--jobs", "2", "--quiet"]
    for name in ("zero-profile.scn", "saturated-small-convergence.scn"):
        args += ["--scenario", str(scenario_dir / name)]
    assert main(args) == 0
    assert (tmp_path / "zero-profile-report.txt").exists()
    assert (tmp_path / "saturated-small-convergence-report.txt").exists()


def test_invalid_scenario_exits_with_2(tmp_path, capsys):
    bad = tmp_path / "bad.scn"
    bad.write_text("name = bad\ncolour = blue\n")
    assert main(["run", "--scenario", str(bad), "--out", str(tmp_path)]) == 2
    assert "error:" in capsys.readouterr().err
    assert main(["run", "--scenario", str(tmp_path / "missing.scn")]) == 2


def test_instability_exits_with_3(tmp_path, scenario_dir, monkeypatch):
    monkeypatch.setattr(SemiImplicitStepper, "advance", lambda self, values: 2.0 * values + 1.0)
    scenario = str(scenario_dir / "saturated-small-convergence.scn")
    assert main(["run", "--scenario", scenario, "--out", str(tmp_path), "--quiet"]) == 3


def test_failed_certificate_exits_with_4(tmp_path, scenario_dir, monkeypatch):
    monkeypatch.setattr(run_command, "h1_balance_ratio", lambda trace, length: 2.0)
    scenario = str(scenario_dir / "zero-profile.scn")
    assert main(["run", "--scenario", scenario, "--out", str(tmp_path), "--quiet"]) == 4
    assert "exceeds" in (tmp_path / "zero-profile-report.txt").read_text()


def test_check_passes_with_seed(small_suites, capsys):
    assert main(["check", "--seed", "3"]) == 0
    out = capsys.readouterr().out
    assert "seed 3" in out
    assert "FAIL" not in out


def test_check_reports_a_reproducer(small_suites, monkeypatch, capsys):
    monkeypatch.setattr(saturation, "sector_gain",
                        lambda a, u_s, r: SectorGain(a, r, max(u_s / (a * r), 1.0)))
    assert main(["check", "--seed", "3"]) == 4
    assert "Reproducer (sector, seed 3)" in capsys.readouterr().out


def test_convergence_marks_exact_levels(tmp_path, scenario_dir):
    code = main(["convergence", "--scenario", str(scenario_dir / "zero-profile.scn"),
                 "--levels", "3", "--out", str(tmp_path), "--quiet"])
    assert code == 0
    frame = pd.read_csv(tmp_path / "zero-profile-convergence.csv")
    assert (frame["order"] == "exact").all()


def test_compare_orders_the_laws(tmp_path, scenario_dir):
    code = main(["compare", "--scenario", str(scenario_dir / "saturated-small-convergence.scn"),
                 "--out", str(tmp_path), "--quiet"])
    assert code == 0
    frame = pd.read_csv(tmp_path / "saturated-small-convergence-compare.csv")
    assert list(frame.columns) == ["t", "E_saturated", "E_linear"]
    assert (frame["E_saturated"] >= frame["E_linear"] - 1e-10).all()


def test_compare_shares_one_step_with_auto_dt(tmp_path):
    path = tmp_path / "auto-compare.scn"
    path.write_text("name = auto-compare\nlength = 2pi\nn_interior = 63\ndt = auto\n"
                    "initial_profile = one-minus-cos\nlaw = saturated\ngain = 1.0\nlevel = 0.5\nfinal_time = 1\n")
    assert main(["compare", "--scenario", str(path), "--out", str(tmp_path), "--quiet"]) == 0
    frame = pd.read_csv(tmp_path / "auto-compare-compare.csv")
    assert frame["t"].iloc[-1] == pytest.approx(1.0)
    assert (frame["E_saturated"] >= frame["E_linear"] - 1e-10).all()
    assert frame["E_saturated"].iloc[-1] > frame["E_linear"].iloc[-1]
