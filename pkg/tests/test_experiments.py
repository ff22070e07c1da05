import json
import subprocess
import sys
from fractions import Fraction

import pytest

from robust_cpac.cli import main
from robust_cpac.experiments import (
    ConfigError, ExperimentConfig, default_nfl_pairs, default_twohalt_pairs, demo_ex1, demo_thm2,
    demo_thm3_twohalt, demo_thm4, demo_thm5_halting, dims, run_nfl, zoo_list,
)
from robust_cpac.report import fraction_from_json

SMALL = (0, 5, 16, 21, 26)


def test_config_validation():
    for bad in ({"step_budget": 0}, {"domain_window": -1}, {"workers": 0}, {"zoo": (32,)}, {"learner": "x"},
                {"M": -1}, {"m": 0}):
        with pytest.raises(ConfigError):
            ExperimentConfig(**bad)


def test_env_overrides(monkeypatch):
    monkeypatch.setenv("ROBUST_CPAC_STEP_BUDGET", "77")
    assert ExperimentConfig.from_env().step_budget == 77
    assert ExperimentConfig.from_env(step_budget=5).step_budget == 5
    monkeypatch.setenv("ROBUST_CPAC_ENUM_BUDGET", "lots")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_env()


def test_zero_sample_size_is_flagged_invalid():
    report = demo_thm2(ExperimentConfig(M=0))
    assert not report.valid and not report.passed and report.rows == []


def test_empty_zoo_selection_gives_empty_report():
    report = demo_ex1(ExperimentConfig(zoo=()))
    assert report.rows == [] and report.summary["instances"] == 0


@pytest.mark.parametrize("demo", [demo_thm2, demo_thm5_halting, demo_ex1, demo_thm4])
def test_demos_agree_with_zoo_truth(demo):
    report = demo(ExperimentConfig(zoo=SMALL))
    assert report.passed
    assert [r["machine"] for r in report.rows] == list(SMALL)
    assert [r["ground_truth"] for r in report.rows] == [0, 0, 1, 1, 1]


def test_thm3_marks_unconstrained_cases():
    report = demo_thm3_twohalt(ExperimentConfig(pairs=((0, 16), (17, 1), (2, 3), (18, 19))))
    assert [r["constrained"] for r in report.rows] == [True, True, False, False]
    assert report.summary["instances"] == 2 and report.passed
    assert [r["decoded"] for r in report.rows[:2]] == [2, 1]
    with pytest.raises(ConfigError):
        demo_thm3_twohalt(ExperimentConfig(pairs=((4, 4),)))
    assert len(default_twohalt_pairs()) == 18


def test_thm4_bounded_evaluation_stays_unknown():
    report = demo_thm4(ExperimentConfig(zoo=(3, 17), enum_budget=500))
    loop, halt = report.rows
    assert loop["bounded_loss_general_member"].value == "UnknownWithinBudget"
    assert halt["bounded_loss_general_member"].value == 1
    assert all(r["bounded_risk_of_output"].value == "UnknownWithinBudget" for r in report.rows)
    assert all(r["rerm_risk"] == r["window_min_risk"] for r in report.rows)


def test_thm5_budget_exhaustion_reads_as_looping():
    report = demo_thm5_halting(ExperimentConfig(zoo=(2, 18), enum_budget=1000))
    assert [r["decision"] for r in report.rows] == ["loops (budget exhausted)", "halts"]


def test_nfl_report():
    report = run_nfl(ExperimentConfig(m=1, learner="const0"))
    assert report.passed
    cert = report.certificates[0]
    assert cert.witnessed_bound == Fraction(1, 2)
    with pytest.raises(ConfigError):
        run_nfl(ExperimentConfig(pairs=((98, 100),)))
    with pytest.raises(ConfigError):
        default_nfl_pairs(9)


def test_dims_report_small():
    report = dims(ExperimentConfig(domain_window=1, param_window=1, robust_window=1), ["thm2", "thm5"])
    assert all(r["vc"] <= 1 and r["margin_vc"] <= 1 for r in report.rows)


def test_reports_are_deterministic_across_workers():
    a = demo_ex1(ExperimentConfig(zoo=SMALL)).to_json()
    b = demo_ex1(ExperimentConfig(zoo=SMALL, workers=2)).to_json()
    assert a == b
    assert "time" not in a


def test_json_payload_shape():
    data = json.loads(demo_thm2(ExperimentConfig(zoo=(16,))).to_json())
    assert data["experiment"] == "demo-thm2"
    assert fraction_from_json(data["summary"]["accuracy"]) == 1
    assert fraction_from_json(data["summary"]["epsilon"]) == Fraction(1, 7)


def test_zoo_list():
    report = zoo_list()
    assert len(report.rows) == 32 and report.summary["halting"] == 16
    assert report.rows[16]["behaviour"] == "HaltsAt(1,7)"


def test_cli_exit_codes(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["demo", "ex1", "--zoo", "16,3", "--format", "csv", "--output", str(out)]) == 0
    assert out.read_text().startswith("accuracy,agree,")
    assert main(["demo", "thm2", "-M", "0"]) == 1
    assert main(["demo", "thm2", "--step-budget", "0"]) == 2
    assert main(["nfl", "--learner", "const1", "-m", "1"]) == 0
    assert main(["nfl", "--pairs", "98,100;104,106", "-m", "1"]) == 0
    assert main(["zoo", "list", "--format", "csv"]) == 0
    assert main(["dims", "--bundle", "thm2"]) == 0
    capsys.readouterr()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "robust_cpac", "zoo", "list"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["summary"]["machines"] == 32


def test_thm5_member_budget_counts_codes():
    # the first robustly consistent member for machine 18 is h_{18,6}, code pair(18, 6) = 306
    assert demo_thm5_halting(ExperimentConfig(zoo=(18,), enum_budget=306)).rows[0]["decision"] != "halts"
    assert demo_thm5_halting(ExperimentConfig(zoo=(18,), enum_budget=307)).rows[0]["output_params"] == (18, 6)
