import json
import subprocess
import sys

import pytest

from afqkit import cli


def run_main(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = cli.main([*argv, "--out", str(out)])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_passing_task(tmp_path):
    code, doc = run_main(tmp_path, "verify-ybe", "--n", "2")
    assert code == 0
    assert doc["schema"] == 1 and doc["status"] == "pass" and doc["task"] == "verify-ybe"
    assert doc["params"]["n"] == 2 and doc["counterexample"] is None


def test_failing_task_reports_counterexample(tmp_path):
    code, doc = run_main(tmp_path, "verify-casimir", "--degree", "2")
    assert code == 1
    assert doc["status"] == "fail" and doc["counterexample"]["check"]


def test_unknown_task_is_usage_error(capsys):
    assert cli.main(["verify-nothing"]) == 2
    assert "unknown task" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [["verify-ybe", "--q", "2"], ["verify-ybe", "--n", "1"],
                                  ["verify-ybe", "--terms", "0"], ["verify-ybe", "--q", "x"],
                                  ["verify-ybe", "--bogus"]])
def test_bad_parameters(argv):
    assert cli.main(argv) == 2


def test_report_is_deterministic_apart_from_timing(tmp_path):
    _, a = run_main(tmp_path, "verify-structure", "--n", "2", "--order", "4", "--dump")
    _, b = run_main(tmp_path, "verify-structure", "--n", "2", "--order", "4", "--dump")
    a.pop("elapsed_ms"), b.pop("elapsed_ms")
    assert a == b and "F_bar" in json.dumps(a["details"])


def test_dump_flag_controls_details(tmp_path):
    _, doc = run_main(tmp_path, "verify-ybe", "--n", "2")
    assert doc["details"] == {}


def test_exchange_summary(tmp_path):
    code, doc = run_main(tmp_path, "verify-exchange")
    assert code == 0
    assert doc["summary"]["worst_residual_over_bound"] <= 1


def test_empty_config_passes(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tasks": []}))
    code, doc = run_main(tmp_path, "suite", "--config", str(cfg))
    assert code == 0 and doc["status"] == "pass" and doc["reports"] == []


def test_suite_with_negative_control_fails(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tasks": [
        {"task": "verify-ybe", "params": {"n": 2}},
        {"task": "verify-casimir", "params": {"degree": 2}},
    ]}))
    code, doc = run_main(tmp_path, "suite", "--config", str(cfg))
    assert code == 1 and doc["status"] == "fail"
    assert [r["status"] for r in doc["reports"]] == ["pass", "fail"]


def test_suite_rejects_unknown_task_in_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tasks": [{"task": "nope"}]}))
    assert cli.main(["suite", "--config", str(cfg)]) == 2


def test_suite_parallel_matches_serial():
    cfg = [("verify-ybe", {"n": 2}), ("characters", {"degree": 2})]
    a = cli.suite(cfg, workers=1)
    b = cli.suite(cfg, workers=2)
    strip = lambda d: [{k: v for k, v in r.items() if k != "elapsed_ms"} for r in d["reports"]]
    assert strip(a) == strip(b)


def test_run_turns_exceptions_into_error_status():
    rep = cli.run("verify-correspondence", cli.Params(n=2))
    assert rep.status == "error" and "ValueError" in rep.counterexample["error"]


def test_every_task_is_in_default_suite():
    assert {t for t, _ in cli.DEFAULT_SUITE} == set(cli.TASKS)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "afqkit", "verify-unitarity", "--n", "2"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "pass"
