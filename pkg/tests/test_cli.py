import json
import shutil
import subprocess
import sys

import pytest

from ccrflow import cli, suites
from ccrflow.config import default_config, load_config, parse_config
from ccrflow.errors import ConfigError


def write(tmp_path, text, name="cfg.toml"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def strip_runtimes(report):
    out = {k: v for k, v in report.items() if k != "runtime_ms"}
    out["checks"] = [{k: v for k, v in c.items() if k != "runtime_ms"} for c in report["checks"]]
    return out


def test_defaults_fill_every_block():
    cfg = default_config()
    assert cfg["seed"] == 0 and cfg["tolerance_scale"] == 1.0
    assert cfg["twisted"]["lambda"] == [1.0, 2.0]
    assert cfg["cocycle"]["A"] == "scalar:0.5"


@pytest.mark.parametrize(
    "data",
    [{"bogus": 1}, {"weyl": {"modes": "two"}}, {"seed": -1}, {"seed": True}, {"tolerance_scale": 0},
     {"cocycle": {"mode": "sideways"}}, {"twisted": {"lambda": [1, 2], "mu": [1]}}, {"suite": "nope"},
     {"weyl": 3}, {"tolerances": {"weyl.unitarity": "small"}}],
)
def test_invalid_configs(data):
    with pytest.raises(ConfigError):
        parse_config(data)


def test_load_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.toml")
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "seed = = 3"))


def test_weyl_defaults_pass(capsys):
    assert cli.main(["weyl"]) == 0
    out = capsys.readouterr()
    report = json.loads(out.out)
    assert report["suite"] == "weyl" and report["status"] == "pass"
    assert list(report) == ["suite", "seed", "tolerance_scale", "status", "checks", "runtime_ms"]
    assert list(report["checks"][0]) == ["name", "status", "residual", "tolerance", "relation", "runtime_ms"]
    assert "PASS" in out.err


def test_units_expectation_declared(tmp_path, capsys):
    path = write(tmp_path, 'suite = "units"\n[twisted]\nlambda = [1.0, 2.0]\nmu = [1.0, 1.0]\nexpect_unit = false\n')
    assert cli.main(["units", "--config", path]) == 0
    report = json.loads(capsys.readouterr().out)
    rec = {c["name"]: c for c in report["checks"]}
    assert rec["units.existence"]["status"] == "pass"
    assert rec["units.scan"]["residual"] >= 0.01


def test_wrong_expectation_fails(tmp_path, capsys):
    path = write(tmp_path, '[twisted]\nexpect_unit = true\n')
    assert cli.main(["units", "--config", path]) == 1
    report = json.loads(capsys.readouterr().out)
    assert report["status"] == "fail"
    # isolation: the later checks still ran
    assert [c["name"] for c in report["checks"]][-1] == "units.invariant"


def test_malformed_config_exit_2_no_body(tmp_path, capsys):
    path = write(tmp_path, "unknown_key = 1\n")
    assert cli.main(["weyl", "--config", path]) == 2
    out = capsys.readouterr()
    assert out.out == "" and "unknown key" in out.err


def test_suite_mismatch_is_config_error(tmp_path, capsys):
    path = write(tmp_path, 'suite = "cone"\n')
    assert cli.main(["weyl", "--config", path]) == 2


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["nonsense"])
    assert exc.value.code == 2


def test_out_path_and_determinism(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["cocycle", "--seed", "11", "--out", str(a)]) == 0
    assert cli.main(["cocycle", "--seed", "11", "--out", str(b)]) == 0
    assert capsys.readouterr().out == ""
    ra, rb = json.loads(a.read_text()), json.loads(b.read_text())
    assert ra["seed"] == 11
    assert strip_runtimes(ra) == strip_runtimes(rb)


def test_tolerance_scale_and_overrides(tmp_path, capsys):
    path = write(tmp_path, '[tolerances]\n"weyl.unitarity" = 0.0\n')
    assert cli.main(["weyl", "--config", path]) == 1
    capsys.readouterr()
    report = suites.run_suite("weyl", {**default_config(), "tolerance_scale": 10.0})
    rec = {c["name"]: c for c in report["checks"]}
    assert rec["weyl.truncated_oracle"]["tolerance"] == pytest.approx(1e-7)


def test_error_in_check_is_isolated(monkeypatch):
    def broken(cfg, rng):
        def boom():
            raise RuntimeError("kaput")
        yield "x.first", boom
        yield "x.second", lambda: suites.boolean(True)

    monkeypatch.setitem(suites.SUITE_CHECKS, "cone", broken)
    report = suites.run_suite("cone")
    assert [c["status"] for c in report["checks"]] == ["error", "pass"]
    assert "kaput" in report["checks"][0]["detail"]
    assert report["status"] == "fail"


def test_passes_helper():
    assert suites._passes(suites.Outcome(-2e-10, -1e-10, ">="), 10.0) == (True, pytest.approx(-1e-9))
    assert suites._passes(suites.Outcome(0.5, 0.01, ">=", False), 100.0) == (True, 0.01)


@pytest.mark.skipif(shutil.which("ccrflow-lab") is None, reason="console script not installed")
def test_console_script(tmp_path):
    proc = subprocess.run(["ccrflow-lab", "prime", "--out", str(tmp_path / "r.json")], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert json.loads((tmp_path / "r.json").read_text())["status"] == "pass"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ccrflow.cli", "cone"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["suite"] == "cone"
