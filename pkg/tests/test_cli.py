import json
import subprocess
import sys

import pytest

from holodfs import cli
from holodfs.core import NumericalError


def run(args, tmp_path, capsys, env_root=None, monkeypatch=None):
    if env_root is not None:
        monkeypatch.setenv(cli.ENV_OUTPUT_ROOT, str(env_root))
    code = cli.main(args)
    return code, capsys.readouterr()


def test_holonomy_phase_integral(tmp_path, capsys):
    code, out = run(["holonomy", "--family", "u1", "--theta0", "1.0472", "--samples", "4096",
                     "--out", str(tmp_path), "--name", "h"], tmp_path, capsys)
    assert code == 0
    doc = json.loads((tmp_path / "h" / "summary.json").read_text())
    assert doc["runs"][0]["phase_integral"] == pytest.approx(3 * 3.141592653589793 / 4, abs=1e-4)
    assert doc["config"]["schedule"]["theta0"] == 1.0472
    assert doc["schema_version"] == 1


def test_synthesize_hadamard(tmp_path, capsys):
    code, _ = run(["synthesize", "--target-su2", "hadamard", "--out", str(tmp_path), "--name", "s"], tmp_path, capsys)
    assert code == 0
    run0 = json.loads((tmp_path / "s" / "summary.json").read_text())["runs"][0]
    assert run0["fidelity"] > 1 - 1e-9
    assert len(run0["sequence"]) == 3
    assert run0["controlled_phase"]["loop"]["theta0"] == pytest.approx(3.141592653589793 / 4)


def test_adiabatic_csv_rows(tmp_path, capsys):
    code, _ = run(["adiabatic", "--family", "u3", "--total-time", "60", "--timing", "proportional",
                   "--trajectory-samples", "31", "--out", str(tmp_path), "--name", "a"], tmp_path, capsys)
    assert code == 0
    doc = json.loads((tmp_path / "a" / "summary.json").read_text())
    lines = (tmp_path / "a" / "T60" / "trajectory.csv").read_text().splitlines()
    assert lines[0] == "t,pop_00,pop_01,pop_10,pop_11,pop_EE,pop_AA,leakage"
    assert len(lines) == doc["runs"][0]["trajectory_rows"] + 1


def test_env_root_and_flag_override(tmp_path, capsys, monkeypatch):
    env_root, flag_root = tmp_path / "env", tmp_path / "flag"
    code, _ = run(["synthesize", "--name", "x"], tmp_path, capsys, env_root, monkeypatch)
    assert code == 0 and (env_root / "x" / "summary.json").exists()
    code, _ = run(["synthesize", "--name", "x", "--out", str(flag_root)], tmp_path, capsys, env_root, monkeypatch)
    assert code == 0 and (flag_root / "x" / "summary.json").exists()


def test_default_name_is_config_digest(tmp_path, capsys):
    cli.main(["synthesize", "--out", str(tmp_path)])
    cli.main(["synthesize", "--out", str(tmp_path)])
    cli.main(["synthesize", "--target-su2", "x", "--out", str(tmp_path)])
    names = sorted(p.name for p in tmp_path.iterdir())
    assert len(names) == 2 and all(n.startswith("synthesize-") for n in names)


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[schedule]\nfamily = u2\ntheta0 = 0.5\n")
    code, _ = run(["holonomy", "--config", str(cfg), "--theta0", "0.7", "--out", str(tmp_path), "--name", "p"],
                  tmp_path, capsys)
    assert code == 0
    doc = json.loads((tmp_path / "p" / "summary.json").read_text())
    assert doc["config"]["schedule"]["family"] == "u2"
    assert doc["config"]["schedule"]["theta0"] == 0.7


@pytest.mark.parametrize(
    "args",
    [
        ["holonomy", "--theta0", "3.0"],
        ["adiabatic", "--family", "u9"],
        ["adiabatic", "--total-time", "5"],
        ["synthesize", "--target-su2", "toffoli"],
        ["noise", "--kind", "loud"],
        ["holonomy", "--bogus"],
        ["adiabatic", "--initial", "Q"],
    ],
)
def test_validation_errors_exit_2_and_write_nothing(tmp_path, capsys, args):
    code, out = run(args + ["--out", str(tmp_path / "root")], tmp_path, capsys)
    assert code == 2
    rec = json.loads(out.err.strip().splitlines()[-1])
    assert rec["error"]["exit_code"] == 2 and rec["error"]["type"] == "ValidationError"
    assert not (tmp_path / "root").exists()


def test_missing_config_file(tmp_path, capsys):
    code, _ = run(["holonomy", "--config", str(tmp_path / "nope.ini"), "--out", str(tmp_path / "r")], tmp_path, capsys)
    assert code == 2 and not (tmp_path / "r").exists()


def test_numerical_error_exit_3(tmp_path, capsys, monkeypatch):
    def boom(cfg):
        raise NumericalError("propagator not unitary")

    monkeypatch.setitem(cli.RUNNERS, "holonomy", boom)
    code, out = run(["holonomy", "--out", str(tmp_path / "r")], tmp_path, capsys)
    assert code == 3
    assert json.loads(out.err)["error"]["type"] == "NumericalError"
    assert not (tmp_path / "r").exists()


def test_report_indexes_runs(tmp_path, capsys):
    code, _ = run(["report", "--out", str(tmp_path)], tmp_path, capsys)
    assert code == 0
    assert json.loads((tmp_path / "report" / "summary.json").read_text())["runs"] == []
    cli.main(["synthesize", "--out", str(tmp_path), "--name", "s"])
    cli.main(["report", "--out", str(tmp_path)])
    runs = json.loads((tmp_path / "report" / "summary.json").read_text())["runs"]
    assert [r["command"] for r in runs] == ["synthesize"]


def test_noise_and_validate_eff_commands(tmp_path, capsys):
    code, _ = run(["noise", "--family", "u2", "--total-time", "60", "--timing", "proportional", "--kind",
                   "phase_kicks", "--strength", "0.3", "--kick-count", "100", "--realizations", "4",
                   "--out", str(tmp_path), "--name", "n"], tmp_path, capsys)
    assert code == 0
    runs = json.loads((tmp_path / "n" / "summary.json").read_text())["runs"]
    assert runs[0]["transient_exposure"] == 0.0
    assert runs[1]["key"] == "memory" and runs[1]["encoded_plus_fidelity"] == pytest.approx(1.0, abs=1e-12)
    code, _ = run(["validate-eff", "--periods", "3", "--steps-per-period", "64", "--out", str(tmp_path), "--name", "v"],
                  tmp_path, capsys)
    assert code == 0
    assert (tmp_path / "v" / "trajectory.csv").read_text().startswith("t,pop_10,pop_ee,pop_phonon\n")


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "holodfs", "synthesize", "--out", str(tmp_path), "--name", "m"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert (tmp_path / "m" / "summary.json").exists()
