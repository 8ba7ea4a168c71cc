import json
import math

import numpy as np
import pytest

from rotsurf.cli import dumps, format_float, run
from rotsurf.profile_curves import curve_to_dict, tabulate


def _write(tmp_path, name, doc):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


SURFACES = {
    "elliptic": {"kind": "elliptic", "curve": {"family": "elliptic_thm2_i",
                                               "params": {"delta1": 2, "delta3": 1}, "s_domain": [0, 1]}},
    "hyperbolic": {"kind": "hyperbolic", "curve": {"family": "hyperbolic_thm5_ii",
                                                   "params": {"lambda1": math.sqrt(2), "lambda2": 1, "lambda3": 2},
                                                   "s_domain": [0, 1]}},
    "parabolic": {"kind": "parabolic", "curve": {"family": "parabolic_thm7",
                                                 "params": {"mu1": 1, "mu2": 1}, "s_domain": [0, 1]}},
}


def test_classify_first_kind(tmp_path, capsys):
    spec = _write(tmp_path, "s.json", SURFACES["elliptic"])
    assert run(["classify", "--spec", spec]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["verdict"] == "first_kind"
    assert all(f == pytest.approx(3.0) for _, f in doc["f_samples"])


def test_verify_T7(tmp_path, capsys):
    spec = _write(tmp_path, "p.json", {"mu1": 1, "mu2": 1, "mu4": 0, "epsilon": 1})
    assert run(["verify", "--theorem", "T7", "--spec", spec]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_verify_param_flags(capsys):
    assert run(["verify", "--theorem", "t5", "--param", "delta1=1", "--param", "delta2=1"]) == 0


def test_verify_invalid_params_exit_1(capsys):
    assert run(["verify", "--theorem", "T1", "--param", "delta1=2"]) == 1
    assert "error" in capsys.readouterr().err


def test_check_curve_unit_speed_violation(tmp_path, capsys):
    curve = tabulate(lambda s: (1.1 * s, 0.0, 1.0, 0.0), (0, 1), 21, kind="elliptic")
    spec = _write(tmp_path, "c.json", curve_to_dict(curve))
    assert run(["check-curve", "--spec", spec]) == 1
    out, err = capsys.readouterr()
    assert "$.samples" in err
    assert json.loads(out)["max_residual"] == pytest.approx(0.21)


def test_check_curve_ok(tmp_path, capsys):
    spec = _write(tmp_path, "c.json", SURFACES["parabolic"])
    assert run(["check-curve", "--spec", spec]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_input_error_reports_json_path(tmp_path, capsys):
    bad = json.loads(json.dumps(SURFACES["elliptic"]))
    bad["curve"]["params"]["delta1"] = "two"
    spec = _write(tmp_path, "bad.json", bad)
    assert run(["classify", "--spec", spec]) == 1
    assert "$.curve.params.delta1" in capsys.readouterr().err


def test_missing_file_and_bad_json(tmp_path, capsys):
    assert run(["invariants", "--spec", str(tmp_path / "nope.json")]) == 1
    path = tmp_path / "broken.json"
    path.write_text("{")
    assert run(["invariants", "--spec", str(path)]) == 1
    assert run(["classify", "--spec", _write(tmp_path, "s.json", SURFACES["elliptic"]), "--s-count", "2"]) == 1


@pytest.mark.parametrize("kind", sorted(SURFACES))
@pytest.mark.parametrize("command", ["check-curve", "invariants", "sweep", "classify", "oracle-compare"])
def test_every_command_every_kind(tmp_path, kind, command, capsys):
    spec = _write(tmp_path, "s.json", SURFACES[kind])
    assert run([command, "--spec", spec, "--s-count", "5", "--t-count", "2"]) == 0
    json.loads(capsys.readouterr().out)


def test_sweep_csv_columns(tmp_path, capsys):
    spec = _write(tmp_path, "s.json", SURFACES["hyperbolic"])
    assert run(["sweep", "--spec", spec, "--s-count", "3", "--t-count", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "t,s,L,M,N,K,H2,dG12,dG13,dG14,dG23,dG24,dG34"
    assert len(lines) == 7


def test_deterministic_output(tmp_path, monkeypatch):
    spec = _write(tmp_path, "s.json", SURFACES["elliptic"])
    outputs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("ROTSURF_THREADS", threads)
        out = tmp_path / f"o{threads}.json"
        assert run(["sweep", "--spec", spec, "--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_bad_thread_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("ROTSURF_THREADS", "zero")
    spec = _write(tmp_path, "s.json", SURFACES["elliptic"])
    assert run(["sweep", "--spec", spec]) == 1
    assert "ROTSURF_THREADS" in capsys.readouterr().err


def test_oracle_compare_failure_exit_2(tmp_path):
    spec = _write(tmp_path, "s.json", SURFACES["hyperbolic"])
    assert run(["oracle-compare", "--spec", spec, "--tol", "1e-15", "--s-count", "3"]) == 2


def test_float_formatting():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(-0.0) == "0"
    assert format_float(float("nan")) == "null"
    assert dumps({"b": [1.0, 2], "a": None}) == '{\n  "b": [1, 2],\n  "a": null\n}\n'


def test_help_documents_csv(capsys):
    with pytest.raises(SystemExit):
        run(["sweep", "--help"])
    assert "dG12" in capsys.readouterr().out
