import json
import math
import subprocess
import sys

import numpy as np
import pytest

from logmaj.cli import main
from logmaj.matalg import BlockOperator, mu_op
from logmaj.stepfn import StepFunction


@pytest.fixture
def diag312(tmp_path):
    path = tmp_path / "diag312.json"
    path.write_text(json.dumps(BlockOperator.single(np.diag([3.0, 1.0, 2.0])).to_dict()))
    return str(path)


def test_det_example(diag312, capsys):
    assert main(["det", "--input", diag312, "--t", "3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "lambda 6.0"
    assert float(out[1].split()[1]) == pytest.approx(np.log(6.0), rel=1e-15)


def test_det_default_t_is_tau_one(tmp_path, capsys):
    path = tmp_path / "x.json"
    x = BlockOperator([(2.0, np.array([[3.0]]))])
    path.write_text(json.dumps(x.to_dict()))
    assert main(["det", "--input", str(path)]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "lambda 9.0"


def test_det_singular_prints_minus_inf(tmp_path, capsys):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(BlockOperator.single(np.diag([2.0, 0.0])).to_dict()))
    curve = tmp_path / "c.csv"
    assert main(["det", "--input", str(path), "--curve", str(curve)]) == 0
    assert capsys.readouterr().out.splitlines() == ["lambda 0.0", "log_lambda -inf"]
    # the curve stops at the support; beyond it log Lambda is -inf
    assert curve.read_text().splitlines()[-1] == f"1.0,{math.log(2.0)!r}"


def test_check_reflexive(diag312, capsys):
    for rel in ("submajorize", "logsub", "uniform"):
        assert main(["check", rel, "--lhs", diag312, "--rhs", diag312]) == 0
    assert "holds" in capsys.readouterr().out


def test_check_fails_with_witness(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    a.write_text(json.dumps(StepFunction([(1, 3)]).to_dict()))
    b.write_text(json.dumps(StepFunction([(1, 2)]).to_dict()))
    assert main(["check", "submajorize", "--lhs", str(a), "--rhs", str(b)]) == 1
    out = capsys.readouterr().out
    assert "submajorize fails" in out and "worst_at" in out


def test_gen_gsv_round_trip(tmp_path):
    op, mu = tmp_path / "op.json", tmp_path / "mu.json"
    assert main(["gen", "--kind", "psd", "--dims", "3,2", "--weights", "1,0.5",
                 "--seed", "7", "--out", str(op)]) == 0
    assert main(["gsv", "--input", str(op), "--out", str(mu)]) == 0
    x = BlockOperator.from_dict(json.loads(op.read_text()))
    assert x.dims == (3, 2) and x.weights == (1.0, 0.5)
    assert StepFunction.from_dict(json.loads(mu.read_text())) == mu_op(x)


def test_gen_stepfn(tmp_path):
    out = tmp_path / "f.json"
    assert main(["gen", "--kind", "stepfn", "--pieces", "3", "--seed", "1", "--out", str(out)]) == 0
    assert len(StepFunction.from_dict(json.loads(out.read_text()))) == 3


def test_exit_code_matrix(tmp_path, diag312):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    weird = tmp_path / "weird.json"
    weird.write_text(json.dumps({"neither": 1}))
    f = tmp_path / "f.json"
    f.write_text(json.dumps(StepFunction([(1, 2)]).to_dict()))
    usage = [
        [],
        ["frobnicate"],
        ["det", "--input", diag312, "--bogus"],
        ["det", "--input", str(bad)],
        ["det", "--input", str(weird)],
        ["det", "--input", str(tmp_path / "missing.json")],
        ["det", "--input", str(f)],  # step function needs --t
        ["det", "--input", diag312, "--t", "-1"],
        ["gsv", "--input", str(f)],
        ["check", "uniform", "--lhs", diag312, "--rhs", diag312, "--lambda", "0.5"],
        ["suite", "run", "--suite", "S9", "--cases", "1"],
        ["suite", "run", "--cases", "-1"],
        ["gen", "--kind", "psd", "--dims", "3,x"],
        ["gen", "--kind", "psd", "--dims", "3", "--weights", "1,2"],
    ]
    for argv in usage:
        assert main(argv) == 2, argv
    assert main(["det", "--input", str(f), "--t", "0.5"]) == 0
    assert main(["suite", "run", "--suite", "L7", "--cases", "2"]) == 0


def test_malformed_json_reports_on_stderr(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2")
    assert main(["gsv", "--input", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "malformed JSON" in err


def test_suite_report_files_identical(tmp_path):
    paths = [tmp_path / f"r{i}.json" for i in range(2)]
    for p in paths:
        assert main(["suite", "run", "--suite", "S2", "--cases", "100", "--seed", "42",
                     "--report", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    assert json.loads(paths[0].read_text())["violations"] == []


def test_module_entry_point(diag312):
    proc = subprocess.run([sys.executable, "-m", "logmaj", "det", "--input", diag312, "--t", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("lambda 6.0")
