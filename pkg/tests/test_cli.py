from __future__ import annotations

import json
import subprocess
import sys

import pytest

from glab.cli import main
from glab.corpus import data_path
from glab.io import dumps, load_function, load_groupoid, load_net

D = data_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


COMMANDS = [
    ("validate", D("r2.json")),
    ("norm", D("r2.json"), D("r2_f.json")),
    ("cbnorm", D("r2.json"), D("r2_h_units.json")),
    ("fejer", D("r2.json"), D("r2_net.json")),
    ("innerexact", D("z2_z3.json")),
    ("galois", D("r2.json"), "--trials", 16, "--seed", 7),
    ("bimodule", D("z2_swap.action.json"), "--trials", 8),
    ("transform", D("s3_points.action.json")),
    ("decompose", D("r2.json"), D("r2_f.json")),
    ("census", D("r2.json")),
]


def test_validate_r2(capsys):
    code, out, _ = run(capsys, "validate", D("r2.json"))
    assert code == 0 and json.loads(out)["pass"]


def test_galois_r2_seed7(capsys):
    code, out, _ = run(capsys, "galois", D("r2.json"), "--trials", 64, "--seed", 7)
    rep = json.loads(out)
    assert code == 0 and rep["pass"]
    census = rep["instances"][-1]
    assert census["census"] and len(census["subgroupoids"]) == 2


def test_cbnorm_of_one_prints_twelve_digits(capsys):
    code, out, _ = run(capsys, "cbnorm", D("r2.json"), D("r2_h_one.json"))
    assert code == 0
    assert '"value": 1.000000000000' in out


@pytest.mark.parametrize("argv", COMMANDS, ids=[c[0] for c in COMMANDS])
def test_reports_are_deterministic_and_round_trip(capsys, tmp_path, argv):
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    path = tmp_path / "report.json"
    path.write_text(out1)
    code, out, _ = run(capsys, "--check-report", path)
    assert code == 0, out
    rep = json.loads(out1)
    assert rep["command"] == argv[0] and isinstance(rep["pass"], bool)


def test_check_report_rejects_edited_report(capsys, tmp_path):
    _, out, _ = run(capsys, "validate", D("r2.json"))
    path = tmp_path / "r.json"
    path.write_text(out.replace('"pass": true', '"pass":  true'))
    assert run(capsys, "--check-report", path)[0] == 2
    path.write_text("{not json")
    assert run(capsys, "--check-report", path)[0] == 2


def test_summary_goes_to_stderr(capsys):
    code, out, err = run(capsys, "--summary", "norm", D("r2.json"), D("r2_f.json"))
    assert code == 0 and "reduced norm 2.260198062784" in err
    json.loads(out)


def test_malformed_groupoid_exit_2(capsys, tmp_path):
    raw = json.loads(D("z2.json").read_text())
    raw["compose"] = [c for c in raw["compose"] if c[:2] != ["a", "a"]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(raw))
    code, out, _ = run(capsys, "validate", bad)
    assert code == 2
    assert any("missing composite" in v for v in json.loads(out)["violations"])


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "validate", tmp_path / "nope.json")[0] == 2
    bad = tmp_path / "f.json"
    bad.write_text(json.dumps({"coeffs": {"zz": [1, 0]}}))
    assert run(capsys, "norm", D("r2.json"), bad)[0] == 2


def test_failed_assertion_exit_1(capsys, tmp_path):
    net = tmp_path / "net.json"
    net.write_text(json.dumps({"net": [{"h": {"(p,p)": [0.5, 0]}}], "eps": 1e-6}))
    code, out, _ = run(capsys, "fejer", D("r2.json"), net)
    assert code == 1 and not json.loads(out)["pass"]


def test_cap_exceeded_exit_3(capsys):
    assert run(capsys, "census", D("s3_points.action.json"))[0] == 3


def test_cap_env_override(capsys, monkeypatch):
    monkeypatch.setenv("GLAB_CAP", "3")
    assert run(capsys, "census", D("r2.json"))[0] == 3


def test_expected_failure_exits_zero(capsys):
    code, out, _ = run(capsys, "bimodule", D("z2.json"), "--trials", 8)
    rep = json.loads(out)
    assert code == 0 and not rep["pass"] and rep["expected_failure"]


def test_transform_writes_file(capsys, tmp_path):
    out_path = tmp_path / "g.json"
    code, out, _ = run(capsys, "transform", D("z2_swap.action.json"), "--out", out_path)
    assert code == 0
    G = load_groupoid(out_path)
    assert len(G) == 4 and json.loads(out)["principal"]


def test_no_command_is_usage_error(capsys):
    assert run(capsys)[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "glab", "validate", str(D("z3.json"))], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["units"] == ["e"]


# -- io ---------------------------------------------------------------------------


def test_function_file_resolves_relative_groupoid():
    f = load_function(D("r2_f.json"))
    assert f["(q,p)"] == 2 and f["(q,q)"] == 0


def test_net_file_forms():
    G = load_groupoid(D("r2.json"))
    net = load_net(D("r2_net.json"), G)
    assert len(net.symbols) == 2 and net.eps == 1e-6
    bare = load_net([{"h": {"(p,p)": [1, 0]}}], G)
    assert len(bare.symbols) == 1


def test_dumps_formats_floats():
    assert dumps({"b": 1.0, "a": [0.5, 2, None, True, float("inf")]}) == (
        '{\n  "a": [\n    0.500000000000,\n    2,\n    null,\n    true,\n    "inf"\n  ],\n  "b": 1.000000000000\n}'
    )
