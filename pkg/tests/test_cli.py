import json
import subprocess
import sys

import pytest

from cqtcheck import cli

RUN = [sys.executable, "-m", "cqtcheck.cli"]


def run_cli(args, **kw):
    return subprocess.run(RUN + args, capture_output=True, text=True, **kw)


def test_classify_slq2_prints_count():
    out = run_cli(["check", "builtin:slq2", "--suite", "classify"])
    assert out.returncode == 0
    assert "CQT candidates: 4" in out.stdout


def test_classify_slq2_at_one():
    out = run_cli(["check", "builtin:slq2", "--suite", "classify",
                   "--eval", "t=1"])
    assert out.returncode == 0
    assert "CQT candidates: 2" in out.stdout
    assert "CT candidates: 2" in out.stdout


def test_classify_subcommand():
    out = run_cli(["classify", "builtin:slq2", "--eval", "t=i"])
    assert out.returncode == 0
    assert "CQT candidates: 2" in out.stdout
    assert "CT candidates: 0" in out.stdout


def test_malformed_file_exits_2(tmp_path):
    bad = tmp_path / "bad.qg"
    bad.write_text("gen w : 2\nmat E : [] -> [w w] { 9,1 = }\n")
    out = run_cli(["check", str(bad), "--suite", "validate"])
    assert out.returncode == 2
    assert out.stderr.strip()


def test_parse_error_position_reported(tmp_path):
    bad = tmp_path / "bad.qg"
    bad.write_text("gen w : 2\nrel missing\n")
    out = run_cli(["check", str(bad), "--suite", "validate"])
    assert out.returncode == 2
    assert "2:" in out.stderr


def test_check_failure_exits_1():
    # the generic family is not cotriangular
    out = run_cli(["check", "builtin:slq2", "--suite", "ct"])
    assert out.returncode == 1
    assert "FAIL" in out.stdout


def test_document_check(tmp_path):
    from cqtcheck.catalog import slq2_text
    f = tmp_path / "doc.qg"
    f.write_text(slq2_text())
    out = run_cli(["check", str(f), "--suite", "validate", "--suite", "cqt"])
    assert out.returncode == 0, out.stdout + out.stderr


def test_json_report_is_byte_stable(tmp_path):
    paths = []
    for k in (0, 1):
        p = tmp_path / f"report{k}.json"
        out = run_cli(["check", "builtin:slq2", "--suite", "classify",
                       "--json", str(p)])
        assert out.returncode == 0
        paths.append(p.read_bytes())
    assert paths[0] == paths[1]
    payload = json.loads(paths[0])
    assert payload["datum"] == "builtin:slq2"
    assert all(set(r) >= {"check_id", "status", "suite", "datum"}
               for r in payload["reports"])


def test_json_witness_round_trips(tmp_path):
    p = tmp_path / "report.json"
    out = run_cli(["check", "builtin:slq2", "--suite", "ct",
                   "--json", str(p)])
    assert out.returncode == 1
    payload = json.loads(p.read_text())
    failing = [r for r in payload["reports"] if r["status"] == "fail"]
    assert failing
    for r in failing:
        assert r["witness"] is not None
        assert isinstance(r["witness"]["value"], str)
        # witnesses are exact strings, never floats
        assert "." not in r["witness"]["value"]


def test_unknown_builtin_exits_2():
    out = run_cli(["check", "builtin:nope"])
    assert out.returncode == 2
    assert "unknown builtin" in out.stderr


def test_mor_command():
    out = run_cli(["mor", "builtin:slq2", "w w", "w w", "--depth", "2"])
    assert out.returncode == 0
    assert "witnessed dimension 2" in out.stdout


def test_show_command():
    out = run_cli(["show", "builtin:slq2", "E"])
    assert out.returncode == 0
    assert "-t^2" in out.stdout
    listing = run_cli(["show", "builtin:slq2"])
    assert "L1" in listing.stdout


def test_eval_requires_constant():
    out = run_cli(["check", "builtin:slq2", "--eval", "t=t+1"])
    assert out.returncode == 2


def test_lorentz_user_file(tmp_path):
    f = tmp_path / "lor.qg"
    f.write_text(
        "gen w : 2 conj wb\ngen wb : 2 conj w\n"
        "mat X : [w wb] -> [wb w] { 1,1 = 1 ; 2,3 = 1 ; 3,2 = 1 ; 4,4 = 1 }\n"
        "param beta = 1\n")
    out = run_cli(["check", f"builtin:lorentz-user({f})", "--suite",
                   "validate", "--eval", "t=1"])
    assert out.returncode == 0, out.stdout + out.stderr


def test_dispatch_in_process():
    # the python API mirrors the subprocess behavior
    rc = cli.main(["check", "builtin:slq2", "--suite", "classify"])
    assert rc == 0
