import json
import subprocess
import sys

import pytest

from bisyz.cli import main

V1_TEXT = "x0^2 y0, x0^2 y1, x1^2 y0, x1^2 y1, x0 x1 y0"
P = ["--m", "1", "--n", "1", "--a", "2", "--b", "1"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out.strip() else None), err


def recheck(capsys, tmp_path, data, name="artifact.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return run_json(capsys, "certify", "--recheck", str(path))


def test_certify_example(capsys, tmp_path):
    code, out, _ = run_json(capsys, "certify", *P, "--system", V1_TEXT, "--strategy", "gap-then-brute")
    assert code == 0
    v = out["verdict"]
    assert v["kind"] == "NotStable" and (v["witness"]["x"], v["witness"]["y"]) == (1, 0)
    code, res, _ = recheck(capsys, tmp_path, out)
    assert code == 0 and res["ok"]


def test_construct_and_moduli_examples(capsys, tmp_path):
    code, out, _ = run_json(capsys, "construct", "--m", "1", "--n", "1", "--a", "6", "--b", "4", "--r", "8")
    assert code == 0 and out["t_r"] == 2 and out["verification"]["bound_met"]
    assert out["V"]["degree_gap"]["kind"] == "StableCertified"
    assert recheck(capsys, tmp_path, out)[0] == 0
    code, out, _ = run_json(capsys, "moduli", "--m", "2", "--n", "2", "--a", "1", "--b", "1", "--r", "9")
    assert code == 0 and (out["tangent_dim"], out["rigid"]) == (0, True)
    assert recheck(capsys, tmp_path, out)[0] == 0


def test_every_artifact_rechecks(capsys, tmp_path):
    runs = [
        ["h0", *P, "--system", V1_TEXT, "--x", "1", "--y", "0"],
        ["wedge", *P, "--system", V1_TEXT, "--q", "2", "--x", "1", "--y", "0"],
        ["tmin", *P, "--system", V1_TEXT, "--mingens"],
        ["certify", *P, "--seed", "3", "--r", "5"],
        ["classify", *P, "--r", "5"],
        ["classify", "--m", "2", "--n", "3", "--a", "5", "--b", "2", "--r", "8"],
        ["sweep", *P, "--r", "5", "--out", str(tmp_path / "res")],
        ["sweep", *P, "--r", "5", "--samples", "2", "--seed", "4"],
        ["report", *P, "--out", str(tmp_path / "rep")],
    ]
    for argv in runs:
        code, out, err = run_json(capsys, *argv)
        assert code == 0, (argv, err)
        code, res, _ = recheck(capsys, tmp_path, out)
        assert code == 0 and res["ok"], (argv, res)


def test_h0_value_and_tampered_recheck(capsys, tmp_path):
    code, out, _ = run_json(capsys, "h0", *P, "--system", V1_TEXT, "--x", "1", "--y", "0")
    assert out["h0"] == 2
    out["h0"] = 1
    code, res, _ = recheck(capsys, tmp_path, out)
    assert code == 2 and not res["ok"]


def test_system_file_and_consistency(capsys, tmp_path):
    code, out, _ = run_json(capsys, "certify", *P, "--system", V1_TEXT)
    path = tmp_path / "sys.json"
    path.write_text(json.dumps(out["system"]))
    code, again, _ = run_json(capsys, "certify", "--system", str(path))
    assert code == 0 and again["verdict"] == out["verdict"]
    code, _, err = run(capsys, "certify", "--m", "1", "--n", "1", "--a", "3", "--system", str(path))
    assert code == 2 and json.loads(err)["error"] == "UsageError"


def test_precondition_errors_exit_2(capsys):
    code, _, err = run(capsys, "certify", *P, "--system", "x0^2 y0, x0^2 y1, x1^2 y0")
    assert code == 2 and json.loads(err)["error"] == "NotBasepointFree"
    code, _, err = run(capsys, "certify", *P, "--system", "x0^2 y0, x9 y1")
    assert code == 2
    code, _, err = run(capsys, "construct", "--m", "1", "--n", "1", "--a", "6", "--b", "4", "--r", "14")
    assert code == 2 and json.loads(err)["error"] == "RangeError"
    code, _, err = run(capsys, "moduli", *P, "--r", "2")
    assert code == 2


def test_partial_construction_still_emits_json(capsys):
    code, out, err = run_json(capsys, "construct", "--m", "1", "--n", "1", "--a", "3", "--b", "2", "--r", "5")
    assert code == 2
    assert out["verification"]["bound_met"] is False
    assert json.loads(err)["error"] == "PartialResult"


def test_unknown_flag_is_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["h0", "--bogus"])
    assert exc.value.code == 2


def test_identical_invocations_are_identical(capsys):
    argv = ["certify", *P, "--system", V1_TEXT]
    _, first, _ = run_json(capsys, *argv)
    _, second, _ = run_json(capsys, *argv)
    first.pop("timings_ms"), second.pop("timings_ms")
    assert first == second
    _, a, _ = run(capsys, "classify", *P, "--r", "5")
    _, b, _ = run(capsys, "classify", *P, "--r", "5")
    assert a == b


def test_no_floats_in_output(capsys, tmp_path):
    def walk(v):
        if isinstance(v, float):
            raise AssertionError(f"float {v} in output")
        if isinstance(v, dict):
            for w in v.values():
                walk(w)
        if isinstance(v, list):
            for w in v:
                walk(w)
    for argv in (["certify", *P, "--system", V1_TEXT], ["classify", *P, "--r", "6"],
                 ["moduli", *P, "--r", "4"], ["construct", "--m", "1", "--n", "1", "--a", "6", "--b", "4", "--r", "8"]):
        _, out, _ = run_json(capsys, *argv)
        out.pop("timings_ms", None)
        walk(out)


def test_table_format_and_out_file(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", *P, "--system", V1_TEXT, "--format", "table")
    assert code == 0 and "NotStable" in out
    target = tmp_path / "cert.json"
    assert run(capsys, "certify", *P, "--system", V1_TEXT, "--out", str(target))[0] == 0
    assert json.loads(target.read_text())["verdict"]["kind"] == "NotStable"


def test_result_dir_env(tmp_path):
    env = {"BISYZ_RESULT_DIR": str(tmp_path / "store"), "PATH": "/usr/bin:/bin"}
    proc = subprocess.run([sys.executable, "-m", "bisyz", "sweep", *P, "--r", "4"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["answer"] == "YES"
    assert (tmp_path / "store" / "sweep-m1n1a2b1r4.jsonl").exists()
