import json
import re
import subprocess
import sys

import pytest

from pseudoflat.cli import BUILTIN_SCENES, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_examples_lists_builtins(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0
    for name in BUILTIN_SCENES:
        assert name in out


def test_check_json_schema(capsys):
    code, out, _ = run(capsys, "check", "ordinary_flat", "--format", "json", "--trials", "20")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == 1
    assert set(doc) == {"schema", "scene", "seed", "trials", "max_degree", "flatness",
                        "frame_maps", "checks", "witnesses", "ok"}
    assert set(doc["flatness"]) == {"curvature_zero", "weakly_flat", "strongly_flat",
                                    "chain_complex", "chain_2_complex"}
    assert doc["flatness"]["strongly_flat"] is True
    assert doc["witnesses"] == {"d2": None, "d3": None}
    assert all(c["status"] == "pass" for c in doc["checks"])
    assert doc["ok"] is True


def test_check_is_deterministic(capsys):
    args = ("check", "ordinary_xdy", "--format", "json", "--trials", "15", "--seed", "7")
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second
    _, other, _ = run(capsys, "check", "ordinary_xdy", "--format", "json", "--trials", "15", "--seed", "8")
    assert json.loads(other)["seed"] == 8


def test_check_counterexample_text(capsys):
    code, out, _ = run(capsys, "check", "prop5_counterexample", "--trials", "10")
    assert code == 0
    assert "F = 0" in out
    assert "weakly flat: NO" in out
    assert "d∘d ≠ 0 (witness [1, 0] -> [dy^dz, 0])" in out
    assert "all checks passed" in out


def test_output_file(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "check", "ordinary_flat", "--format", "json", "--trials", "5",
                       "-o", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["scene"]["name"] == "ordinary_flat"


def test_scene_file(tmp_path, capsys):
    path = tmp_path / "line.scene"
    path.write_text("vars t\nrank 1\nP = [[1]]\nA = [[t*dt]]\n")
    code, out, _ = run(capsys, "check", str(path), "--trials", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["scene"] == {"name": "line", "variables": ["t"], "rank": 1, "target_rank": 1}


def test_corrupted_scene(tmp_path, capsys):
    path = tmp_path / "bad.scene"
    path.write_bytes(b"vars x y\nrank 1\nP = [[1]]\nA = [[dx + ]]\n")
    code, out, err = run(capsys, "check", str(path))
    assert code == 2 and out == ""
    assert "4:" in err and "bad.scene" in err


def test_missing_scene(capsys):
    code, _, err = run(capsys, "check", "no/such/file.scene")
    assert code == 2 and "no scene file" in err


def test_bad_trials(capsys):
    code, _, err = run(capsys, "check", "ordinary_flat", "--trials", "-1")
    assert code == 2 and "non-negative" in err


def test_curvature_xdy(capsys):
    code, out, _ = run(capsys, "curvature", "ordinary_xdy", "--X", "d/dx", "--Y", "d/dy",
                       "--section", "e1", "--format", "json")
    assert code == 0
    res = json.loads(out)["curvature"]
    assert res["direct"] == res["formula"] == "[1]"
    assert res["match"] is True


def test_curvature_antisymmetric(capsys):
    _, out, _ = run(capsys, "curvature", "ordinary_xdy", "--X", "d/dy", "--Y", "d/dx",
                    "--section", "x*e1", "--format", "json")
    assert json.loads(out)["curvature"]["direct"] == "[-x]"
    code, out, _ = run(capsys, "curvature", "ordinary_xdy", "--X", "d/dx + z*d/dy", "--Y",
                       "d/dx + z*d/dy", "--section", "e1")
    assert code == 0
    assert re.search(r"\[0\]\s+\| \[0\]\n  match\n", out)


def test_curvature_named_inputs(capsys):
    code, out, _ = run(capsys, "curvature", "ordinary_flat", "--X", "X", "--Y", "Y",
                       "--section", "s1", "--format", "json")
    res = json.loads(out)["curvature"]
    assert code == 0 and res["direct"] == "[0, 0]"


@pytest.mark.parametrize("flag, value", [("--X", "dx"), ("--section", "dx*e1"), ("--Y", "q")])
def test_curvature_bad_expressions(capsys, flag, value):
    argv = {"--X": "d/dx", "--Y": "d/dy", "--section": "e1"}
    argv[flag] = value
    code, _, err = run(capsys, "curvature", "ordinary_xdy", *[t for kv in argv.items() for t in kv])
    assert code == 2 and flag in err


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "pseudoflat.cli", "examples"],
                          capture_output=True, text=True, check=True)
    assert "prop5_counterexample" in proc.stdout
