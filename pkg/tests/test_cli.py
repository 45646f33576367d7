import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from qtfa.cli import RunConfig, config_from_args, main, run
from qtfa.io import HEADER_SIZE, read_field, read_signal


@pytest.fixture
def specs(tmp_path):
    s = tmp_path / "gauss_a0.5.json"
    g = tmp_path / "gauss_b0.5.json"
    s.write_text(json.dumps({"kind": "signal", "a": 0.5}))
    g.write_text(json.dumps({"kind": "window", "b": 0.5}))
    return str(s), str(g)


def _run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(config_from_args(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_parse_all_flags():
    cfg = config_from_args(["verify", "--suite", "lieb", "--d", "1", "--N", "16", "--L", "4", "--seed", "7",
                            "--format", "csv", "--output", "r.csv", "--no-timestamp"])
    assert cfg == RunConfig("verify", d=1, N=16, L=4.0, suite="lieb", output="r.csv", format="csv", seed=7,
                            timestamp=False)


def test_qwft_dump(tmp_path, specs):
    out = tmp_path / "out.bin"
    code, text, _ = _run(["qwft", "--signal", specs[0], "--window", specs[1], "--dump-field", str(out)])
    assert code == 0
    assert out.stat().st_size == 8 * (HEADER_SIZE + 32**4 * 4)
    F = read_field(out)
    assert F.kind == "qwft" and F.values.shape == (32,) * 4 + (4,)
    doc = json.loads(text)
    assert doc["suite"] == "qwft" and doc["summary"]["failed"] == 0
    assert "timestamp" in doc


@pytest.mark.parametrize("cmd", ["qft", "ambiguity", "wigner", "reconstruct"])
def test_transform_commands(tmp_path, specs, cmd):
    out = tmp_path / "f.bin"
    code, text, _ = _run([cmd, "--signal", specs[0], "--window", specs[1], "--N", "16", "--L", "6",
                          "--dump-field", str(out), "--no-timestamp"])
    assert code == 0, text
    doc = json.loads(text)
    assert doc["grid"] == {"d": 1, "N": 16, "L": 6.0}
    assert all(r["pass"] for r in doc["reports"])
    if cmd == "qft":
        assert read_signal(out).values.shape == (16, 16, 4)
    else:
        assert read_field(out).kind == {"ambiguity": "ambiguity", "wigner": "wigner"}.get(cmd, "qwft")


def test_verify_json_and_csv(tmp_path):
    out = tmp_path / "r.json"
    code, _, _ = _run(["verify", "--suite", "plancherel", "--seed", "7", "--output", str(out), "--no-timestamp"])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"schema_version", "config", "grid", "suite", "summary", "reports"}
    assert doc["config"]["seed"] == 7 and doc["config"]["suite"] == "plancherel"
    rep = doc["reports"][0]
    assert set(rep) == {"name", "lhs", "rhs", "margin", "pass", "kind", "constant_values", "parameters", "metadata"}
    code, text, _ = _run(["verify", "--suite", "lieb", "--N", "16", "--L", "6", "--format", "csv"])
    rows = list(csv.DictReader(io.StringIO(text)))
    assert rows and "const_C_pq" in rows[0]
    assert {r["suite"] for r in rows} == {"lieb"}


def test_failing_checks_exit_1(tmp_path):
    # the Gaussian modulus checks in the relations suite fail at a coarse grid
    code, text, err = _run(["verify", "--suite", "relations", "--N", "16", "--L", "8", "--no-timestamp"])
    assert code == 1
    assert "FAIL" in err
    assert json.loads(text)["summary"]["failed"] > 0


@pytest.mark.parametrize("argv", [
    ["verify", "--N", "30"],
    ["verify", "--L", "-1"],
    ["verify", "--d", "0"],
    ["verify", "--suite", "nope"],
    ["verify", "--format", "xml"],
    ["qwft", "--signal", "missing.json", "--window", "missing.json"],
    ["qft"],
    ["qwft", "--signal", "x.json"],
])
def test_invalid_config_exit_2(argv):
    code, text, err = _run(argv)
    assert code == 2
    assert err.startswith("qtfa: error:")
    assert text == ""


def test_bad_spec_file_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "triangle"}')
    code, _, err = _run(["qft", "--signal", str(bad)])
    assert code == 2 and "triangle" in err


def test_usage_error_exit_2(capsys):
    assert main(["frobnicate"]) == 2
    assert main(["verify", "--N", "abc"]) == 2


def test_deterministic_and_thread_independent(tmp_path, monkeypatch):
    texts = []
    for threads in ("1", "2", "2"):
        monkeypatch.setenv("QTFA_THREADS", threads)
        code, text, _ = _run(["verify", "--suite", "donoho-stark", "--N", "16", "--L", "6", "--seed", "3",
                              "--no-timestamp"])
        texts.append(text)
    assert texts[0] == texts[1] == texts[2]


def test_console_script(tmp_path, specs):
    proc = subprocess.run([sys.executable, "-m", "qtfa.cli", "qft", "--signal", specs[0], "--N", "8", "--L", "3",
                           "--no-timestamp"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["reports"][0]["name"] == "plancherel_qft"
