import json
import subprocess
import sys
from pathlib import Path

import pytest

from leflab.cli import run

TORUS_CONFIG = {
    "ambient": "(0,0,12,0,0,45)",
    "omega": "14+23+56",
    "sub": "torus",
    "frame": [[1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1]],
    "massey": [["1", "2", "1"]],
}

KT_CONFIG = {
    "ambient": "CPn:6",
    "sub": "(0,0,12,0)",
    "hyperplane": "13+24",
    "sub_massey": [["1", "2", "1"]],
    "checks": ["betti", "massey"],
}


def invoke(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_nilcoh_json(capsys):
    code, out, _ = invoke(capsys, "nilcoh", "--structure", "(0,0,12)", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == "1"
    assert data["betti"] == [1, 2, 2, 1]
    assert data["basis"][2] == ["e13", "e23"]


def test_nilcoh_table(capsys):
    code, out, _ = invoke(capsys, "nilcoh", "--structure", "(0,0,12)")
    assert code == 0 and "betti 1 2 2 1" in out


def test_json_is_byte_identical(capsys):
    args = ("lefschetz", "--structure", "(0,0,12,0,0,45)", "--omega", "14+23+56", "--format", "json")
    _, a, _ = invoke(capsys, *args)
    _, b, _ = invoke(capsys, *args)
    assert a == b
    data = json.loads(a)
    assert data["lefschetz"] is False


def test_d_squared_exit_one(capsys):
    code, out, _ = invoke(capsys, "nilcoh", "--structure", "(0,0,12,34)", "--format", "json")
    assert code == 1
    assert json.loads(out)["error"]["reason"] == "d_squared_nonzero"


def test_parse_error_exit_two(capsys):
    code, out, _ = invoke(capsys, "nilcoh", "--structure", "(0,0,21)", "--format", "json")
    assert code == 2
    err = json.loads(out)["error"]
    assert err["reason"] == "parse_error" and "position" in err


def test_argparse_usage_exit_two(capsys):
    code, _, _ = invoke(capsys, "toeplitz", "--n", "x")
    assert code == 2


def test_not_symplectic(capsys):
    code, out, _ = invoke(capsys, "lefschetz", "--structure", "(0,0,0,0)", "--omega", "12",
                          "--format", "json")
    assert code == 1 and json.loads(out)["error"]["reason"] == "not_symplectic"


def test_massey_inputs(capsys):
    code, out, _ = invoke(capsys, "massey", "--structure", "(0,0,12)", "--inputs", "1;2;1",
                          "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["representative"] == "-2*e13" and data["trivial"] is False
    assert data["indeterminacy"] == []


def test_massey_undefined(capsys):
    code, out, _ = invoke(capsys, "massey", "--structure", "(0,0)", "--inputs", "1;2;1",
                          "--format", "json")
    assert code == 1 and json.loads(out)["error"]["which"] == "xy"


def test_massey_search(capsys):
    code, out, _ = invoke(capsys, "massey", "--structure", "(0,0,12)", "--degrees", "1,1,1",
                          "--format", "json")
    inputs = [e["inputs"] for e in json.loads(out)["nontrivial"]]
    assert code == 0 and ["e1", "e2", "e1"] in inputs


def test_toeplitz(capsys):
    code, out, _ = invoke(capsys, "toeplitz", "--n", "3", "--p", "1", "--k", "1")
    assert code == 0 and out.strip() == "-6"
    code, out, _ = invoke(capsys, "toeplitz", "--sweep", "5,3", "--format", "json")
    assert code == 0 and json.loads(out)["ok"] is True
    code, _, _ = invoke(capsys, "toeplitz", "--n", "3")
    assert code == 2


def test_blowup_torus_config(capsys, tmp_path):
    cfg = tmp_path / "torus.json"
    cfg.write_text(json.dumps(TORUS_CONFIG))
    code, out, _ = invoke(capsys, "blowup", "--config", str(cfg))
    data = json.loads(out)
    assert code == 0 and data["ok"]
    assert data["betti"]["blowup"] == [1, 4, 9, 12, 9, 4, 1]
    assert data["lefschetz"]["lefschetz"] is True
    assert data["massey"][0]["survives"] is True


def test_blowup_eps_report(capsys, tmp_path):
    cfg = tmp_path / "torus.json"
    cfg.write_text(json.dumps(TORUS_CONFIG))
    code, out, _ = invoke(capsys, "blowup", "--config", str(cfg), "--checks", "lefschetz",
                          "--eps-report")
    data = json.loads(out)
    assert code == 0 and "stabilization" in data["lefschetz"]


def test_blowup_submanifold_massey(capsys, tmp_path):
    cfg = tmp_path / "kt.json"
    cfg.write_text(json.dumps(KT_CONFIG))
    code, out, _ = invoke(capsys, "blowup", "--config", str(cfg))
    data = json.loads(out)
    assert code == 0 and data["k"] == 4
    assert data["massey"][0]["nontrivial"] and data["massey"][0]["survives"]


def test_blowup_bad_config(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"ambient": "(0,0)", "bogus": 1}))
    code, _, _ = invoke(capsys, "blowup", "--config", str(cfg))
    assert code == 2
    code, _, _ = invoke(capsys, "blowup", "--config", str(tmp_path / "missing.json"))
    assert code == 2


def test_verify_command_passes(capsys):
    code, out, _ = invoke(capsys, "verify-paper")
    assert code == 0
    assert out.count("[PASS]") == len(out.strip().splitlines())


def test_verify_command_filter(capsys):
    code, out, _ = invoke(capsys, "verify-paper", "--filter", "massey")
    names = [line.split("]")[1].split(":")[0].strip() for line in out.strip().splitlines()]
    assert code == 0 and names and all("massey" in n for n in names)


def test_verify_command_fault_injection(capsys):
    code, out, _ = invoke(capsys, "verify-paper", "--override", "heisenberg=(0,0,13)",
                          "--format", "json")
    data = json.loads(out)
    failed = [c["name"] for c in data["checks"] if not c["passed"]]
    assert code == 1 and "heisenberg-cohomology" in failed


def test_verify_command_bad_override(capsys):
    code, _, _ = invoke(capsys, "verify-paper", "--override", "nope=1")
    assert code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "leflab", "toeplitz", "--n", "2", "--p", "1",
                          "--k", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "-3"


CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


@pytest.mark.parametrize("name", ["hh_torus", "hh_torus_14", "t6_point", "kt_in_cp6"])
def test_bundled_configs(capsys, name):
    code, out, _ = invoke(capsys, "blowup", "--config", str(CONFIG_DIR / f"{name}.json"))
    data = json.loads(out)
    assert code == 0 and data["ok"] and data["betti"]["additive"]
