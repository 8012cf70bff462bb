"""End-to-end tests of the command-line front end: outputs, formats,
determinism, and error handling."""

import json
import subprocess
import sys
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"
NET2 = str(FIXTURES / "n2_noiseless_bit.network.json")
SCH2 = str(FIXTURES / "n2_noiseless_bit.scheme.json")
NET3 = str(FIXTURES / "n3_binary.network.json")
SCH3 = str(FIXTURES / "n3_binary.scheme.json")


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "nncpdf.cli", *args],
        capture_output=True, text=True,
    )


def test_eval_noiseless_bit():
    res = run_cli("eval", "--network", NET2, "--scheme", SCH2)
    assert res.returncode == 0
    assert "bound: 1" in res.stdout
    assert "feasible: True" in res.stdout


def test_eval_csv_sorted_and_deterministic():
    a = run_cli("eval", "--network", NET3, "--scheme", SCH3, "--format", "csv")
    b = run_cli("eval", "--network", NET3, "--scheme", SCH3, "--format", "csv")
    assert a.returncode == 0
    assert a.stdout == b.stdout
    lines = a.stdout.strip().splitlines()
    assert lines[0] == "record,destination,S,T,term1,term2,term3,term4,value"
    cut_rows = [l.split(",") for l in lines[1:] if l.startswith("cut")]
    keys = [(r[1], r[2], r[3]) for r in cut_rows]
    assert keys == sorted(keys)
    assert lines[-2].startswith("bound,")
    assert lines[-1].startswith("feasible,")


def test_feasibility_margins():
    res = run_cli("feasibility", "--network", NET3, "--scheme", SCH3,
                  "--format", "csv")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "nodes,lhs,rhs,margin"
    assert lines[-1] == "feasible,,,true"


def test_compare_rows():
    res = run_cli("compare", "--network", NET3, "--scheme", SCH3,
                  "--format", "csv")
    assert res.returncode == 0
    methods = [l.split(",")[0] for l in res.stdout.strip().splitlines()[1:]]
    assert methods == ["nncpdf", "nnc", "ddf", "theorem7", "cutset"]
    rows = dict(l.split(",") for l in res.stdout.strip().splitlines()[1:])
    assert float(rows["nncpdf"]) == pytest.approx(float(rows["theorem7"]), abs=1e-9)


def test_derive_p2p_preset():
    res = run_cli("derive", "--preset", "p2p")
    assert res.returncode == 0
    assert "R < I(X1;Y2)" in res.stdout


def test_derive_cross_check():
    res = run_cli("derive", "--network", NET3, "--scheme", SCH3)
    assert res.returncode == 0
    lines = {l.split(":")[0]: l.split(":", 1)[1] for l in
             res.stdout.strip().splitlines() if ":" in l and "I(" not in l}
    assert abs(float(lines["delta"])) < 1e-9


def test_simplify_check_deltas_small():
    res = run_cli("simplify-check", "--network", NET3, "--scheme", SCH3,
                  "--format", "csv")
    assert res.returncode == 0
    rows = res.stdout.strip().splitlines()[1:]
    deltas = [float(r.rsplit(",", 1)[1]) for r in rows]
    assert deltas and max(deltas) < 1e-9


def test_optimize_writes_scheme(tmp_path):
    out = tmp_path / "best.json"
    res = run_cli("optimize", "--network", NET2, "--aux-sizes", "1,1,1",
                  "--grid-res", "5", "--out", str(out))
    assert res.returncode == 0
    payload = json.loads(out.read_text())
    assert payload["rate"] == pytest.approx(1.0, abs=1e-12)
    assert payload["scheme"]["head"] == [0.5, 0.5]


def test_missing_file_is_diagnosed():
    res = run_cli("eval", "--network", "/nonexistent.json", "--scheme", SCH3)
    assert res.returncode == 1
    assert "error:" in res.stderr


def test_missing_required_argument():
    res = run_cli("eval", "--network", NET3)
    assert res.returncode == 1
    assert "scheme" in res.stderr


def test_complement_switch_changes_bound():
    a = run_cli("eval", "--network", NET3, "--scheme", SCH3, "--format", "csv")
    r = run_cli("eval", "--network", NET3, "--scheme", SCH3, "--format", "csv",
                "--complement", "relays")
    val_a = a.stdout.strip().splitlines()[-2].rsplit(",", 1)[1]
    val_r = r.stdout.strip().splitlines()[-2].rsplit(",", 1)[1]
    assert val_a != val_r
