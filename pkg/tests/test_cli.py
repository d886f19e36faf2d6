import io
import json
import subprocess
import sys

import pytest

from cyclic_blocks.cli import run
from cyclic_blocks.kernel import build_generator_set, generator_set_from_json, generator_set_to_json


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_gens_json():
    code, out, _ = call("gens", "--n", "13", "--t", "5", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["generators"] == [[1, 6, 11], [2, 7, 12], [3, 8, 13], [4, 9, 11, 13], [5, 10, 12, 13]]
    assert doc == json.loads(generator_set_to_json(build_generator_set(13, 5)))


def test_gens_json_round_trip_byte_identical():
    for n, t in [(13, 5), (1, 1), (97, 12), (64, 64)]:
        _, out, _ = call("gens", "--n", str(n), "--t", str(t), "--format", "json")
        assert generator_set_to_json(generator_set_from_json(out)) + "\n" == out


def test_gens_text_and_closed_form():
    code, out, _ = call("gens", "--n", "7", "--t", "3", "--closed-form")
    assert code == 0 and "g_2 = {2,5,7}" in out
    code, _, err = call("gens", "--n", "13", "--t", "5", "--closed-form")
    assert code == 2 and "closed form" in err


def test_verify_pass_and_json():
    code, out, _ = call("verify", "--n", "6", "--t", "2")
    assert code == 0 and out.startswith("PASS")
    code, out, _ = call("verify", "--n", "120", "--t", "40", "--samples", "2000", "--seed", "9", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["mode"] == "sampled" and doc["seed"] == 9 and doc["combos_checked"] == 2000


def test_cosets_command():
    code, out, _ = call("cosets", "--n", "13", "--t", "5", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["coset_count"] == 256 and doc["agreement_violations"] == 0
    code, _, err = call("cosets", "--n", "30", "--t", "5")
    assert code == 2 and "guard" in err


def test_oracle_command():
    code, out, _ = call("oracle", "--n", "4", "--base", "1,2", "--mode", "both")
    assert code == 0 and "v = 4" in out and "v_bar = 4" in out
    code, out, _ = call("oracle", "--n", "5", "--base", "{1,3}", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["predicted"] is None
    assert doc["results"][0]["value"] == doc["results"][1]["value"]
    code, out, _ = call("oracle", "--n", "6", "--t", "2", "--mode", "vbar")
    assert code == 0 and "v_bar = 16" in out


def test_oracle_inconclusive_is_failure():
    code, out, _ = call("oracle", "--n", "8", "--base", "1,3,4", "--mode", "v", "--timeout", "0")
    # a zero timeout may still finish if the greedy seed meets the root bound
    assert code in (0, 1)
    if code == 1:
        assert "timed out" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("verify", "--n", "3", "--t", "5"),
        ("verify", "--n", "0", "--t", "1"),
        ("verify", "--n", "x", "--t", "1"),
        ("oracle", "--n", "12", "--t", "3"),
        ("oracle", "--n", "4", "--base", "1,9"),
        ("oracle", "--n", "4", "--base", "a"),
        ("oracle", "--n", "4"),
        ("sweep",),
        ("frobnicate",),
        ("gens", "--n", "5"),
    ],
)
def test_usage_errors_exit_2(argv):
    code, out, _ = call(*argv)
    assert code == 2 and out == ""


def test_sweep_small_and_json():
    code, out, _ = call("sweep", "--max-n", "1")
    assert code == 0 and "ALL PASS" in out
    code, out, _ = call("sweep", "--max-n", "7", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["ok"] and doc["instances"] == 28 and len(doc["theorems"]) == 28


def test_sweep_detects_corruption():
    code, out, _ = call("sweep", "--max-n", "13", "--oracle-max-n", "0", "--corrupt", "13,5,1,11")
    assert code == 1
    assert "FAIL n=13 t=5" in out and "missed window starts at 7" in out
    code, out, _ = call("sweep", "--max-n", "6", "--oracle-max-n", "0", "--corrupt", "6,3,1,2", "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["errors"][0]["n"] == 6


def test_jobs_env(monkeypatch):
    monkeypatch.setenv("CYCLIC_BLOCKS_JOBS", "2")
    code, out, _ = call("verify", "--n", "20", "--t", "12", "--format", "json")
    assert code == 0 and json.loads(out)["combos_checked"] == 2 ** 12 - 1
    monkeypatch.setenv("CYCLIC_BLOCKS_JOBS", "many")
    code, _, err = call("verify", "--n", "20", "--t", "12")
    assert code == 2 and "CYCLIC_BLOCKS_JOBS" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cyclic_blocks", "verify", "--n", "13", "--t", "5", "--format", "json"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["failures"] == []
