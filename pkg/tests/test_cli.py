import json
import subprocess
import sys

import pytest

from mockmod.cli import dispatch
from mockmod.verify import CHECKS

FORM_ARGS = {
    "eisenstein": ["--k", "6"],
    "delta": [],
    "j": [],
    "eisenstein-p": ["--k", "4", "--p", "3"],
    "e2tilde": ["--p", "3"],
    "eichler": [],
    "dj-basis": ["--m", "4"],
    "r-p": ["--p", "5"],
    "f-alpha-delta": ["--p", "3", "--l", "3"],
}


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_delta_plain(capsys):
    code, out, _ = run(capsys, "expand", "--form", "delta", "--terms", "5", "--format", "plain")
    assert code == 0
    assert out.splitlines() == ["1 1", "2 -24", "3 252", "4 -1472"]


def test_expand_json(capsys):
    code, out, _ = run(capsys, "expand", "--form", "e2tilde", "--terms", "4", "--format", "json",
                       "--ring", "padic", "--precision", "5")
    doc = json.loads(out)
    assert code == 0
    assert doc["ring"] == "padic(3,5)" and doc["minExp"] == 0 and doc["precBound"] == 4
    assert doc["coefficients"][0] == "0:241:5"     # -2 mod 3^5


@pytest.mark.parametrize("form", sorted(FORM_ARGS))
@pytest.mark.parametrize("ring", ["rational", "padic"])
def test_expand_independent_of_cache(capsys, tmp_path, form, ring):
    if form == "eichler" and ring == "padic":
        pytest.skip("eichler is rational only")

    def args(terms):
        return ["expand", "--form", form, "--ring", ring, "--terms", str(terms), *FORM_ARGS[form]]

    cache = ["--cache-dir", str(tmp_path)]
    plain = run(capsys, *args(12))[1]
    first = run(capsys, *cache, *args(12))[1]
    second = run(capsys, *cache, *args(12))[1]
    assert plain == first == second
    assert run(capsys, *cache, *args(7))[1] == run(capsys, *args(7))[1]


def test_eichler_padic_is_usage_error(capsys):
    code, _, err = run(capsys, "expand", "--form", "eichler", "--ring", "padic")
    assert code == 2 and "rationals" in err


def test_env_overrides_cache_dir(capsys, tmp_path, monkeypatch):
    env_dir, flag_dir = tmp_path / "env", tmp_path / "flag"
    monkeypatch.setenv("MOCKMOD_CACHE_DIR", str(env_dir))
    run(capsys, "--cache-dir", str(flag_dir), "expand", "--form", "delta", "--terms", "5")
    assert env_dir.exists() and not flag_dir.exists()


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "--check", "thm-1-2-mod27")
    assert code == 0 and out.startswith("PASS")
    code, _, err = run(capsys, "verify", "--check", "thm-1-2-mod27", "--precision", "2")
    assert code == 3 and "PrecisionError" in err
    code, _, _ = run(capsys, "verify", "--check", "no-such-check")
    assert code == 2
    code, _, _ = run(capsys)
    assert code == 2


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--check", "hecke-roots", "--p", "7", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["p"] == 7


def test_checks_lists_ids(capsys):
    code, out, _ = run(capsys, "checks")
    assert code == 0 and out.split() == list(CHECKS)


def test_plan(capsys):
    code, out, _ = run(capsys, "plan", "--p", "3", "--l", "3", "--s", "7", "--terms", "323")
    doc = json.loads(out)
    assert code == 0
    assert (doc["v"], doc["r"], doc["stated_depth"], doc["rpTerms"]) == (2, 3, 4, 2907)
    assert doc["l1_statement"] == doc["l1_proof"] == "7"


def test_report(capsys, tmp_path):
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    code, stdout, _ = run(capsys, "report", "--p", "3", "--out", str(out1), "--no-timing")
    assert code == 0
    entries = json.loads(out1.read_text())
    checks, summary = entries[:-1], entries[-1]["summary"]
    assert len(checks) >= 12
    assert summary == {"checks": len(checks), "passed": len(checks), "failed": 0, "undecided": 0}
    assert all(e["pass"] for e in checks)
    assert "summary:" in stdout
    run(capsys, "report", "--p", "3", "--out", str(out2), "--no-timing")
    assert out1.read_bytes() == out2.read_bytes()


def test_report_other_prime_parallel(capsys, tmp_path):
    out = tmp_path / "r5.json"
    code, _, _ = run(capsys, "report", "--p", "5", "--out", str(out), "--jobs", "2")
    assert code == 0
    assert all(e.get("pass", True) for e in json.loads(out.read_text()))


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mockmod.cli", "expand", "--form", "j", "--terms", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.split("\n")[:2] == ["-1 1", "0 744"]
