import json
import subprocess
import sys
from pathlib import Path

import pytest

from decider_lab.cli import main, render_tape

GOLDEN = Path(__file__).parent / "golden"


def _cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_render_tape():
    assert render_tape(["X", "L", "B", "B", "B"], 1, {"X": "x", "L": "(", "B": "_"}) == "|x[(]___|"
    assert render_tape(["B"], 1, {"B": "_"}) == "|_[]|"


def test_open_open_prefix_golden(capsys):
    code, out, _ = _cli(capsys, "trace", "paren", "((")
    assert code == 0
    want = (GOLDEN / "open_open_prefix.txt").read_text()
    assert "".join(out.splitlines(keepends=True)[:6]) == want


def test_nested_q0_snapshots_golden(capsys):
    code, out, _ = _cli(capsys, "trace", "paren", "(())()", "--states", "q0,q_acc")
    assert code == 0
    assert out == (GOLDEN / "nested_q0_snapshots.txt").read_text()


def test_trace_m2_empty(capsys):
    code, out, _ = _cli(capsys, "trace", "m2", "--n", "0")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 2
    assert lines[0].split()[1] == "q0" and lines[1].split()[1] == "q_rej"


def test_trace_json_with_ghost_and_variant(capsys):
    code, out, _ = _cli(capsys, "trace", "paren", "((", "--format", "json", "--ghost", "--variant")
    recs = [json.loads(l) for l in out.splitlines()]
    assert [r["step"] for r in recs] == list(range(len(recs)))
    assert recs[0]["variant"] == "(2,3,0)" and recs[1]["variant"] == "(2,2,4)"
    assert recs[1]["ghost"] == {"k": 0, "s": 0, "s'": 1, "k'": 1, "lp": 1, "rp": 0}


def test_trace_m2_snapshot_text(capsys):
    _, out, _ = _cli(capsys, "trace", "m2", "000", "--ghost")
    assert out.splitlines()[1].endswith("snap=_00_")


def test_run_exit_codes(capsys):
    code, out, _ = _cli(capsys, "run", "paren", "(())()")
    assert code == 0 and out.splitlines()[0] == "accept"
    code, out, _ = _cli(capsys, "run", "m2", "--n", "5")
    assert code == 1 and out.splitlines()[0] == "reject"
    assert _cli(capsys, "run", "paren", "(a)")[0] == 2
    assert _cli(capsys, "run", "m2", "00", "--n", "2")[0] == 2
    assert _cli(capsys, "run", "paren", "--n", "2")[0] == 2
    assert _cli(capsys, "bogus")[0] == 2


def test_fuel_flag_and_env(capsys, monkeypatch):
    assert _cli(capsys, "run", "paren", "(())()", "--fuel", "10")[0] == 3
    monkeypatch.setenv("DECIDER_LAB_FUEL", "10")
    assert _cli(capsys, "run", "paren", "(())()")[0] == 3
    monkeypatch.setenv("DECIDER_LAB_FUEL", "ten")
    assert _cli(capsys, "run", "paren", "()")[0] == 2
    monkeypatch.setenv("DECIDER_LAB_FUEL", "100000")
    assert _cli(capsys, "run", "paren", "()")[0] == 0


def test_verify_paren_clean(capsys):
    code, out, _ = _cli(capsys, "verify", "paren", "--max-len", "8")
    assert code == 0
    assert "runs: 511" in out and "violations: 0  engine errors: 0" in out


def test_verify_m2_with_samples(capsys):
    code, out, _ = _cli(capsys, "verify", "m2", "--max-len", "64", "--sample", "1024,4096")
    assert code == 0 and "runs: 67" in out


def test_verify_m2_reference(capsys):
    assert _cli(capsys, "verify", "m2", "--max-len", "20", "--reference")[0] == 0


def test_verify_fault_injection(capsys):
    code, _, err = _cli(capsys, "verify", "paren", "--max-len", "4", "--override", "q2,X=q0,L,L")
    assert code == 4
    assert "q0: k == p" in err


def test_verify_engine_error_without_check(capsys):
    # a mutant that loops forever, with the termination check switched off
    code, _, err = _cli(capsys, "verify", "m2", "--max-len", "2", "--checks", "oracle",
                        "--override", "q1,B=q1,B,L", "--fuel", "500")
    assert code == 3 and "ENGINE ERROR" in err
    code, _, _ = _cli(capsys, "verify", "m2", "--max-len", "2", "--checks", "variant,oracle",
                      "--override", "q1,B=q1,B,L", "--fuel", "500")
    assert code == 4


def test_verify_bad_arguments(capsys):
    assert _cli(capsys, "verify", "paren", "--max-len", "3", "--checks", "nonsense")[0] == 2
    assert _cli(capsys, "verify", "paren", "--max-len", "3", "--override", "garbage")[0] == 2
    assert _cli(capsys, "verify", "paren", "--max-len", "-1")[0] == 2


def test_equiv_combinator(capsys):
    code, out, _ = _cli(capsys, "equiv-combinator", "--max-n", "64")
    assert code == 0 and "state counts: 10 11 22 10 11 8 20 44 56" in out
    code, out, _ = _cli(capsys, "equiv-combinator", "--max-n", "0")
    assert code == 0 and "realization checks: 1" in out
    assert _cli(capsys, "equiv-combinator", "--max-n", "8", "--fault", "swap-accept-reject")[0] == 4


def test_lemmas(capsys):
    assert _cli(capsys, "lemmas", "--max-n", "2")[0] == 0
    code, _, err = _cli(capsys, "lemmas", "--max-n", "100", "--fault", "bad-even-lemma")
    assert code == 4 and "even at n=4" in err
    assert _cli(capsys, "lemmas", "--max-n", "1")[0] == 2


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "decider_lab.cli", "trace", "paren", "(()())", "--ghost", "--variant"]
    a = subprocess.run(cmd, capture_output=True)
    b = subprocess.run(cmd, capture_output=True)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stdout


def test_help_exits_zero(capsys):
    assert _cli(capsys, "--help")[0] == 0
