"""Acceptance criteria 1-11, each at its stated tolerance.

Each test records one PASS/FAIL line in RESULTS; conftest prints them after
the run, and ``python tests/test_acceptance.py`` prints them directly.
"""
import time
from functools import lru_cache
from pathlib import Path

from decider_lab.cli import main
from decider_lab.combinators import (
    EXPECTED_STATE_COUNTS,
    MACHINE_NAMES,
    build_appendix_c,
    realize,
    state_count,
)
from decider_lab.ghost_paren import ParenHarness
from decider_lab.machines import parentheses_machine, sipser_m2_machine
from decider_lab.oracles import (
    cfg_member,
    check_power_lemmas,
    is_power_of_2,
    left_minus_right,
    never_more_right_than_left,
    oracle_parentheses,
)
from decider_lab.checks import accumulated_invariant_check
from decider_lab.tm import run
from decider_lab.verify import max_stack_index, paren_words, verify_m2, verify_paren

GOLDEN = Path(__file__).parent / "golden"
PAREN_MAX = 14
M2_MAX = 2048
M2_SAMPLES = (4096, 16384, 65536)

RESULTS = {}


def record(key, ok, detail):
    RESULTS[key] = (bool(ok), detail)
    print(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@lru_cache(maxsize=None)
def paren_sweep():
    return verify_paren(PAREN_MAX)


@lru_cache(maxsize=None)
def m2_sweep():
    return verify_m2(M2_MAX, M2_SAMPLES)


def test_criterion_01_paren_decisions():
    m = parentheses_machine()
    t0 = time.perf_counter()
    words = mismatches = 0
    for w in paren_words(PAREN_MAX):
        words += 1
        d = run(m, w).decision
        n = len(w)
        c = "accept" if left_minus_right(w, n) == 0 and never_more_right_than_left(w, n) else "reject"
        g = "accept" if cfg_member(w) else "reject"
        if not d == oracle_parentheses(w) == c == g:
            mismatches += 1
    dt = time.perf_counter() - t0
    record(1, words == 2 ** 15 - 1 and mismatches == 0 and dt < 30,
           f"{words} words, {mismatches} mismatches, {dt:.1f}s (< 30s)")


def test_criterion_02_m2_decisions():
    m = sipser_m2_machine()
    t0 = time.perf_counter()
    ns = list(range(M2_MAX + 1)) + list(M2_SAMPLES)
    mismatches = sum((run(m, "0" * n).decision == "accept") != is_power_of_2(n) for n in ns)
    dt = time.perf_counter() - t0
    record(2, mismatches == 0 and dt < 60, f"{len(ns)} inputs, {mismatches} mismatches, {dt:.1f}s (< 60s)")


def test_criterion_03_invariants():
    p, q = paren_sweep(), m2_sweep()
    bad_p = [v for _, v in p.violations if not v.clause.startswith(("variant", "bounds", "oracle", "accept", "reject"))]
    bad_q = [v for _, v in q.violations if not v.clause.startswith(("variant", "bounds", "oracle"))]
    record(3, not bad_p and not bad_q and not p.engine_errors and not q.engine_errors,
           f"paren {p.configs} configs / m2 {q.configs} configs, violations {len(bad_p)} + {len(bad_q)}")


def test_criterion_04_variants():
    p, q = paren_sweep(), m2_sweep()
    bad = [v for r in (p, q) for _, v in r.violations if v.clause.startswith("variant")]
    pairs_ok = p.variant_checks == p.configs - p.runs and q.variant_checks == q.configs - q.runs
    record(4, not bad and pairs_ok and not p.engine_errors and not q.engine_errors,
           f"{p.variant_checks + q.variant_checks} consecutive pairs, {len(bad)} non-decreasing, no fuel exhaustion")


def test_criterion_05_tape_bounds():
    p, q = paren_sweep(), m2_sweep()
    bad = [v for r in (p, q) for _, v in r.violations if v.clause.startswith("bounds")]
    witness = {n: max_stack_index("(" * n) for n in range(1, PAREN_MAX + 1)}
    tight = all(i == 2 * n - 1 for n, i in witness.items())
    record(5, not bad and not p.engine_errors and not q.engine_errors and tight,
           f"no overrun; '('*n writes S at index 2n-1 for n=1..{PAREN_MAX}: {tight}")


def test_criterion_06_dead_transitions():
    p, q = paren_sweep(), m2_sweep()
    dead = [v for r in (p, q) for _, v in r.violations if v.clause.startswith("dead")]
    record(6, not dead and not p.engine_errors and not q.engine_errors, f"{len(dead)} dead transitions fired")


def test_criterion_07_final_tapes():
    p = paren_sweep()
    bad = [v for _, v in p.violations if v.clause.startswith(("accept", "reject", "final"))]
    exercised = p.accepted > 0 and p.reject_routes["via q4"] > 0 and p.reject_routes["via q0"] > 0
    record(7, not bad and exercised and p.reject_routes.get("none", 0) == 0,
           f"{p.accepted} accept, routes {dict(p.reject_routes)}, {len(bad)} failures")


def _trace_out(capsys, *argv):
    capsys.readouterr()
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_criterion_08_golden_traces(capsys):
    code4, out4 = _trace_out(capsys, "trace", "paren", "((")
    prefix = "".join(out4.splitlines(keepends=True)[:6]) == (GOLDEN / "open_open_prefix.txt").read_text()
    code3, out3 = _trace_out(capsys, "trace", "paren", "(())()", "--states", "q0,q_acc")
    nested = out3 == (GOLDEN / "nested_q0_snapshots.txt").read_text()
    record(8, code4 == code3 == 0 and prefix and nested, f"'((' prefix match {prefix}, '(())()' q0 snapshots match {nested}")


def test_criterion_09_state_counts():
    ms = build_appendix_c()
    counts = tuple(state_count(ms[name]) for name in MACHINE_NAMES)
    record(9, counts == (10, 11, 22, 10, 11, 8, 20, 44, 56) == tuple(EXPECTED_STATE_COUNTS.values()),
           "counts " + " ".join(map(str, counts)))


def test_criterion_10_combinator_equivalence():
    machine = build_appendix_c()["MSipserM2"]
    t0 = time.perf_counter()
    ns = list(range(1025)) + [4095, 4096, 65536]
    failed = [n for n in ns if not realize(n, machine=machine).passed]
    dt = time.perf_counter() - t0
    record(10, not failed and dt < 60, f"{len(ns)} inputs, failures {failed[:5]}, {dt:.1f}s (< 60s)")


def test_criterion_11_lemmas():
    lemmas = check_power_lemmas(2 ** 16)
    m = parentheses_machine()
    traces_ok = True
    for w in paren_words(10):
        h = ParenHarness(w, invariants=False, variant=False)
        run(m, w, observer=h)
        traces_ok = traces_ok and accumulated_invariant_check(h.acc_trace)
    q = m2_sweep()
    runs_n_ge_2 = q.runs - 2
    runs_n_ge_1 = q.runs - 1
    lemma_bad = [v for _, v in q.violations if v.clause.startswith("lemma")]
    fired = (
        q.lemma_runs["write_locality"] == runs_n_ge_2
        and q.lemma_runs["num_zeroes"] == runs_n_ge_1
        and q.lemma_runs["only_zeroes"] == runs_n_ge_1
    )
    record(11, lemmas.passed and traces_ok and fired and not lemma_bad,
           f"power lemmas to 2^16 {lemmas.passed}; accumulated traces {traces_ok}; "
           f"lemma firings {dict(q.lemmas)} over {q.runs} runs, {len(lemma_bad)} failures")


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q"]))
