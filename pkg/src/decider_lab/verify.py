"""Exhaustive verification suites over all small inputs of both machines."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .checks import Violation
from .ghost_m2 import M2Harness, M2Monitor
from .ghost_paren import ParenHarness
from .machines import S, parentheses_machine, sipser_m2_machine
from .oracles import (
    cfg_member,
    is_power_of_2,
    is_power_of_2_by_search,
    left_minus_right,
    never_more_right_than_left,
    oracle_parentheses,
    oracle_sipser_m2,
)
from .tm import ACCEPT, REJECT, DeadTransition, FuelExhausted, MachineDef, TapeOverrun, run

ALL_CHECKS = ("invariants", "variant", "bounds", "final", "oracle", "dead")

# which check an engine error falsifies
_ERROR_CHECK = {DeadTransition: "dead", TapeOverrun: "bounds", FuelExhausted: "variant"}


@dataclass
class SuiteReport:
    machine: str
    checks: tuple
    runs: int = 0
    configs: int = 0
    accepted: int = 0
    rejected: int = 0
    variant_checks: int = 0
    violations: list = field(default_factory=list)  # (input, Violation)
    engine_errors: list = field(default_factory=list)  # (input, message)
    reject_routes: Counter = field(default_factory=Counter)
    lemmas: Counter = field(default_factory=Counter)
    lemma_runs: Counter = field(default_factory=Counter)

    @property
    def passed(self) -> bool:
        return not self.violations and not self.engine_errors

    def exit_code(self) -> int:
        if self.violations:
            return 4
        if self.engine_errors:
            return 3
        return 0


def paren_words(max_len: int) -> Iterable[str]:
    """All words up to ``max_len``: by length, then lexicographic with ( < )."""
    for n in range(max_len + 1):
        for w in itertools.product("()", repeat=n):
            yield "".join(w)


def _engine_error(report: SuiteReport, label: str, err: Exception, step: int) -> None:
    check = next((c for t, c in _ERROR_CHECK.items() if isinstance(err, t)), None)
    if check is not None and check in report.checks:
        state = getattr(err, "state", "-")
        report.violations.append((label, Violation(step, state, f"{check}: {type(err).__name__}", "none", str(err))))
    else:
        report.engine_errors.append((label, str(err)))


def _oracle_paren(word: str, decision: str) -> list:
    n = len(word)
    c1_c2 = left_minus_right(word, n) == 0 and never_more_right_than_left(word, n)
    votes = {
        "oracle": oracle_parentheses(word),
        "C1 && C2": ACCEPT if c1_c2 else REJECT,
        "cfg_member": ACCEPT if cfg_member(word) else REJECT,
    }
    return [f"oracle: decision == {k}" for k, v in votes.items() if v != decision]


def verify_paren(
    max_len: int,
    checks: Sequence[str] = ALL_CHECKS,
    machine: Optional[MachineDef] = None,
    fuel: Optional[int] = None,
    words: Optional[Iterable[str]] = None,
) -> SuiteReport:
    m = machine or parentheses_machine()
    checks = tuple(checks)
    report = SuiteReport("paren", checks)
    for w in paren_words(max_len) if words is None else words:
        report.runs += 1
        h = ParenHarness(w, invariants="invariants" in checks, variant="variant" in checks)
        try:
            r = run(m, w, fuel=fuel, observer=h)
        except (DeadTransition, TapeOverrun, FuelExhausted) as e:
            report.violations.extend((w, v) for v in h.violations)
            _engine_error(report, w, e, h.configs)
            report.configs += h.configs
            continue
        h.finish(r, final="final" in checks)
        report.configs += h.configs
        report.variant_checks += h.variant_checks
        report.violations.extend((w, v) for v in h.violations)
        if r.decision == ACCEPT:
            report.accepted += 1
        else:
            report.rejected += 1
            report.reject_routes[h.reject_route or "none"] += 1
        if "bounds" in checks:
            n, size = len(w), len(r.final.tape)
            want = n if h.reject_route == "via q4" else n + 1
            if r.final.head != want:
                report.violations.append(
                    (w, Violation(r.steps, r.final.state, "bounds: final head", str(want), str(r.final.head)))
                )
            if r.max_head > size:
                report.violations.append(
                    (w, Violation(r.steps, r.final.state, "bounds: max head <= t.Length", str(size), str(r.max_head)))
                )
        if "oracle" in checks:
            for clause in _oracle_paren(w, r.decision):
                report.violations.append((w, Violation(r.steps, r.final.state, clause, "agree", r.decision)))
    return report


def m2_inputs(max_n: int, samples: Sequence[int] = ()) -> list:
    ns = list(range(max_n + 1))
    ns.extend(n for n in samples if n > max_n)
    return ns


def verify_m2(
    max_n: int,
    samples: Sequence[int] = (),
    checks: Sequence[str] = ALL_CHECKS,
    machine: Optional[MachineDef] = None,
    fuel: Optional[int] = None,
    reference: bool = False,
) -> SuiteReport:
    """Run 0^n for n = 0..max_n plus ``samples``.

    ``reference`` swaps the incremental monitor for the literal checker,
    which is only affordable for small n.
    """
    m = machine or sipser_m2_machine()
    checks = tuple(checks)
    report = SuiteReport("m2", checks)
    harness_cls = M2Harness if reference else M2Monitor
    for n in m2_inputs(max_n, samples):
        label = f"0^{n}"
        report.runs += 1
        h = harness_cls(n, invariants="invariants" in checks, variant="variant" in checks)
        try:
            r = run(m, "0" * n, fuel=fuel, observer=h)
        except (DeadTransition, TapeOverrun, FuelExhausted) as e:
            report.violations.extend((label, v) for v in h.violations)
            _engine_error(report, label, e, h.configs)
            report.configs += h.configs
            continue
        report.configs += h.configs
        report.variant_checks += h.variant_checks
        if "invariants" in checks:
            report.violations.extend((label, v) for v in h.violations)
        else:
            report.violations.extend((label, v) for v in h.violations if v.clause.startswith("variant"))
        for name, count in h.lemmas.items():
            report.lemmas[name] += count
            if count:
                report.lemma_runs[name] += 1
        if r.decision == ACCEPT:
            report.accepted += 1
        else:
            report.rejected += 1
        if "bounds" in checks:
            if r.final.head != n + 1:
                report.violations.append(
                    (label, Violation(r.steps, r.final.state, "bounds: final head", str(n + 1), str(r.final.head)))
                )
            if r.max_head > n + 1:
                report.violations.append(
                    (label, Violation(r.steps, r.final.state, "bounds: max head <= t.Length", str(n + 1), str(r.max_head)))
                )
        if "oracle" in checks:
            want = {
                "oracle": oracle_sipser_m2(n),
                "isPowerOf2": is_power_of_2(n),
                "power search": is_power_of_2_by_search(n),
            }
            for k, v in want.items():
                if (r.decision == ACCEPT) != v:
                    report.violations.append(
                        (label, Violation(r.steps, r.final.state, f"oracle: decision == {k}", str(v), r.decision))
                    )
    return report


def max_stack_index(word: str, machine: Optional[MachineDef] = None) -> int:
    """Largest tape index ever holding a stack symbol during the run (-1 if none)."""
    best = [-1]

    def watch(c):
        for i in range(len(c.tape) - 1, best[0], -1):
            if c.tape[i] == S:
                best[0] = i
                break

    run(machine or parentheses_machine(), word, observer=watch)
    return best[0]
