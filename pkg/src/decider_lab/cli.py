"""``decider-lab`` command line.

Exit codes: 0 accept / all checks passed, 1 reject, 2 bad input or usage,
3 engine error (dead transition, tape overrun, fuel exhausted, crash),
4 at least one violated check.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Iterator, Optional, Sequence

from .checks import accumulated_invariant_check
from .combinators import (
    EXPECTED_STATE_COUNTS,
    FAULTS,
    MACHINE_NAMES,
    build_appendix_c,
    realize,
    state_count,
)
from .ghost_m2 import M2Ghost, m2_ghost_update, m2_variant
from .ghost_paren import ParenGhost, paren_ghost_update, paren_variant
from .machines import glyphs_for, machine_by_name
from .oracles import POWER_LEMMAS, check_power_lemmas, is_power_of_2, left_minus_right, never_more_right_than_left
from .tm import LEFT, RIGHT, MachineDef, MachineError, default_fuel, run, trace
from .variants import render_variant
from .verify import ALL_CHECKS, paren_words, verify_m2, verify_paren

FUEL_ENV = "DECIDER_LAB_FUEL"
EXIT_ACCEPT, EXIT_REJECT, EXIT_USAGE, EXIT_ENGINE, EXIT_VIOLATION = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


# -- rendering ----------------------------------------------------------------

def render_tape(tape: Sequence[str], head: int, glyphs: dict) -> str:
    cells = [glyphs.get(a, "?") for a in tape]
    if head < len(cells):
        cells[head] = f"[{cells[head]}]"
    else:
        cells.append("[]")
    return "|" + "".join(cells) + "|"


def _ghost_fields(ghost, glyphs) -> dict:
    if isinstance(ghost, ParenGhost):
        return {"k": ghost.k, "s": ghost.s, "s'": ghost.s_p, "k'": ghost.k_p, "lp": ghost.lp, "rp": ghost.rp}
    snap = None if ghost.snap is None else "".join(glyphs.get(a, "?") for a in ghost.snap)
    return {"snap": snap}


def trace_records(
    m: MachineDef,
    word: str,
    fuel: Optional[int] = None,
    with_ghost: bool = False,
    with_variant: bool = False,
) -> Iterator[dict]:
    """One record per configuration, the halting one included."""
    glyphs = glyphs_for(m)
    is_paren = m.name.startswith("paren")
    ghost = ParenGhost() if is_paren else M2Ghost()
    prev = None
    for c in trace(m, word, fuel):
        if prev is not None:
            event = (prev.state, prev.tape[prev.head])
            ghost = paren_ghost_update(event, ghost) if is_paren else m2_ghost_update(event, ghost, c.tape)
        rec = {"step": c.steps, "state": c.state, "head": c.head, "tape": render_tape(c.tape, c.head, glyphs)}
        if with_ghost:
            rec["ghost"] = _ghost_fields(ghost, glyphs)
        if with_variant:
            v = paren_variant(c, ghost, word) if is_paren else m2_variant(c, ghost, word)
            rec["variant"] = render_variant(v)
        yield rec
        prev = c


def format_text(rec: dict) -> str:
    line = f"{rec['step']:4d} {rec['state']:<6} p={rec['head']} {rec['tape']}"
    if "ghost" in rec:
        parts = [f"{k}={'-' if v is None else v}" for k, v in rec["ghost"].items()]
        line += "  " + " ".join(parts)
    if "variant" in rec:
        line += "  v=" + rec["variant"]
    return line


# -- argument helpers -----------------------------------------------------------

def _int_list(text: str) -> list:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def _natural(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _fuel(args, n: int) -> int:
    if args.fuel is not None:
        if args.fuel <= 0:
            raise UsageError("--fuel must be positive")
        return args.fuel
    env = os.environ.get(FUEL_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise UsageError(f"{FUEL_ENV}={env!r} is not an integer")
        if value <= 0:
            raise UsageError(f"{FUEL_ENV} must be positive")
        return value
    return default_fuel(n)


def _fuel_override(args) -> Optional[int]:
    """Explicit fuel for suites, or None for the per-input default."""
    if args.fuel is None and not os.environ.get(FUEL_ENV):
        return None
    return _fuel(args, 0)


def _input_word(args) -> str:
    if args.machine == "m2":
        if args.n is not None and args.input is not None:
            raise UsageError("give either an input word or --n, not both")
        if args.n is not None:
            return "0" * args.n
    elif args.n is not None:
        raise UsageError("--n applies to m2 only")
    word = args.input if args.input is not None else ""
    m = machine_by_name(args.machine)
    bad = sorted(set(word) - set(m.input_alphabet))
    if bad:
        raise UsageError(f"symbols {bad} are not in the input alphabet {sorted(m.input_alphabet)}")
    return word


def _parse_override(text: str):
    """``STATE,SYM=NEXT,WRITE,MOVE`` with symbols as table names (B, L, R, X, S, Z)."""
    try:
        lhs, rhs = text.split("=")
        state, sym = lhs.split(",")
        nxt, w, d = rhs.split(",")
    except ValueError:
        raise UsageError(f"override {text!r} is not STATE,SYM=NEXT,WRITE,MOVE")
    if d not in (LEFT, RIGHT):
        raise UsageError(f"override move must be {LEFT} or {RIGHT}")
    return state.strip(), sym.strip(), (nxt.strip(), w.strip(), d)


# -- commands -------------------------------------------------------------------

def cmd_run(args) -> int:
    word = _input_word(args)
    m = machine_by_name(args.machine)
    r = run(m, word, fuel=_fuel(args, len(word)))
    bound = "2n+1" if args.machine == "paren" else "n+1"
    print(r.decision)
    print(f"steps: {r.steps}")
    print(f"max head: {r.max_head}")
    print(f"tape: {len(r.final.tape)} squares ({bound} with n={len(word)})")
    return EXIT_ACCEPT if r.decision == "accept" else EXIT_REJECT


def cmd_trace(args) -> int:
    word = _input_word(args)
    m = machine_by_name(args.machine)
    states = None if args.states is None else set(args.states.split(","))
    out = sys.stdout
    for rec in trace_records(m, word, _fuel(args, len(word)), args.ghost, args.variant):
        if states is not None and rec["state"] not in states:
            continue
        if args.format == "json":
            out.write(json.dumps(rec) + "\n")
        else:
            out.write(format_text(rec) + "\n")
    out.flush()
    return EXIT_ACCEPT


def cmd_verify(args) -> int:
    checks = tuple(c for c in args.checks.split(",") if c)
    unknown = set(checks) - set(ALL_CHECKS)
    if unknown:
        raise UsageError(f"unknown checks {sorted(unknown)}; choose from {','.join(ALL_CHECKS)}")
    m = machine_by_name(args.machine)
    for text in args.override or ():
        state, sym, target = _parse_override(text)
        try:
            m = m.with_transition(state, sym, target)
        except ValueError as e:
            raise UsageError(f"override {text!r}: {e}")
    fuel = _fuel_override(args)
    if args.machine == "paren":
        if args.sample:
            raise UsageError("--sample applies to m2 only")
        report = verify_paren(args.max_len, checks, machine=m, fuel=fuel)
    else:
        report = verify_m2(args.max_len, args.sample or (), checks, machine=m, fuel=fuel, reference=args.reference)
    print(f"machine: {report.machine}")
    print(f"checks: {','.join(report.checks)}")
    print(f"runs: {report.runs}  configurations: {report.configs}  variant comparisons: {report.variant_checks}")
    print(f"accept: {report.accepted}  reject: {report.rejected}")
    if report.reject_routes:
        print("reject routes: " + "  ".join(f"{k}={v}" for k, v in sorted(report.reject_routes.items())))
    if report.lemmas:
        print("lemma checks: " + "  ".join(f"{k}={v}" for k, v in sorted(report.lemmas.items())))
    print(f"violations: {len(report.violations)}  engine errors: {len(report.engine_errors)}")
    for label, v in report.violations[: args.max_report]:
        print(f"VIOLATION {label!r}: {v}", file=sys.stderr)
    for label, msg in report.engine_errors[: args.max_report]:
        print(f"ENGINE ERROR {label!r}: {msg}", file=sys.stderr)
    return report.exit_code()


def cmd_equiv_combinator(args) -> int:
    machines = build_appendix_c(args.fault)
    counts = [state_count(machines[name]) for name in MACHINE_NAMES]
    print("state counts: " + " ".join(map(str, counts)))
    failed = 0
    for name, count in zip(MACHINE_NAMES, counts):
        if count != EXPECTED_STATE_COUNTS[name]:
            failed += 1
            print(f"MISMATCH state count {name}: expected {EXPECTED_STATE_COUNTS[name]}, got {count}", file=sys.stderr)
    ns = list(range(args.max_n + 1)) + [n for n in (args.sample or ()) if n > args.max_n]
    fuel = _fuel_override(args)
    checked = 0
    for n in ns:
        r = realize(n, fuel, machines["MSipserM2"])
        checked += 1
        if not r.passed:
            failed += 1
            if failed <= args.max_report:
                label = None if r.label is None else r.label.name
                print(
                    f"MISMATCH n={n}: combinator={label} expected={r.expected.name} "
                    f"monolithic={r.monolithic} error={r.error}",
                    file=sys.stderr,
                )
    print(f"realization checks: {checked}  failures: {failed}")
    return EXIT_VIOLATION if failed else EXIT_ACCEPT


def _bad_even_lemma(n: int) -> bool:
    # deliberately wrong: compares with n-1 instead of n/2
    if n % 2 != 0 or n == 0:
        return True
    return is_power_of_2(n) == is_power_of_2(n - 1)


LEMMA_FAULTS = ("bad-even-lemma",)


def cmd_lemmas(args) -> int:
    if args.max_n < 2:
        raise UsageError("--max-n must be at least 2")
    lemmas = dict(POWER_LEMMAS)
    if args.fault == "bad-even-lemma":
        lemmas["even"] = _bad_even_lemma
    report = check_power_lemmas(args.max_n, lemmas)
    status = 0
    if report.passed:
        print(f"power lemmas: {', '.join(report.checked)} hold for n = 0..{args.max_n}")
    else:
        name, n = report.counterexample
        print(f"COUNTEREXAMPLE lemma {name} at n={n}", file=sys.stderr)
        status = EXIT_VIOLATION
    m = machine_by_name("paren")
    traces = bad = 0
    for w in paren_words(args.max_len):
        entries = []
        k_of = _paren_k_tracker(w)
        run(m, w, observer=lambda c: entries.append(k_of(c)))
        traces += 1
        if not accumulated_invariant_check(entries):
            bad += 1
            if bad <= args.max_report:
                print(f"COUNTEREXAMPLE accumulated invariant on {w!r}", file=sys.stderr)
    print(f"accumulated invariant: {traces} traces, {bad} failures")
    if bad:
        status = EXIT_VIOLATION
    return status


def _paren_k_tracker(word: str):
    state = {"g": ParenGhost(), "prev": None}

    def entry(c):
        if state["prev"] is not None:
            state["g"] = paren_ghost_update(state["prev"], state["g"])
        state["prev"] = (c.state, c.tape[c.head] if c.head < len(c.tape) else None)
        k = state["g"].k
        return (k, left_minus_right(word, k) >= 0, never_more_right_than_left(word, k))

    return entry


# -- entry point ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="decider-lab", description="Run and check two small Turing-machine deciders.")
    sub = p.add_subparsers(dest="command", required=True)

    def machine_args(sp):
        sp.add_argument("machine", choices=("paren", "m2"))
        sp.add_argument("input", nargs="?", help="input word; for m2 a string of 0s")
        sp.add_argument("--n", type=_natural, help="m2 only: use 0^N as input")
        sp.add_argument("--fuel", type=int, help=f"step budget (default 100*(n+2)^2, or ${FUEL_ENV})")

    sp = sub.add_parser("run", help="run a machine and print its decision")
    machine_args(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("trace", help="print every configuration of a run")
    machine_args(sp)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--ghost", action="store_true", help="append ghost variables")
    sp.add_argument("--variant", action="store_true", help="append the termination measure")
    sp.add_argument("--states", help="comma-separated states to print (default: all)")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("verify", help="check all inputs up to a bound")
    sp.add_argument("machine", choices=("paren", "m2"))
    sp.add_argument("--max-len", type=_natural, required=True, help="max word length (paren) or max n (m2)")
    sp.add_argument("--checks", default=",".join(ALL_CHECKS))
    sp.add_argument("--sample", type=_int_list, help="m2 only: extra values of n")
    sp.add_argument("--override", action="append", metavar="STATE,SYM=NEXT,WRITE,MOVE",
                    help="replace one table entry before checking (fault injection)")
    sp.add_argument("--reference", action="store_true", help="m2: use the literal O(n)-per-step checker")
    sp.add_argument("--max-report", type=_natural, default=20)
    sp.add_argument("--fuel", type=int)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("equiv-combinator", help="compare the combinator machine with the monolithic one")
    sp.add_argument("--max-n", type=_natural, required=True)
    sp.add_argument("--sample", type=_int_list)
    sp.add_argument("--fault", choices=FAULTS)
    sp.add_argument("--max-report", type=_natural, default=20)
    sp.add_argument("--fuel", type=int)
    sp.set_defaults(func=cmd_equiv_combinator)

    sp = sub.add_parser("lemmas", help="brute-force the power-of-two lemmas and the accumulated invariant")
    sp.add_argument("--max-n", type=_natural, required=True)
    sp.add_argument("--max-len", type=_natural, default=10, help="max parenthesis word length for the trace check")
    sp.add_argument("--fault", choices=LEMMA_FAULTS)
    sp.add_argument("--max-report", type=_natural, default=20)
    sp.set_defaults(func=cmd_lemmas)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except MachineError as e:
        print(f"engine error: {e}", file=sys.stderr)
        return EXIT_ENGINE
    except BrokenPipeError:
        # e.g. `trace ... | head`; output already went where it was wanted
        try:
            sys.stdout = open(os.devnull, "w")
        except OSError:
            pass
        return EXIT_ACCEPT
    except Exception as e:  # noqa: BLE001 - the exit-code contract is total
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
