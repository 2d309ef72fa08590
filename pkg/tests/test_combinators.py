import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from decider_lab.combinators import (
    EXPECTED_STATE_COUNTS,
    NIL,
    UNIT,
    LabMEven0,
    LabMOdd,
    LabMSipserM2,
    LeftOf,
    MidTape,
    Move,
    Nop,
    Read,
    Relabel,
    Return,
    RightOf,
    Seq,
    Switch,
    While,
    Write,
    build_appendix_c,
    cons_from,
    encode_zeros,
    exec_machine,
    labels,
    mid,
    move,
    read_current,
    realization_check,
    realize,
    state_count,
    tape_symbols,
    write,
)
from decider_lab.tm import FuelExhausted


def test_read_current():
    assert read_current(mid([], "0", ["0", "0"])) == "0"
    assert read_current(LeftOf("0", cons_from(["0"]))) is None
    assert read_current(NIL) is None


def test_move_cases():
    assert move(mid([], "0", ["0"]), "L") == LeftOf("0", cons_from(["0"]))
    assert move(LeftOf("0", cons_from(["0"])), "R") == mid([], "0", ["0"])
    t = mid(["0"], "x", [])
    assert move(t, "N") is t
    assert move(t, "R") == RightOf("x", cons_from(["0"]))
    assert move(RightOf("x", ()), "L") == mid([], "x", [])
    assert move(NIL, "L") is NIL and move(NIL, "R") is NIL
    assert move(RightOf("x", ()), "R") == RightOf("x", ())


def test_write_cases():
    assert write(mid(["0"], "0", ["0"]), "x") == mid(["0"], "x", ["0"])
    assert write(NIL, "0") == mid([], "0", [])
    assert write(LeftOf("0", ()), "x") == mid([], "x", ["0"])
    assert write(RightOf("0", ()), "x") == mid(["0"], "x", [])
    assert read_current(write(mid([], "0", []), "x")) == "x"


def test_encode_zeros():
    assert encode_zeros(0) == NIL
    assert encode_zeros(1) == mid([], "0", [])
    assert encode_zeros(3) == mid([], "0", ["0", "0"])
    with pytest.raises(ValueError):
        encode_zeros(-1)


def test_deep_tapes_compare_and_print():
    a, b = encode_zeros(70000), encode_zeros(70000)
    assert a == b and a != encode_zeros(69999)
    assert repr(encode_zeros(2)) == "MidTape([], '0', ['0'])"
    assert len(repr(a)) > 70000


def _reachable(n, rng, length=12):
    t = encode_zeros(n)
    yield t
    for _ in range(length):
        t = write(t, rng.choice("0x")) if rng.random() < 0.3 and read_current(t) else move(t, rng.choice("LRN"))
        yield t


def test_zipper_laws_small():
    rng = random.Random(7)
    for n in range(9):
        for _ in range(30):
            for t in _reachable(n, rng):
                if read_current(t) is not None:
                    assert read_current(move(move(t, "L"), "R")) == read_current(t)
                    assert read_current(move(move(t, "R"), "L")) == read_current(t)


@given(st.integers(0, 8), st.lists(st.sampled_from("LRN"), max_size=40))
def test_moves_preserve_symbol_multiset(n, moves):
    t = mid(["x"], "0", ["0"] * n)
    before = Counter(tape_symbols(t)[0])
    for d in moves:
        t = move(t, d)
    syms, head = tape_symbols(t)
    assert Counter(syms) == before
    assert -1 <= head <= len(syms)


def test_state_counts():
    ms = build_appendix_c()
    assert {k: state_count(v) for k, v in ms.items()} == EXPECTED_STATE_COUNTS
    assert tuple(EXPECTED_STATE_COUNTS.values()) == (10, 11, 22, 10, 11, 8, 20, 44, 56)


def test_primitive_sizes():
    assert state_count(Read()) == 4
    assert state_count(Write("x")) == 2 and state_count(Move("R")) == 2 and state_count(Nop()) == 1
    assert state_count(Seq(Write("x"), Move("R"))) == 4


def test_wiring_details():
    ms = build_appendix_c()
    odd_zero = ms["MOdd"].body.branches["0"]
    assert isinstance(odd_zero, Return) and odd_zero.label is LabMOdd.ToEven
    assert isinstance(odd_zero.body, Seq)
    assert (odd_zero.body.first.symbol, odd_zero.body.second.direction) == ("x", "R")
    rewind = ms["MSipserM2"].body.branches[next(l for l in ms["MSipserM2"].body.branches if l.name == "ToRewind")]
    assert rewind.label is None and rewind.body is ms["MRewind"]


def test_label_inference():
    ms = build_appendix_c()
    assert labels(ms["MSipserM2"]) == {LabMSipserM2.Accept, LabMSipserM2.Reject}
    assert labels(ms["MEven0"]) == set(LabMEven0)
    assert labels(Read()) == {"0", "x", None}
    assert labels(Write("x")) == {UNIT}


def test_switch_must_be_total():
    with pytest.raises(ValueError):
        Switch(Read(), {"0": Nop(), None: Nop()})
    with pytest.raises(ValueError):
        Relabel(Read(), {"0": 1})


def test_exec_examples():
    ms = build_appendix_c()
    label, t = exec_machine(ms["MEven0"], mid([], "0", ["0"]), 100)
    assert label is LabMEven0.ToOdd1 and t == mid(["0"], "0", [])
    assert exec_machine(ms["MSipserM2"], encode_zeros(4), 10_000)[0] is LabMSipserM2.Accept
    assert exec_machine(ms["MSipserM2"], NIL, 10)[0] is LabMSipserM2.Reject


def test_exec_is_deterministic():
    m = build_appendix_c()["MSipserM2"]
    assert exec_machine(m, encode_zeros(12), 10_000) == exec_machine(m, encode_zeros(12), 10_000)


def test_exec_fuel():
    m = While(Return(None, Nop()))
    with pytest.raises(FuelExhausted):
        exec_machine(m, NIL, 50)
    with pytest.raises(ValueError):
        exec_machine(m, NIL, 0)


def test_exec_on_crossed_input_still_runs():
    m = build_appendix_c()["MSipserM2"]
    label, _ = exec_machine(m, mid([], "x", ["0"]), 1000)
    assert label is LabMSipserM2.Reject


@pytest.mark.parametrize("n,want", [(0, "Reject"), (1, "Accept"), (1023, "Reject"), (1024, "Accept")])
def test_realization_examples(n, want):
    r = realize(n)
    assert r.passed and r.label.name == want
    assert r.stats.overflow_writes == 0


def test_realization_exhaustive_to_256():
    assert all(realization_check(n) for n in range(257))


def test_swapped_labels_fail():
    bad = build_appendix_c("swap-accept-reject")["MSipserM2"]
    assert not realization_check(4, machine=bad)
    assert not realization_check(3, machine=bad)
    with pytest.raises(ValueError):
        build_appendix_c("no-such-fault")
