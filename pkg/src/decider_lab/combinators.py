"""Labelled machine combinators over a symmetric zipper tape.

Machines are immutable trees (Read, Write, Move, Nop, Seq, Switch, While,
Return, Relabel) whose halting outcome is a label. ``None`` stands for the
absent label: it is what Read returns on an overflow position, and a While
body returning it asks for another iteration. Every other label is a member
of some :class:`enum.Enum`, or :data:`UNIT` for the primitives.

The tape uses cons lists, ``()`` for empty and ``(head, tail)`` otherwise,
so a move allocates one cell. Deeply nested tuples would overflow the C
recursion guard in ``==`` and ``repr``, hence the explicit versions below.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Mapping, NamedTuple, Optional

from .tm import FuelExhausted

SIGMA = ("0", "x")


class Unit(Enum):
    TT = "tt"


UNIT = Unit.TT


# -- cons lists ---------------------------------------------------------------

def cons_from(seq) -> tuple:
    out: tuple = ()
    for a in reversed(list(seq)):
        out = (a, out)
    return out


def cons_to_list(cell: tuple) -> list:
    out = []
    while cell:
        out.append(cell[0])
        cell = cell[1]
    return out


def _cons_equal(a: tuple, b: tuple) -> bool:
    while a and b:
        if a[0] != b[0]:
            return False
        a, b = a[1], b[1]
    return not a and not b


# -- zipper tape --------------------------------------------------------------

class NilTape(NamedTuple):
    def __repr__(self) -> str:
        return "NilTape()"


class LeftOf(NamedTuple):
    """Head one square left of the used tape; ``sym`` is the leftmost symbol."""

    sym: str
    right: tuple

    def __eq__(self, other):
        return type(other) is LeftOf and self.sym == other.sym and _cons_equal(self.right, other.right)

    def __ne__(self, other):
        return not self == other

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"LeftOf({self.sym!r}, {cons_to_list(self.right)!r})"


class RightOf(NamedTuple):
    """Head one square right of the used tape; ``sym`` is the rightmost symbol."""

    sym: str
    left: tuple

    def __eq__(self, other):
        return type(other) is RightOf and self.sym == other.sym and _cons_equal(self.left, other.left)

    def __ne__(self, other):
        return not self == other

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"RightOf({self.sym!r}, {cons_to_list(self.left)!r})"


class MidTape(NamedTuple):
    left: tuple  # nearest first
    cur: str
    right: tuple  # nearest first

    def __eq__(self, other):
        return (
            type(other) is MidTape
            and self.cur == other.cur
            and _cons_equal(self.left, other.left)
            and _cons_equal(self.right, other.right)
        )

    def __ne__(self, other):
        return not self == other

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"MidTape({cons_to_list(self.left)!r}, {self.cur!r}, {cons_to_list(self.right)!r})"


NIL = NilTape()


def mid(left, cur, right) -> MidTape:
    """Build a MidTape from plain sequences (both nearest-first)."""
    return MidTape(cons_from(left), cur, cons_from(right))


def read_current(t) -> Optional[str]:
    return t.cur if type(t) is MidTape else None


def move(t, d: str):
    if d == "N":
        return t
    kind = type(t)
    if d == "R":
        if kind is MidTape:
            rs = t.right
            if rs:
                return MidTape((t.cur, t.left), rs[0], rs[1])
            return RightOf(t.cur, t.left)
        if kind is LeftOf:
            return MidTape((), t.sym, t.right)
        return t
    if d == "L":
        if kind is MidTape:
            ls = t.left
            if ls:
                return MidTape(ls[1], ls[0], (t.cur, t.right))
            return LeftOf(t.cur, t.right)
        if kind is RightOf:
            return MidTape(t.left, t.sym, ())
        return t
    raise ValueError(f"bad direction {d!r}")


def write(t, s: str):
    kind = type(t)
    if kind is MidTape:
        return MidTape(t.left, s, t.right)
    if kind is LeftOf:
        return MidTape((), s, (t.sym, t.right))
    if kind is RightOf:
        return MidTape((t.sym, t.left), s, ())
    return MidTape((), s, ())


def tape_symbols(t) -> tuple:
    """(symbols left to right, head index); the head index may be -1 or len."""
    kind = type(t)
    if kind is NilTape:
        return [], 0
    if kind is LeftOf:
        return [t.sym] + cons_to_list(t.right), -1
    if kind is RightOf:
        left = cons_to_list(t.left)[::-1]
        return left + [t.sym], len(left) + 1
    left = cons_to_list(t.left)[::-1]
    return left + [t.cur] + cons_to_list(t.right), len(left)


def encode_zeros(n: int):
    if n < 0:
        raise ValueError("n must be natural")
    if n == 0:
        return NIL
    return MidTape((), "0", cons_from(["0"] * (n - 1)))


# -- machine trees --------------------------------------------------------------

class Node:
    """Base of all combinator nodes."""


@dataclass(frozen=True, eq=False)
class Read(Node):
    alphabet: tuple = SIGMA


@dataclass(frozen=True, eq=False)
class Write(Node):
    symbol: str


@dataclass(frozen=True, eq=False)
class Move(Node):
    direction: str

    def __post_init__(self):
        if self.direction not in ("L", "R", "N"):
            raise ValueError(f"bad direction {self.direction!r}")


@dataclass(frozen=True, eq=False)
class Nop(Node):
    pass


@dataclass(frozen=True, eq=False)
class Seq(Node):
    first: Node
    second: Node


@dataclass(frozen=True, eq=False)
class Switch(Node):
    body: Node
    branches: Mapping[Any, Node]

    def __post_init__(self):
        missing = labels(self.body) - set(self.branches)
        if missing:
            raise ValueError(f"Switch branch map misses labels {sorted(map(str, missing))}")


@dataclass(frozen=True, eq=False)
class While(Node):
    body: Node


@dataclass(frozen=True, eq=False)
class Return(Node):
    label: Any
    body: Node


@dataclass(frozen=True, eq=False)
class Relabel(Node):
    body: Node
    mapping: Mapping[Any, Any] = field(default_factory=dict)

    def __post_init__(self):
        missing = labels(self.body) - set(self.mapping)
        if missing:
            raise ValueError(f"Relabel map misses labels {sorted(map(str, missing))}")


def labels(m: Node) -> frozenset:
    """Labels ``m`` can halt with, by structural inference."""
    if isinstance(m, Read):
        return frozenset(m.alphabet) | {None}
    if isinstance(m, (Write, Move, Nop)):
        return frozenset({UNIT})
    if isinstance(m, Seq):
        return labels(m.second)
    if isinstance(m, Switch):
        out: frozenset = frozenset()
        for branch in m.branches.values():
            out |= labels(branch)
        return out
    if isinstance(m, While):
        return labels(m.body) - {None}
    if isinstance(m, Return):
        return frozenset({m.label})
    if isinstance(m, Relabel):
        return frozenset(m.mapping[l] for l in labels(m.body))
    raise TypeError(f"not a machine: {m!r}")


def state_count(m: Node) -> int:
    if isinstance(m, Read):
        return len(m.alphabet) + 2
    if isinstance(m, (Write, Move)):
        return 2
    if isinstance(m, Nop):
        return 1
    if isinstance(m, Seq):
        return state_count(m.first) + state_count(m.second)
    if isinstance(m, Switch):
        return state_count(m.body) + sum(state_count(b) for b in m.branches.values())
    if isinstance(m, (While, Return, Relabel)):
        return state_count(m.body)
    raise TypeError(f"not a machine: {m!r}")


# -- interpreter ----------------------------------------------------------------

@dataclass
class ExecStats:
    primitives: int = 0
    iterations: int = 0
    overflow_writes: int = 0


def _compile(m: Node, fuel: list, stats: ExecStats) -> Callable:
    """Turn a tree into nested closures ``tape -> (label, tape)``.

    ``fuel`` is a one-element list shared by all closures; every primitive
    and every While iteration spends one unit.
    """
    if isinstance(m, Read):
        def run_read(t):
            fuel[0] -= 1
            if fuel[0] < 0:
                raise FuelExhausted(stats.primitives)
            stats.primitives += 1
            return (t.cur if type(t) is MidTape else None), t
        return run_read
    if isinstance(m, Write):
        sym = m.symbol

        def run_write(t):
            fuel[0] -= 1
            if fuel[0] < 0:
                raise FuelExhausted(stats.primitives)
            stats.primitives += 1
            if type(t) is not MidTape:
                stats.overflow_writes += 1
            return UNIT, write(t, sym)
        return run_write
    if isinstance(m, Move):
        d = m.direction

        def run_move(t):
            fuel[0] -= 1
            if fuel[0] < 0:
                raise FuelExhausted(stats.primitives)
            stats.primitives += 1
            return UNIT, move(t, d)
        return run_move
    if isinstance(m, Nop):
        return lambda t: (UNIT, t)
    if isinstance(m, Seq):
        first = _compile(m.first, fuel, stats)
        second = _compile(m.second, fuel, stats)

        def run_seq(t):
            _, t = first(t)
            return second(t)
        return run_seq
    if isinstance(m, Switch):
        body = _compile(m.body, fuel, stats)
        table = {l: _compile(b, fuel, stats) for l, b in m.branches.items()}

        def run_switch(t):
            l, t = body(t)
            return table[l](t)
        return run_switch
    if isinstance(m, While):
        body = _compile(m.body, fuel, stats)

        def run_while(t):
            while True:
                fuel[0] -= 1
                if fuel[0] < 0:
                    raise FuelExhausted(stats.primitives)
                stats.iterations += 1
                l, t = body(t)
                if l is not None:
                    return l, t
        return run_while
    if isinstance(m, Return):
        body = _compile(m.body, fuel, stats)
        label = m.label

        def run_return(t):
            _, t = body(t)
            return label, t
        return run_return
    if isinstance(m, Relabel):
        body = _compile(m.body, fuel, stats)
        mapping = dict(m.mapping)

        def run_relabel(t):
            l, t = body(t)
            return mapping[l], t
        return run_relabel
    raise TypeError(f"not a machine: {m!r}")


def exec_machine(m: Node, t, fuel: int, stats: Optional[ExecStats] = None):
    """Run ``m`` on ``t``; returns ``(label, tape)``."""
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    stats = ExecStats() if stats is None else stats
    return _compile(m, [fuel], stats)(t)


# -- the nine machines ----------------------------------------------------------

LabMEven = Enum("LabMEven", "ToOdd ToRewind")
LabMOdd = Enum("LabMOdd", "ToEven ToReject")
LabMEvenOdd = Enum("LabMEvenOdd", "ToRewind ToReject")
LabMRewind = Enum("LabMRewind", "ToSipserM2Body")
LabMOdd1 = Enum("LabMOdd1", "ToEvenOdd ToAccept")
LabMEven0 = Enum("LabMEven0", "ToOdd1 ToReject")
LabMEven0Odd1 = Enum("LabMEven0Odd1", "ToEvenOdd ToAccept ToReject")
LabMEven0Odd1EvenOdd = Enum("LabMEven0Odd1EvenOdd", "ToRewind ToAccept ToReject")
LabMSipserM2 = Enum("LabMSipserM2", "Accept Reject")

MACHINE_NAMES = (
    "MEven",
    "MOdd",
    "MEvenOdd",
    "MRewind",
    "MOdd1",
    "MEven0",
    "MEven0Odd1",
    "MEven0Odd1EvenOdd",
    "MSipserM2",
)
EXPECTED_STATE_COUNTS = dict(zip(MACHINE_NAMES, (10, 11, 22, 10, 11, 8, 20, 44, 56)))

FAULTS = ("swap-accept-reject",)


def _write_move(sym: str, d: str) -> Node:
    return Seq(Write(sym), Move(d))


def build_appendix_c(fault: Optional[str] = None) -> dict:
    """The nine machines, wired branch for branch; ``fault`` plants a bug."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")

    m_even = While(Switch(Read(), {
        "0": Return(LabMEven.ToOdd, Move("R")),
        "x": Return(None, Move("R")),
        None: Return(LabMEven.ToRewind, Move("L")),
    }))
    m_odd = While(Switch(Read(), {
        "0": Return(LabMOdd.ToEven, _write_move("x", "R")),
        "x": Return(None, Move("R")),
        None: Return(LabMOdd.ToReject, Nop()),
    }))
    m_even_odd = While(Switch(m_even, {
        LabMEven.ToOdd: Relabel(m_odd, {
            LabMOdd.ToEven: None,
            LabMOdd.ToReject: LabMEvenOdd.ToReject,
        }),
        LabMEven.ToRewind: Return(LabMEvenOdd.ToRewind, Nop()),
    }))
    m_rewind = While(Switch(Read(), {
        "0": Return(None, Move("L")),
        "x": Return(None, Move("L")),
        None: Return(LabMRewind.ToSipserM2Body, Move("R")),
    }))
    m_odd1 = While(Switch(Read(), {
        "0": Return(LabMOdd1.ToEvenOdd, _write_move("x", "R")),
        "x": Return(None, Move("R")),
        None: Return(LabMOdd1.ToAccept, Nop()),
    }))
    m_even0 = Switch(Read(), {
        "0": Return(LabMEven0.ToOdd1, Move("R")),
        "x": Return(LabMEven0.ToReject, Nop()),
        None: Return(LabMEven0.ToReject, Nop()),
    })
    m_even0_odd1 = Switch(m_even0, {
        LabMEven0.ToOdd1: Relabel(m_odd1, {
            LabMOdd1.ToEvenOdd: LabMEven0Odd1.ToEvenOdd,
            LabMOdd1.ToAccept: LabMEven0Odd1.ToAccept,
        }),
        LabMEven0.ToReject: Return(LabMEven0Odd1.ToReject, Nop()),
    })
    m_044 = Switch(m_even0_odd1, {
        LabMEven0Odd1.ToEvenOdd: Relabel(m_even_odd, {
            LabMEvenOdd.ToRewind: LabMEven0Odd1EvenOdd.ToRewind,
            LabMEvenOdd.ToReject: LabMEven0Odd1EvenOdd.ToReject,
        }),
        LabMEven0Odd1.ToAccept: Return(LabMEven0Odd1EvenOdd.ToAccept, Nop()),
        LabMEven0Odd1.ToReject: Return(LabMEven0Odd1EvenOdd.ToReject, Nop()),
    })
    accept, reject = LabMSipserM2.Accept, LabMSipserM2.Reject
    if fault == "swap-accept-reject":
        accept, reject = reject, accept
    m_sipser = While(Switch(m_044, {
        LabMEven0Odd1EvenOdd.ToRewind: Return(None, m_rewind),
        LabMEven0Odd1EvenOdd.ToAccept: Return(accept, Nop()),
        LabMEven0Odd1EvenOdd.ToReject: Return(reject, Nop()),
    }))
    machines = (m_even, m_odd, m_even_odd, m_rewind, m_odd1, m_even0, m_even0_odd1, m_044, m_sipser)
    return dict(zip(MACHINE_NAMES, machines))


# -- realization ------------------------------------------------------------------

@dataclass
class Realization:
    n: int
    label: Any
    expected: Any
    monolithic: Optional[str]
    stats: ExecStats
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        if self.error is not None or self.label != self.expected:
            return False
        if self.stats.overflow_writes:
            return False
        want = "accept" if self.expected is LabMSipserM2.Accept else "reject"
        return self.monolithic == want


def realize(n: int, fuel: Optional[int] = None, machine: Optional[Node] = None) -> Realization:
    """Run the combinator machine on 0^n and compare with both references."""
    from .machines import sipser_m2_machine
    from .oracles import is_power_of_2
    from .tm import MachineError, default_fuel, run

    if machine is None:
        machine = build_appendix_c()["MSipserM2"]
    fuel = default_fuel(n) if fuel is None else fuel
    expected = LabMSipserM2.Accept if is_power_of_2(n) else LabMSipserM2.Reject
    stats = ExecStats()
    label, error = None, None
    try:
        label, _ = exec_machine(machine, encode_zeros(n), fuel, stats)
    except FuelExhausted as e:
        error = str(e)
    try:
        monolithic = run(sipser_m2_machine(), "0" * n).decision
    except MachineError as e:
        monolithic, error = None, error or str(e)
    return Realization(n, label, expected, monolithic, stats, error)


def realization_check(n: int, fuel: Optional[int] = None, machine: Optional[Node] = None) -> bool:
    return realize(n, fuel, machine).passed
