"""Single-tape Sipser machines over a preallocated, fixed-length tape.

The tape never grows. A machine declares how long its tape must be for an
input of length n (``tape_size``); running past the end is a hard error
(:class:`TapeOverrun`) instead of gluing on more blanks, so tape-bound claims
become checkable. The head may rest one square past the end, but only once
the machine has halted.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Optional, Sequence

LEFT = "L"
RIGHT = "R"

ACCEPT = "accept"
REJECT = "reject"

Transition = tuple  # (next_state, write_symbol, move)


class MachineError(Exception):
    """Base class for engine errors (never a normal reject)."""


class DeadTransition(MachineError):
    def __init__(self, state: str, symbol: str, head: int):
        super().__init__(f"dead transition fired: ({state}, {symbol}) at head {head}")
        self.state = state
        self.symbol = symbol
        self.head = head


class TapeOverrun(MachineError):
    def __init__(self, state: str, head: int, tape_len: int):
        super().__init__(
            f"head {head} ran off a tape of length {tape_len} in non-halting state {state}"
        )
        self.state = state
        self.head = head
        self.tape_len = tape_len


class FuelExhausted(MachineError):
    def __init__(self, fuel: int):
        super().__init__(f"no halting configuration within {fuel} steps")
        self.fuel = fuel


@dataclass(frozen=True)
class MachineDef:
    name: str
    states: frozenset
    start: str
    accept: str
    reject: str
    input_alphabet: frozenset
    tape_alphabet: frozenset
    blank: str
    transitions: Mapping[tuple, Transition]
    tape_size: Callable[[int], int] = field(compare=False)
    input_embed: Mapping[str, str] = field(compare=False)

    def __post_init__(self):
        if self.accept == self.reject:
            raise ValueError("accept and reject states must differ")
        for q in (self.start, self.accept, self.reject):
            if q not in self.states:
                raise ValueError(f"{q!r} is not a state")
        if self.blank not in self.tape_alphabet or self.blank in self.input_alphabet:
            raise ValueError("blank must be a tape symbol and not an input symbol")
        for a in self.input_alphabet:
            if self.input_embed.get(a) not in self.tape_alphabet:
                raise ValueError(f"input symbol {a!r} has no tape embedding")
        halting = {self.accept, self.reject}
        for (q, a), (nq, w, d) in self.transitions.items():
            if q in halting or q not in self.states:
                raise ValueError(f"transition from non-state or halting state {q!r}")
            if a not in self.tape_alphabet or w not in self.tape_alphabet:
                raise ValueError(f"transition ({q}, {a}) uses a foreign symbol")
            if nq not in self.states or d not in (LEFT, RIGHT):
                raise ValueError(f"transition ({q}, {a}) has a bad target")

    def is_halting(self, state: str) -> bool:
        return state == self.accept or state == self.reject

    def lookup(self, state: str, symbol: str) -> Optional[Transition]:
        """Table entry for ``(state, symbol)``, or None when the pair is dead."""
        return self.transitions.get((state, symbol))

    def dead_pairs(self) -> list:
        live = set(self.transitions)
        return sorted(
            (q, a)
            for q in self.states
            if not self.is_halting(q)
            for a in self.tape_alphabet
            if (q, a) not in live
        )

    def with_transition(self, state: str, symbol: str, target: Transition) -> "MachineDef":
        """Copy of this machine with one table entry replaced (fault injection)."""
        table = dict(self.transitions)
        table[(state, symbol)] = tuple(target)
        return MachineDef(
            name=self.name + "*",
            states=self.states,
            start=self.start,
            accept=self.accept,
            reject=self.reject,
            input_alphabet=self.input_alphabet,
            tape_alphabet=self.tape_alphabet,
            blank=self.blank,
            transitions=table,
            tape_size=self.tape_size,
            input_embed=self.input_embed,
        )


@dataclass(frozen=True)
class Configuration:
    """Control state, tape, head position and step counter.

    ``tape`` is a tuple for configurations produced by :func:`step`. Inside
    :func:`run` observers receive the live tape list instead; copy it if it
    must outlive the callback.
    """

    state: str
    tape: Sequence[str]
    head: int
    steps: int = 0

    def frozen(self) -> "Configuration":
        if isinstance(self.tape, tuple):
            return self
        return Configuration(self.state, tuple(self.tape), self.head, self.steps)


@dataclass(frozen=True)
class Continue:
    config: Configuration


@dataclass(frozen=True)
class Halted:
    config: Configuration


def check_input(m: MachineDef, word: Sequence[str]) -> None:
    bad = [a for a in word if a not in m.input_alphabet]
    if bad:
        raise ValueError(f"symbols {sorted(set(map(str, bad)))} are not in the input alphabet of {m.name}")


def start_configuration(m: MachineDef, word: Sequence[str]) -> Configuration:
    check_input(m, word)
    n = len(word)
    size = m.tape_size(n)
    tape = [m.input_embed[a] for a in word]
    tape.extend([m.blank] * (size - n))
    return Configuration(m.start, tuple(tape), 0, 0)


def step(m: MachineDef, c: Configuration):
    """One computation step: :class:`Continue` or :class:`Halted`.

    Raises :class:`DeadTransition` for an unmapped pair and
    :class:`TapeOverrun` when a running machine reads past the tape.
    """
    if m.is_halting(c.state):
        return Halted(c)
    if c.head >= len(c.tape):
        raise TapeOverrun(c.state, c.head, len(c.tape))
    symbol = c.tape[c.head]
    entry = m.transitions.get((c.state, symbol))
    if entry is None:
        raise DeadTransition(c.state, symbol, c.head)
    nq, w, d = entry
    tape = tuple(c.tape)
    tape = tape[: c.head] + (w,) + tape[c.head + 1 :]
    if d == RIGHT:
        head = c.head + 1
    else:
        head = c.head - 1 if c.head > 0 else 0
    return Continue(Configuration(nq, tape, head, c.steps + 1))


def default_fuel(n: int) -> int:
    return 100 * (n + 2) ** 2


@dataclass
class RunResult:
    decision: str
    final: Configuration
    steps: int
    max_head: int


def run(
    m: MachineDef,
    word: Sequence[str],
    fuel: Optional[int] = None,
    observer: Optional[Callable[[Configuration], None]] = None,
) -> RunResult:
    """Run ``m`` on ``word`` until it halts.

    ``observer`` sees every configuration, the final halting one included.
    It is handed the live tape list, so it must not mutate it.
    """
    check_input(m, word)
    n = len(word)
    if fuel is None:
        fuel = default_fuel(n)
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    tape = [m.input_embed[a] for a in word]
    tape.extend([m.blank] * (m.tape_size(n) - n))
    size = len(tape)
    table = m.transitions
    accept, reject = m.accept, m.reject
    q, p, steps, max_head = m.start, 0, 0, 0
    while True:
        if observer is not None:
            observer(Configuration(q, tape, p, steps))
        if q == accept or q == reject:
            break
        if steps >= fuel:
            raise FuelExhausted(fuel)
        if p >= size:
            raise TapeOverrun(q, p, size)
        a = tape[p]
        entry = table.get((q, a))
        if entry is None:
            raise DeadTransition(q, a, p)
        q, w, d = entry
        tape[p] = w
        if d == RIGHT:
            p += 1
            if p > max_head:
                max_head = p
        elif p > 0:
            p -= 1
        steps += 1
    final = Configuration(q, tuple(tape), p, steps)
    return RunResult(ACCEPT if q == accept else REJECT, final, steps, max_head)


def trace(m: MachineDef, word: Sequence[str], fuel: Optional[int] = None) -> Iterator[Configuration]:
    """Configurations of a run, produced with :func:`step` alone."""
    c = start_configuration(m, word)
    if fuel is None:
        fuel = default_fuel(len(word))
    while True:
        yield c
        if m.is_halting(c.state):
            return
        if c.steps >= fuel:
            raise FuelExhausted(fuel)
        c = step(m, c).config
