"""Ghost state, invariants and termination measure for the parentheses machine.

The ghost counters follow the edge annotations of the state diagram:

* ``k``   parentheses fully handled (the marking symbol's position),
* ``s``   stack symbols currently on the tape,
* ``lp``/``rp`` left/right parentheses seen by the head,
* ``s_p`` = lp - rp and ``k_p`` = lp + rp.

Every check returns a list of :class:`~decider_lab.checks.Violation`;
nothing here raises on a failed clause.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Optional, Sequence

from .checks import Violation, accumulated_invariant_check
from .machines import B, L, R, S, X
from .oracles import left_minus_right, never_more_right_than_left
from .tm import Configuration, RunResult

LP, RP = "(", ")"
_EMBED = {LP: L, RP: R}


@dataclass(frozen=True)
class ParenGhost:
    k: int = 0
    s: int = 0
    s_p: int = 0
    k_p: int = 0
    lp: int = 0
    rp: int = 0


def paren_ghost_update(event: tuple, g: ParenGhost) -> ParenGhost:
    """Apply the ghost action attached to the edge taken on ``(state, read)``."""
    state, symbol = event
    if state == "q0":
        if symbol == L:
            return replace(g, lp=g.lp + 1, k_p=g.k_p + 1, s_p=g.s_p + 1)
        if symbol == R:
            return replace(g, rp=g.rp + 1, k_p=g.k_p + 1, s_p=g.s_p - 1)
    elif state == "q1":
        if symbol == B:
            return replace(g, s=g.s + 1)
    elif state == "q2":
        if symbol == X:
            return replace(g, k=g.k + 1)
    elif state == "q4":
        if symbol == S:
            return replace(g, s=g.s - 1)
    elif state == "q5":
        if symbol == X:
            return replace(g, k=g.k + 1)
    return g


@lru_cache(maxsize=8192)
def _word_tables(word: str):
    emb = tuple(_EMBED[a] for a in word)
    deltas = tuple(left_minus_right(word, i) for i in range(len(word) + 1))
    thetas = tuple(never_more_right_than_left(word, i) for i in range(len(word) + 1))
    return emb, deltas, thetas


def _stack_then_blanks(tape: Sequence[str], n: int, s: int) -> bool:
    stack = tape[n : n + s]
    rest = tape[n + s :]
    return stack.count(S) == s and rest.count(B) == len(rest)


def tape_contents_without_x(word: str, tape: Sequence[str], s: int) -> bool:
    n = len(word)
    if len(tape) != 2 * n + 1 or not 0 <= s <= n:
        raise ValueError("tapeContentsWithoutX called outside its precondition")
    emb = _word_tables(word)[0]
    return tuple(tape[:n]) == emb and _stack_then_blanks(tape, n, s)


def tape_contents_with_x_replacing(paren: str, word: str, tape: Sequence[str], k: int, s: int) -> bool:
    n = len(word)
    if len(tape) != 2 * n + 1 or not 0 <= k < n or not 0 <= s <= n:
        raise ValueError("tapeContentsWithXReplacing called outside its precondition")
    emb = _word_tables(word)[0]
    return (
        word[k] == paren
        and tape[k] == X
        and tuple(tape[:k]) == emb[:k]
        and tuple(tape[k + 1 : n]) == emb[k + 1 :]
        and _stack_then_blanks(tape, n, s)
    )


def _without_x_ok(word, tape, s) -> bool:
    n = len(word)
    if len(tape) != 2 * n + 1 or not 0 <= s <= n:
        return False
    return tape_contents_without_x(word, tape, s)


def _with_x_ok(paren, word, tape, k, s) -> bool:
    n = len(word)
    if len(tape) != 2 * n + 1 or not 0 <= k < n or not 0 <= s <= n:
        return False
    return tape_contents_with_x_replacing(paren, word, tape, k, s)


# Per-state local invariants: (clause, predicate over n, s, k, p, s', k').
# The tape-shape clause of each state is listed in _TAPE_SHAPE.
_LOCAL = {
    "q0": (
        ("0 <= s <= a.Length", lambda n, s, k, p, sp, kp: 0 <= s <= n),
        ("0 <= k <= a.Length", lambda n, s, k, p, sp, kp: 0 <= k <= n),
        ("k == p", lambda n, s, k, p, sp, kp: k == p),
        ("s' == s && k' == k", lambda n, s, k, p, sp, kp: sp == s and kp == k),
    ),
    "q1": (
        ("0 <= s < a.Length", lambda n, s, k, p, sp, kp: 0 <= s < n),
        ("0 <= k < a.Length", lambda n, s, k, p, sp, kp: 0 <= k < n),
        ("k < p <= a.Length + s", lambda n, s, k, p, sp, kp: k < p <= n + s),
        ("s' == s + 1 && k' == k + 1", lambda n, s, k, p, sp, kp: sp == s + 1 and kp == k + 1),
    ),
    "q2": (
        ("0 < s <= a.Length", lambda n, s, k, p, sp, kp: 0 < s <= n),
        ("0 <= k < a.Length", lambda n, s, k, p, sp, kp: 0 <= k < n),
        ("k <= p < a.Length + s - 1", lambda n, s, k, p, sp, kp: k <= p < n + s - 1),
        ("s' == s && k' == k + 1", lambda n, s, k, p, sp, kp: sp == s and kp == k + 1),
    ),
    "q3": (
        ("0 <= s < a.Length", lambda n, s, k, p, sp, kp: 0 <= s < n),
        ("0 <= k < a.Length", lambda n, s, k, p, sp, kp: 0 <= k < n),
        ("k < p <= a.Length + s", lambda n, s, k, p, sp, kp: k < p <= n + s),
        ("s' == s - 1 && k' == k + 1", lambda n, s, k, p, sp, kp: sp == s - 1 and kp == k + 1),
    ),
    "q4": (
        ("0 <= s < a.Length", lambda n, s, k, p, sp, kp: 0 <= s < n),
        ("0 <= k < a.Length", lambda n, s, k, p, sp, kp: 0 <= k < n),
        ("p == a.Length + s - 1", lambda n, s, k, p, sp, kp: p == n + s - 1),
        ("s' == s - 1 && k' == k + 1", lambda n, s, k, p, sp, kp: sp == s - 1 and kp == k + 1),
    ),
    "q5": (
        ("0 <= s < a.Length", lambda n, s, k, p, sp, kp: 0 <= s < n),
        ("0 < k < a.Length", lambda n, s, k, p, sp, kp: 0 < k < n),
        ("k <= p < a.Length + s", lambda n, s, k, p, sp, kp: k <= p < n + s),
        ("s' == s && k' == k + 1", lambda n, s, k, p, sp, kp: sp == s and kp == k + 1),
    ),
    "q_acc": (
        ("0 == s", lambda n, s, k, p, sp, kp: s == 0),
        ("k == a.Length", lambda n, s, k, p, sp, kp: k == n),
        ("p == a.Length + 1", lambda n, s, k, p, sp, kp: p == n + 1),
        ("s' == s && k' == k", lambda n, s, k, p, sp, kp: sp == s and kp == k),
    ),
}

_TAPE_SHAPE = {
    "q0": ("tapeContentsWithoutX(a, t, s)", lambda w, t, k, s: _without_x_ok(w, t, s)),
    "q1": ("tapeContentsWithXReplacing(LP, a, t, k, s)", lambda w, t, k, s: _with_x_ok(LP, w, t, k, s)),
    "q2": ("tapeContentsWithXReplacing(LP, a, t, k, s)", lambda w, t, k, s: _with_x_ok(LP, w, t, k, s)),
    "q3": ("tapeContentsWithXReplacing(RP, a, t, k, s)", lambda w, t, k, s: _with_x_ok(RP, w, t, k, s)),
    "q4": ("tapeContentsWithXReplacing(RP, a, t, k, s)", lambda w, t, k, s: _with_x_ok(RP, w, t, k, s)),
    "q5": ("tapeContentsWithXReplacing(RP, a, t, k, s)", lambda w, t, k, s: _with_x_ok(RP, w, t, k, s)),
    "q_acc": ("tapeContentsWithoutX(a, t, 0)", lambda w, t, k, s: _without_x_ok(w, t, 0)),
}


def _ghost_str(g: ParenGhost) -> str:
    return f"k={g.k} s={g.s} s'={g.s_p} k'={g.k_p} lp={g.lp} rp={g.rp}"


def paren_reject_route(c: Configuration, g: ParenGhost, word: str) -> Optional[str]:
    """Which disjunct of the reject-state invariant holds, if any."""
    n, t, p, k, s = len(word), c.tape, c.head, g.k, g.s
    if (
        0 < s
        and k == n
        and _without_x_ok(word, t, s)
        and p == n + 1
        and g.s_p == s
        and g.k_p == k
    ):
        return "via q0"
    if (
        s == 0
        and 0 <= k < n
        and _with_x_ok(RP, word, t, k, 0)
        and p == n
        and g.s_p == s - 1
        and g.k_p == k + 1
    ):
        return "via q4"
    return None


def paren_check_invariants(c: Configuration, g: ParenGhost, word: str) -> list:
    """Evaluate the global invariants and the local block of ``c.state``."""
    out = []
    q, t, p, step = c.state, c.tape, c.head, c.steps
    n = len(word)
    k, s, sp, kp = g.k, g.s, g.s_p, g.k_p
    _, deltas, thetas = _word_tables(word)

    def fail(clause, expected, actual):
        out.append(Violation(step, q, clause, expected, actual))

    if not 0 <= p <= len(t):
        fail("global: 0 <= p <= t.Length", f"0..{len(t)}", f"p={p}")
    if not 0 <= s <= n:
        fail("global: 0 <= s <= a.Length", f"0..{n}", f"s={s}")
    if not 0 <= k <= n:
        fail("global: 0 <= k <= a.Length", f"0..{n}", f"k={k}")
    if sp != g.lp - g.rp:
        fail("global: s' == lp - rp", str(g.lp - g.rp), f"s'={sp}")
    if kp != g.lp + g.rp:
        fail("global: k' == lp + rp", str(g.lp + g.rp), f"k'={kp}")
    if not -1 <= sp <= kp:
        fail("global: -1 <= s' <= k'", f"-1..{kp}", f"s'={sp}")
    if not 0 <= kp <= n:
        fail("global: 0 <= k' <= a.Length", f"0..{n}", f"k'={kp}")
    if 0 <= kp <= n:
        if sp != deltas[kp]:
            fail("left-minus-right: s' == leftMinusRightParen(a, k')", str(deltas[kp]), f"s'={sp}")
    if 0 <= k <= n:
        if not thetas[k]:
            fail("never-more: neverMoreRightThanLeftParen(a, k)", "true", f"false at k={k}")
        if deltas[k] < 0:
            fail("explanational: 0 <= leftMinusRightParen(a, k)", ">= 0", str(deltas[k]))

    if q == "q_rej":
        if paren_reject_route(c, g, word) is None:
            fail("q_rej: (via q0) || (via q4)", "one disjunct", f"neither; p={p} {_ghost_str(g)}")
        return out
    block = _LOCAL.get(q)
    if block is None:
        fail("state", "a parentheses-machine state", repr(q))
        return out
    for clause, holds in block:
        if not holds(n, s, k, p, sp, kp):
            fail(f"{q}: {clause}", "true", f"p={p} {_ghost_str(g)}")
    clause, holds = _TAPE_SHAPE[q]
    if not holds(word, t, k, s):
        fail(f"{q}: {clause}", "true", _render(t))
    return out


_GLYPH = {B: "_", L: "(", R: ")", X: "x", S: "$"}


def _render(tape: Sequence[str]) -> str:
    return "".join(_GLYPH.get(a, "?") for a in tape)


_ORDER_Q = {"q0": 0, "q1": 1, "q2": 2, "q3": 1, "q4": 2, "q5": 3, "q_acc": 1, "q_rej": 3}


def order_q(state: str) -> int:
    return _ORDER_Q[state]


def paren_variant(c: Configuration, g: ParenGhost, word: str) -> tuple:
    third = len(c.tape) - c.head if c.state in ("q1", "q3") else c.head
    return (len(word) - g.k, 3 - _ORDER_Q[c.state], third)


def paren_check_final(c: Configuration, g: ParenGhost, word: str) -> list:
    """Postconditions on the halting configuration, tape contents included."""
    out = []
    n, k, s, t = len(word), g.k, g.s, c.tape
    _, deltas, _ = _word_tables(word)

    def fail(clause, expected, actual):
        out.append(Violation(c.steps, c.state, clause, expected, actual))

    if c.state == "q_acc":
        checks = (
            ("accept: 0 == s", s == 0),
            ("accept: k == a.Length", k == n),
            ("accept: tapeContentsWithoutX(a, t, 0)", _without_x_ok(word, t, 0)),
            ("accept: 0 == leftMinusRightParen(a, a.Length)", deltas[n] == 0),
            ("accept: a.Length % 2 == 0", n % 2 == 0),
        )
        for clause, ok in checks:
            if not ok:
                fail(clause, "true", f"{_ghost_str(g)} tape={_render(t)}")
    elif c.state == "q_rej":
        via_q0 = 0 < s <= n and 0 < k == n and _without_x_ok(word, t, s) and 0 < deltas[n]
        via_q4 = (
            0 == s < n
            and 0 <= k < n
            and _with_x_ok(RP, word, t, k, 0)
            and deltas[k + 1] == -1
        )
        if not (via_q0 or via_q4):
            fail("reject: (via q0) || (via q4)", "one disjunct", f"{_ghost_str(g)} tape={_render(t)}")
    else:
        fail("final state", "q_acc or q_rej", c.state)
    return out


class ParenHarness:
    """Observer for :func:`~decider_lab.tm.run` that tracks ghosts and checks.

    Collects violations of the invariants, of the termination measure, of
    ghost/real agreement at ``q0`` and of the halting postconditions.
    """

    def __init__(self, word: str, invariants: bool = True, variant: bool = True):
        self.word = word
        self.ghost = ParenGhost()
        self.check_invariants = invariants
        self.check_variant = variant
        self.violations: list = []
        self.acc_trace: list = []
        self.reject_route: Optional[str] = None
        self.configs = 0
        self.variant_checks = 0
        self._prev = None  # (state, read symbol)
        self._prev_variant = None
        _, self._deltas, self._thetas = _word_tables(word)

    def __call__(self, c: Configuration) -> None:
        if self._prev is not None:
            self.ghost = paren_ghost_update(self._prev, self.ghost)
        g = self.ghost
        self.configs += 1
        if self.check_invariants:
            self.violations.extend(paren_check_invariants(c, g, self.word))
            if c.state == "q0":
                self._agreement(c, g)
        if self.check_variant:
            v = paren_variant(c, g, self.word)
            if self._prev_variant is not None:
                self.variant_checks += 1
                if not variant_decreases(self._prev_variant, v):
                    self.violations.append(
                        Violation(c.steps, c.state, "variant decreases", f"< {self._prev_variant}", str(v))
                    )
            self._prev_variant = v
        k = g.k
        if 0 <= k <= len(self.word):
            self.acc_trace.append((k, self._deltas[k] >= 0, self._thetas[k]))
        tape = c.tape
        self._prev = (c.state, tape[c.head] if c.head < len(tape) else None)

    def _agreement(self, c: Configuration, g: ParenGhost) -> None:
        stacked = list(c.tape).count(S)
        if stacked != g.s:
            self.violations.append(Violation(c.steps, "q0", "ghost/real: s == #S on tape", str(stacked), f"s={g.s}"))
        if g.k != c.head:
            self.violations.append(Violation(c.steps, "q0", "ghost/real: k == p", str(c.head), f"k={g.k}"))

    def finish(self, result: RunResult, final: bool = True) -> list:
        c = result.final
        if final:
            self.violations.extend(paren_check_final(c, self.ghost, self.word))
        if c.state == "q_rej":
            self.reject_route = paren_reject_route(c, self.ghost, self.word)
        if self.check_invariants and not accumulated_invariant_check(self.acc_trace):
            self.violations.append(
                Violation(c.steps, c.state, "accumulated invariant", "never-more follows from pointwise", "mismatch")
            )
        return self.violations


from .variants import variant_decreases  # noqa: E402
