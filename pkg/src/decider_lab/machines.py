"""The two built-in deciders, transcribed edge by edge from their diagrams.

Self-loops write back the symbol just read, one table row per symbol.
"""
from __future__ import annotations

from functools import lru_cache

from .tm import LEFT, RIGHT, MachineDef

# parentheses tape alphabet
B, L, R, X, S = "B", "L", "R", "X", "S"
# Sipser's M2 tape alphabet (blank and cross symbol are shared names)
Z = "Z"

PAREN_STATES = ("q0", "q1", "q2", "q3", "q4", "q5", "q_acc", "q_rej")
M2_STATES = ("q0", "q1", "q2", "q3", "q4", "q_acc", "q_rej")

PAREN_GLYPHS = {B: "_", L: "(", R: ")", X: "x", S: "$"}
M2_GLYPHS = {B: "_", Z: "0", X: "x"}


def _loop(table, state, symbols, move):
    for a in symbols:
        table[(state, a)] = (state, a, move)


def _paren_table() -> dict:
    t = {}
    t[("q0", L)] = ("q1", X, RIGHT)
    t[("q0", R)] = ("q3", X, RIGHT)
    t[("q0", B)] = ("q_acc", B, RIGHT)
    t[("q0", S)] = ("q_rej", S, RIGHT)
    _loop(t, "q1", (L, R, S), RIGHT)
    t[("q1", B)] = ("q2", S, LEFT)
    _loop(t, "q2", (L, R, S), LEFT)
    t[("q2", X)] = ("q0", L, RIGHT)
    _loop(t, "q3", (L, R, S), RIGHT)
    t[("q3", B)] = ("q4", B, LEFT)
    for a in (L, R, X):
        t[("q4", a)] = ("q_rej", a, RIGHT)
    t[("q4", S)] = ("q5", B, LEFT)
    _loop(t, "q5", (L, R, S), LEFT)
    t[("q5", X)] = ("q0", R, RIGHT)
    return t


def _m2_table() -> dict:
    t = {}
    t[("q0", Z)] = ("q1", B, RIGHT)
    t[("q0", B)] = ("q_rej", B, RIGHT)
    # never fires on real inputs, but the diagram draws it into q_rej
    t[("q0", X)] = ("q_rej", X, RIGHT)
    t[("q1", Z)] = ("q2", X, RIGHT)
    t[("q1", X)] = ("q1", X, RIGHT)
    t[("q1", B)] = ("q_acc", B, RIGHT)
    t[("q2", Z)] = ("q3", Z, RIGHT)
    t[("q2", X)] = ("q2", X, RIGHT)
    t[("q2", B)] = ("q4", B, LEFT)
    t[("q3", Z)] = ("q2", X, RIGHT)
    t[("q3", X)] = ("q3", X, RIGHT)
    t[("q3", B)] = ("q_rej", B, RIGHT)
    _loop(t, "q4", (Z, X), LEFT)
    t[("q4", B)] = ("q1", B, RIGHT)
    return t


@lru_cache(maxsize=None)
def parentheses_machine() -> MachineDef:
    return MachineDef(
        name="paren",
        states=frozenset(PAREN_STATES),
        start="q0",
        accept="q_acc",
        reject="q_rej",
        input_alphabet=frozenset("()"),
        tape_alphabet=frozenset((B, L, R, X, S)),
        blank=B,
        transitions=_paren_table(),
        tape_size=lambda n: 2 * n + 1,
        input_embed={"(": L, ")": R},
    )


@lru_cache(maxsize=None)
def sipser_m2_machine() -> MachineDef:
    return MachineDef(
        name="m2",
        states=frozenset(M2_STATES),
        start="q0",
        accept="q_acc",
        reject="q_rej",
        input_alphabet=frozenset("0"),
        tape_alphabet=frozenset((B, Z, X)),
        blank=B,
        transitions=_m2_table(),
        tape_size=lambda n: n + 1,
        input_embed={"0": Z},
    )


def machine_by_name(name: str) -> MachineDef:
    if name == "paren":
        return parentheses_machine()
    if name == "m2":
        return sipser_m2_machine()
    raise KeyError(name)


def glyphs_for(m: MachineDef) -> dict:
    return PAREN_GLYPHS if S in m.tape_alphabet else M2_GLYPHS
