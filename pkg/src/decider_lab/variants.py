"""Lexicographic termination measures with "not applicable" slots.

A component that does not apply in the current control state is ``NA``;
it plays the part of a don't-care placeholder whose value may even be
negative, so it is never compared and never bounded.
"""
from __future__ import annotations

from typing import Sequence


class _NotApplicable:
    __slots__ = ()

    def __repr__(self) -> str:
        return "NA"


NA = _NotApplicable()


def variant_decreases(prev: Sequence, nxt: Sequence) -> bool:
    """True iff ``nxt`` is strictly below ``prev`` in the lexicographic order.

    The first position where both are applicable and differ decides; the
    deciding new value must be non-negative. An ``NA`` met before any
    decision means the guard structure does not cover this transition.
    """
    if len(prev) != len(nxt):
        raise ValueError("variant tuples of different arity")
    for a, b in zip(prev, nxt):
        if a is NA or b is NA:
            return False
        if a != b:
            return b < a and b >= 0
    return False


def render_variant(v: Sequence) -> str:
    return "(" + ",".join(repr(x) for x in v) + ")"
