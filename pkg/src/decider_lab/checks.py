"""Violation records and the accumulated-invariant trace check."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Optional


@dataclass(frozen=True)
class Violation:
    step: int
    state: str
    clause: str
    expected: str
    actual: str

    def as_dict(self) -> dict:
        return asdict(self)

    def __str__(self) -> str:
        return f"step {self.step} [{self.state}] {self.clause}: expected {self.expected}, got {self.actual}"


def accumulated_invariant_check(trace: Iterable[tuple]) -> bool:
    """Check the accumulated form of a pointwise invariant along a trace.

    Each entry is ``(k, pointwise, accumulated)``: the counter value, whether
    I(k) holds, and the independently evaluated claim "I(j) for all j <= k".
    The counter starts at 0 and only ever grows by 0 or 1 per entry, which
    covers loops that increment it only on some iterations. The trace passes
    iff every accumulated claim equals the conjunction of I(j) taken at the
    first visit of each j <= k, and I(k) is stable while k is unchanged.
    """
    running: Optional[bool] = None
    k_prev: Optional[int] = None
    seen: dict = {}
    for k, pointwise, accumulated in trace:
        if k_prev is None:
            if k != 0:
                return False
        elif k < k_prev or k > k_prev + 1:
            return False
        if k in seen:
            if seen[k] != pointwise:
                return False
        else:
            seen[k] = pointwise
            running = pointwise if running is None else (running and pointwise)
        if accumulated != running:
            return False
        k_prev = k
    return True
