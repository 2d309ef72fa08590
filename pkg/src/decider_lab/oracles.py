"""Reference deciders and the predicates the machines are specified against.

Parentheses words are plain strings over ``"()"``; the unary language is
handled through its length n alone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Optional

from .tm import ACCEPT, REJECT

INT64_MAX = 2**63 - 1


def left_minus_right(word: str, i: int) -> int:
    """Number of ``(`` minus number of ``)`` among the first ``i`` symbols."""
    if not 0 <= i <= len(word):
        raise ValueError(f"prefix length {i} outside 0..{len(word)}")
    d = 0
    for a in word[:i]:
        if a == "(":
            d += 1
        elif a == ")":
            d -= 1
        else:
            raise ValueError(f"not a parenthesis: {a!r}")
    return d


def never_more_right_than_left(word: str, i: int) -> bool:
    if i > len(word):
        raise ValueError(f"prefix length {i} exceeds {len(word)}")
    return all(left_minus_right(word, j) >= 0 for j in range(0, i + 1))


def oracle_parentheses(word: str) -> str:
    # scan stops as soon as the running difference drops to -1
    i, d = 0, 0
    while i < len(word) and 0 <= d:
        if word[i] == "(":
            d += 1
        else:
            d -= 1
        i += 1
    return ACCEPT if d == 0 else REJECT


def cfg_member(word: str) -> bool:
    """Membership in S -> (S) | SS | eps by substring dynamic programming."""
    n = len(word)
    # derives[i][j]: word[i:j] is derivable from S
    derives = [[False] * (n + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        derives[i][i] = True
    for length in range(1, n + 1):
        for i in range(0, n - length + 1):
            j = i + length
            ok = length >= 2 and word[i] == "(" and word[j - 1] == ")" and derives[i + 1][j - 1]
            m = i + 1
            while not ok and m < j:
                ok = derives[i][m] and derives[m][j]
                m += 1
            derives[i][j] = ok
    return derives[0][n]


def power(b: int, k: int) -> int:
    if k < 0:
        raise ValueError("negative exponent")
    r = 1
    for _ in range(k):
        r *= b
        if abs(r) > INT64_MAX:
            raise OverflowError(f"{b}**{k} exceeds 64-bit range")
    return r


def is_power_of_2(n: int) -> bool:
    if n < 0:
        raise ValueError("n must be natural")
    if n == 0:
        return False
    while n % 2 == 0:
        n //= 2
    return n == 1


def is_power_of_2_by_search(n: int, max_k: int = 62) -> bool:
    """Direct search for k with n == 2**k; independent of the halving loop."""
    return any(power(2, k) == n for k in range(max_k + 1))


def oracle_sipser_m2(n: int) -> bool:
    if n < 0:
        raise ValueError("n must be natural")
    if n == 0:
        return False
    s = n
    while s % 2 == 0:
        s = s // 2
    return s == 1


def _zero_lemma(n: int) -> bool:
    return not is_power_of_2(0)


def _even_lemma(n: int) -> bool:
    return n % 2 != 0 or (is_power_of_2(n) == is_power_of_2(n // 2))


def _odd_lemma(n: int) -> bool:
    return is_power_of_2(1) and (n % 2 != 1 or (is_power_of_2(n) == (n == 1)))


def _definition_agrees(n: int) -> bool:
    return is_power_of_2(n) == _search_table().get(n, False)


@lru_cache(maxsize=1)
def _search_table() -> dict:
    return {power(2, k): True for k in range(63)}


POWER_LEMMAS: Mapping[str, Callable[[int], bool]] = {
    "zero": _zero_lemma,
    "even": _even_lemma,
    "odd": _odd_lemma,
    "definition": _definition_agrees,
}


@dataclass
class LemmaReport:
    max_n: int
    checked: dict = field(default_factory=dict)
    counterexample: Optional[tuple] = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None


def check_power_lemmas(max_n: int, lemmas: Optional[Mapping[str, Callable[[int], bool]]] = None) -> LemmaReport:
    """Check every lemma at every n in 0..max_n; stop at the first counterexample."""
    if max_n < 2:
        raise ValueError("max_n must be at least 2")
    lemmas = POWER_LEMMAS if lemmas is None else lemmas
    report = LemmaReport(max_n)
    for name, holds in lemmas.items():
        for n in range(max_n + 1):
            if not holds(n):
                report.counterexample = (name, n)
                return report
        report.checked[name] = max_n + 1
    return report
