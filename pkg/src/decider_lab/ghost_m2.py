"""Snapshot ghost, invariants I0-I10 and termination measure for M2.

Two checkers share one clause vocabulary:

* :func:`m2_check_invariants` evaluates every clause from scratch and is the
  reference; it costs O(n) per configuration.
* :class:`M2Monitor` keeps running counters (tape/snapshot differences, zero
  counts left of the head, prefix tables of the snapshot) so that a
  configuration costs O(1) amortised. It is what makes the n <= 65536 sweeps
  affordable; the test-suite cross-checks it against the reference.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .checks import Violation
from .machines import B, X, Z
from .oracles import is_power_of_2
from .tm import Configuration, RunResult
from .variants import NA, variant_decreases

SNAPSHOT_EVENTS = frozenset({("q0", Z), ("q4", B)})
_IS_ZERO = {B: 1, Z: 1}

# clause names
C_I0 = "I0: 0 <= p <= t.Length"
C_T0 = "tape: t[0] == (a.Length == 0 || q != q0 ? B : Z)"
C_TMID = "tape: t[i] in {Z, X} for 1 <= i < a.Length"
C_TN = "tape: t[a.Length] == B"
C_HEAD = {
    "q0": "I0.0: 0 == p",
    "q1": "I0.1: 1 <= p <= a.Length",
    "q2": "I0.2: 2 <= p <= a.Length",
    "q3": "I0.3: 3 <= p <= a.Length",
    "q4": "I0.4: 0 <= p < a.Length",
    "q_acc": "I0.a: 2 <= p == a.Length + 1",
    "q_rej": "I0.r: 1 <= p == a.Length + 1",
}
C_SNAP = "snapGlob present"
C_I1 = "I1: snapGlob[i] == t[i] for 0 <= i < a.Length"
C_I2 = "I2: snapGlob[i] == t[i] for p <= i < a.Length"
C_I3 = "I3: |snapGlob| == t.Length"
C_I4 = "I4: numZSnap(snapGlob, a.Length) == 2 * numZTape(t, a.Length)"
C_I5 = "I5: 1 == numZSnap(snapGlob, p) == numZTape(t, p)"
C_I6 = "I6: numZSnap(snapGlob, p) == 2 * numZTape(t, p)"
C_I7 = "I7: numZSnap(snapGlob, p) == 2 * numZTape(t, p) - 1"
C_I8 = "I8: isPowerOf2(numZSnap(snapGlob, a.Length)) <==> isPowerOf2(a.Length)"
C_I9 = "I9: t[i] == Z for 0 <= i < a.Length"
C_I10_2 = "I10.2: 2 <= numZSnap(snapGlob, p)"
C_I10_3 = "I10.3: 3 <= numZSnap(snapGlob, p)"
C_I10_4 = "I10.4: 2 <= numZSnap(snapGlob, a.Length)"
C_I10_R = "I10.r: 3 <= numZSnap(snapGlob, a.Length)"
C_ACC_ONE = "q_acc: 1 == numZSnap(snapGlob, a.Length)"
C_REJ_ODD = "q_rej: numZSnap(snapGlob, a.Length) % 2 == 1"
C_VARIANT = "variant decreases"
C_WRITE_LOCALITY = "lemma: write-locality numZTape(t, p) unchanged by write at p"
C_NUM_ZEROES = "lemma: numZeroesLemma numZTape(t, i) == numZSnap(snapGlob, i)"
C_ONLY_ZEROES = "lemma: onlyZeroesLemma numZTape(t, a.Length) == a.Length"
C_MONITOR = "monitor: running counters agree with recount"

SNAP_STATES = ("q1", "q2", "q3", "q4")


@dataclass(frozen=True)
class M2Ghost:
    snap: Optional[tuple] = None


def m2_ghost_update(event: tuple, g: M2Ghost, tape: Sequence[str]) -> M2Ghost:
    """Take a snapshot of the post-write ``tape`` on the two annotated edges."""
    if event in SNAPSHOT_EVENTS:
        return M2Ghost(tuple(tape))
    return g


def _count_zeroes(seq: Sequence[str], i: int) -> int:
    if not 0 <= i <= len(seq):
        raise ValueError(f"prefix length {i} outside 0..{len(seq)}")
    count = 0
    for j in range(i):
        if seq[j] in (B, Z):
            count += 1
    return count


def num_z_tape(tape: Sequence[str], i: int) -> int:
    """Blank or zero squares among the first ``i`` tape squares."""
    return _count_zeroes(tape, i)


def num_z_snap(snap: Sequence[str], i: int) -> int:
    return _count_zeroes(snap, i)


def _n_of(word) -> int:
    return word if isinstance(word, int) else len(word)


def _head_ok(q: str, p: int, n: int) -> bool:
    if q == "q0":
        return p == 0
    if q == "q1":
        return 1 <= p <= n
    if q == "q2":
        return 2 <= p <= n
    if q == "q3":
        return 3 <= p <= n
    if q == "q4":
        return 0 <= p < n
    if q == "q_acc":
        return 2 <= p == n + 1
    if q == "q_rej":
        return 1 <= p == n + 1
    return False


def m2_check_invariants(c: Configuration, g: M2Ghost, word) -> list:
    """Evaluate the whole catalog literally; ``word`` is the input or its length."""
    out = []
    q, t, p, step = c.state, c.tape, c.head, c.steps
    n = _n_of(word)

    def fail(clause, expected, actual):
        out.append(Violation(step, q, clause, expected, actual))

    if not 0 <= p <= len(t):
        fail(C_I0, f"0..{len(t)}", f"p={p}")
    want0 = B if (n == 0 or q != "q0") else Z
    if t[0] != want0:
        fail(C_T0, want0, t[0])
    bad = [i for i in range(1, n) if t[i] not in (Z, X)]
    if bad:
        fail(C_TMID, "Z or X", f"t[{bad[0]}]={t[bad[0]]}")
    if n < len(t) and t[n] != B:
        fail(C_TN, B, t[n])
    if q in C_HEAD and not _head_ok(q, p, n):
        fail(C_HEAD[q], "true", f"p={p} n={n}")

    if q == "q0":
        bad = [i for i in range(n) if t[i] != Z]
        if bad:
            fail(C_I9, "Z", f"t[{bad[0]}]={t[bad[0]]}")
        return out

    snap = g.snap
    needs_snap = q in SNAP_STATES or q == "q_acc" or (q == "q_rej" and n != 0)
    if not needs_snap:
        return out
    if snap is None:
        fail(C_SNAP, "snapshot taken", "absent")
        return out
    if len(snap) != len(t):
        fail(C_I3, str(len(t)), str(len(snap)))
        return out

    zs_n = num_z_snap(snap, n)
    if is_power_of_2(zs_n) != is_power_of_2(n):
        fail(C_I8, f"isPowerOf2({n})={is_power_of_2(n)}", f"numZSnap={zs_n}")
    if q == "q_acc":
        if zs_n != 1:
            fail(C_ACC_ONE, "1", str(zs_n))
        return out
    if q == "q_rej":
        if zs_n % 2 != 1:
            fail(C_REJ_ODD, "odd", str(zs_n))
        if zs_n < 3:
            fail(C_I10_R, ">= 3", str(zs_n))
        return out

    p_in = 0 <= p <= n
    if q == "q1":
        diff = [i for i in range(n) if snap[i] != t[i]]
        if diff:
            fail(C_I1, "agreement", f"differs at {diff[0]}")
        if p_in:
            zs, zt = num_z_snap(snap, p), num_z_tape(t, p)
            if not (zs == 1 and zt == 1):
                fail(C_I5, "1 == 1", f"numZSnap={zs} numZTape={zt}")
    elif q in ("q2", "q3"):
        if p_in:
            diff = [i for i in range(p, n) if snap[i] != t[i]]
            if diff:
                fail(C_I2, "agreement", f"differs at {diff[0]}")
            zs, zt = num_z_snap(snap, p), num_z_tape(t, p)
            if q == "q2":
                if zs != 2 * zt:
                    fail(C_I6, str(2 * zt), f"numZSnap={zs}")
                if zs < 2:
                    fail(C_I10_2, ">= 2", str(zs))
            else:
                if zs != 2 * zt - 1:
                    fail(C_I7, str(2 * zt - 1), f"numZSnap={zs}")
                if zs < 3:
                    fail(C_I10_3, ">= 3", str(zs))
    elif q == "q4":
        zt_n = num_z_tape(t, n)
        if zs_n != 2 * zt_n:
            fail(C_I4, str(2 * zt_n), f"numZSnap={zs_n}")
        if zs_n < 2:
            fail(C_I10_4, ">= 2", str(zs_n))
    return out


def m2_variant(c: Configuration, g: M2Ghost, word) -> tuple:
    n = _n_of(word)
    q = c.state
    if q == "q0":
        second = NA
    elif g.snap is None:
        # only q_rej on the empty input gets here; the first component decides
        second = NA
    else:
        second = num_z_snap(g.snap, n)
    if q in ("q1", "q2", "q3"):
        third, fourth = 1, len(c.tape) - c.head
    elif q == "q4":
        third, fourth = 0, c.head
    elif q in ("q_acc", "q_rej"):
        third, fourth = 0, NA
    else:
        third, fourth = NA, NA
    return (1 if q == "q0" else 0, second, third, fourth)


def _lemma_counts() -> dict:
    return {"write_locality": 0, "write_locality_unchanged": 0, "num_zeroes": 0, "only_zeroes": 0}


class M2Harness:
    """Reference observer: literal checks plus literal lemma assertions."""

    def __init__(self, word, invariants: bool = True, variant: bool = True):
        self.word = word
        self.n = _n_of(word)
        self.ghost = M2Ghost()
        self.check_invariants = invariants
        self.check_variant = variant
        self.violations: list = []
        self.lemmas = _lemma_counts()
        self.configs = 0
        self.variant_checks = 0
        self._prev = None  # (state, read, head, tape copy)
        self._prev_variant = None

    def __call__(self, c: Configuration) -> None:
        t = c.tape
        if self._prev is not None:
            pq, pa, pp, before = self._prev
            event = (pq, pa)
            written = t[pp]
            if written == X:
                key = "write_locality" if before[pp] != X else "write_locality_unchanged"
                self.lemmas[key] += 1
                if num_z_tape(before, pp) != num_z_tape(t, pp):
                    self._fail(c, C_WRITE_LOCALITY, str(num_z_tape(before, pp)), str(num_z_tape(t, pp)))
            self.ghost = m2_ghost_update(event, self.ghost, t)
            if event in SNAPSHOT_EVENTS:
                self._snapshot_lemmas(c, event)
        self.configs += 1
        if self.check_invariants:
            self.violations.extend(m2_check_invariants(c, self.ghost, self.n))
        if self.check_variant:
            v = m2_variant(c, self.ghost, self.n)
            if self._prev_variant is not None:
                self.variant_checks += 1
                if not variant_decreases(self._prev_variant, v):
                    self._fail(c, C_VARIANT, f"< {self._prev_variant}", str(v))
            self._prev_variant = v
        read = t[c.head] if c.head < len(t) else None
        self._prev = (c.state, read, c.head, tuple(t))

    def _fail(self, c, clause, expected, actual):
        self.violations.append(Violation(c.steps, c.state, clause, expected, actual))

    def _snapshot_lemmas(self, c, event):
        t, snap, n = c.tape, self.ghost.snap, self.n
        self.lemmas["num_zeroes"] += 1
        for i in range(n + 1):
            if num_z_tape(t, i) != num_z_snap(snap, i):
                self._fail(c, C_NUM_ZEROES, f"equal at i={i}", f"{num_z_tape(t, i)} vs {num_z_snap(snap, i)}")
                break
        if event == ("q0", Z) and all(t[j] in (B, Z) for j in range(n)):
            self.lemmas["only_zeroes"] += 1
            if num_z_tape(t, n) != n or num_z_snap(snap, n) != n:
                self._fail(c, C_ONLY_ZEROES, str(n), str(num_z_snap(snap, n)))

    def finish(self, result: RunResult) -> list:
        return self.violations


class _Fenwick:
    """Prefix sums with point updates; recounts zeroes left of a square."""

    def __init__(self, values: Sequence[int]):
        self.size = len(values)
        tree = [0] * (self.size + 1)
        for i, v in enumerate(values, 1):
            tree[i] += v
            j = i + (i & -i)
            if j <= self.size:
                tree[j] += tree[i]
        self.tree = tree

    def add(self, i: int, delta: int) -> None:
        i += 1
        tree = self.tree
        while i <= self.size:
            tree[i] += delta
            i += i & -i

    def prefix(self, i: int) -> int:
        """Sum of the first ``i`` values."""
        s, tree = 0, self.tree
        while i > 0:
            s += tree[i]
            i -= i & -i
        return s


class M2Monitor:
    """Incremental observer reporting the same clauses as the reference.

    Write-locality is asserted with an independent prefix-sum tree at every
    step whose write turns a square into a cross. Writes that leave the square
    as it was (the cross self-loops) cannot move any count and are tallied
    separately in ``lemmas["write_locality_unchanged"]``.
    """

    def __init__(self, word, invariants: bool = True, variant: bool = True, resync: bool = True):
        self.n = _n_of(word)
        self.check_invariants = invariants
        self.check_variant = variant
        self.resync = resync
        self.violations: list = []
        self.lemmas = _lemma_counts()
        self.configs = 0
        self.variant_checks = 0
        self.snap: Optional[tuple] = None
        self._prev = None  # (state, read, head)
        self._prev_variant = None
        self._started = False

    @property
    def ghost(self) -> M2Ghost:
        return M2Ghost(self.snap)

    # running state, set up on the first configuration
    def _init_counters(self, t) -> None:
        n = self.n
        self.nonz = sum(1 for i in range(n) if t[i] != Z)
        self.bad_mid = sum(1 for i in range(1, n) if t[i] not in (Z, X))
        self.zt_total = sum(_IS_ZERO.get(t[i], 0) for i in range(n))
        self.zt_p = 0  # head starts at 0
        self.dmask = bytearray(n)
        self.diff_count = 0
        self.diff_ge_p = 0
        self.fenwick = _Fenwick([_IS_ZERO.get(a, 0) for a in t])
        self.snap_prefix = None
        self.zs_n = None
        self.i8_ok = True
        self._started = True

    def _write(self, i: int, old: str, new: str, p_before_move: int) -> None:
        n = self.n
        if i < n:
            self.nonz += (new != Z) - (old != Z)
            if i >= 1:
                self.bad_mid += (new not in (Z, X)) - (old not in (Z, X))
            dz = _IS_ZERO.get(new, 0) - _IS_ZERO.get(old, 0)
            self.zt_total += dz
            if self.snap is not None:
                was = self.dmask[i]
                now = 1 if self.snap[i] != new else 0
                if was != now:
                    self.dmask[i] = now
                    self.diff_count += now - was
                    if i >= p_before_move:
                        self.diff_ge_p += now - was
        else:
            dz = _IS_ZERO.get(new, 0) - _IS_ZERO.get(old, 0)
        if dz:
            if new == X:
                before = self.fenwick.prefix(i)
                self.fenwick.add(i, dz)
                self.lemmas["write_locality"] += 1
                if self.fenwick.prefix(i) != before:
                    self._pending.append((C_WRITE_LOCALITY, str(before), str(self.fenwick.prefix(i))))
            else:
                self.fenwick.add(i, dz)
        elif new == X:
            self.lemmas["write_locality"] += 1
            before = self.fenwick.prefix(i)
            if self.fenwick.prefix(i) != before:
                self._pending.append((C_WRITE_LOCALITY, str(before), "changed"))

    def _take_snapshot(self, t, event) -> None:
        n = self.n
        snap = tuple(t)
        self.snap = snap
        prefix = [0] * (len(snap) + 1)
        acc = 0
        for i, a in enumerate(snap):
            if a == B or a == Z:
                acc += 1
            prefix[i + 1] = acc
        self.snap_prefix = prefix
        self.zs_n = prefix[n] if n < len(prefix) else None
        self.i8_ok = self.zs_n is not None and is_power_of_2(self.zs_n) == is_power_of_2(n)
        self.dmask = bytearray(n)
        self.diff_count = 0
        self.diff_ge_p = 0
        # numZeroesLemma: recount the tape independently of the snapshot table
        self.lemmas["num_zeroes"] += 1
        acc = 0
        for i in range(n + 1):
            if acc != prefix[i]:
                self._pending.append((C_NUM_ZEROES, f"equal at i={i}", f"{acc} vs {prefix[i]}"))
                break
            if i < len(t) and (t[i] == B or t[i] == Z):
                acc += 1
        if event == ("q0", Z) and all(t[j] == B or t[j] == Z for j in range(n)):
            self.lemmas["only_zeroes"] += 1
            if prefix[n] != n:
                self._pending.append((C_ONLY_ZEROES, str(n), str(prefix[n])))
        if self.resync and self.zt_total != prefix[n]:
            self._pending.append((C_MONITOR, str(prefix[n]), f"zt_total={self.zt_total}"))

    def __call__(self, c: Configuration) -> None:
        q, t, p = c.state, c.tape, c.head
        n = self.n
        self._pending = pending = []
        if not self._started:
            self._init_counters(t)
        else:
            pq, pa, pp = self._prev
            new = t[pp]
            if new != pa:
                self._write(pp, pa, new, pp)
            elif new == X:
                self.lemmas["write_locality_unchanged"] += 1
            if p == pp + 1:
                self.zt_p += _IS_ZERO.get(t[pp], 0)
                if pp < n and self.dmask[pp]:
                    self.diff_ge_p -= 1
            elif p == pp - 1:
                self.zt_p -= _IS_ZERO.get(t[p], 0)
                if p < n and self.dmask[p]:
                    self.diff_ge_p += 1
            if (pq, pa) in SNAPSHOT_EVENTS:
                self._take_snapshot(t, (pq, pa))
        self.configs += 1
        step = c.steps
        out = self.violations
        for clause, expected, actual in pending:
            out.append(Violation(step, q, clause, expected, actual))

        if self.check_invariants:
            self._check(q, t, p, n, step, out)
        if self.check_variant:
            if q == "q0":
                v = (1, NA, NA, NA)
            else:
                second = NA if self.snap is None else self.zs_n
                if q == "q1" or q == "q2" or q == "q3":
                    v = (0, second, 1, len(t) - p)
                elif q == "q4":
                    v = (0, second, 0, p)
                elif q == "q_acc" or q == "q_rej":
                    v = (0, second, 0, NA)
                else:
                    v = (0, second, NA, NA)
            prev = self._prev_variant
            if prev is not None:
                self.variant_checks += 1
                if not variant_decreases(prev, v):
                    out.append(Violation(step, q, C_VARIANT, f"< {prev}", str(v)))
            self._prev_variant = v
        self._prev = (q, t[p] if p < len(t) else None, p)

    def _check(self, q, t, p, n, step, out) -> None:
        def fail(clause, expected, actual):
            out.append(Violation(step, q, clause, expected, actual))

        if not 0 <= p <= len(t):
            fail(C_I0, f"0..{len(t)}", f"p={p}")
        want0 = B if (n == 0 or q != "q0") else Z
        if t[0] != want0:
            fail(C_T0, want0, t[0])
        if self.bad_mid:
            fail(C_TMID, "Z or X", f"{self.bad_mid} squares")
        if n < len(t) and t[n] != B:
            fail(C_TN, B, t[n])
        if q in C_HEAD and not _head_ok(q, p, n):
            fail(C_HEAD[q], "true", f"p={p} n={n}")

        if q == "q0":
            if self.nonz:
                fail(C_I9, "Z", f"{self.nonz} squares differ")
            return
        needs_snap = q in SNAP_STATES or q == "q_acc" or (q == "q_rej" and n != 0)
        if not needs_snap:
            return
        snap = self.snap
        if snap is None:
            fail(C_SNAP, "snapshot taken", "absent")
            return
        if len(snap) != len(t):
            fail(C_I3, str(len(t)), str(len(snap)))
            return
        zs_n = self.zs_n
        if not self.i8_ok:
            fail(C_I8, f"isPowerOf2({n})={is_power_of_2(n)}", f"numZSnap={zs_n}")
        if q == "q_acc":
            if zs_n != 1:
                fail(C_ACC_ONE, "1", str(zs_n))
            return
        if q == "q_rej":
            if zs_n % 2 != 1:
                fail(C_REJ_ODD, "odd", str(zs_n))
            if zs_n < 3:
                fail(C_I10_R, ">= 3", str(zs_n))
            return
        p_in = 0 <= p <= n
        if q == "q1":
            if self.diff_count:
                fail(C_I1, "agreement", f"{self.diff_count} squares differ")
            if p_in:
                zs, zt = self.snap_prefix[p], self.zt_p
                if not (zs == 1 and zt == 1):
                    fail(C_I5, "1 == 1", f"numZSnap={zs} numZTape={zt}")
        elif q == "q2" or q == "q3":
            if p_in:
                if self.diff_ge_p:
                    fail(C_I2, "agreement", f"{self.diff_ge_p} squares differ")
                zs, zt = self.snap_prefix[p], self.zt_p
                if q == "q2":
                    if zs != 2 * zt:
                        fail(C_I6, str(2 * zt), f"numZSnap={zs}")
                    if zs < 2:
                        fail(C_I10_2, ">= 2", str(zs))
                else:
                    if zs != 2 * zt - 1:
                        fail(C_I7, str(2 * zt - 1), f"numZSnap={zs}")
                    if zs < 3:
                        fail(C_I10_3, ">= 3", str(zs))
        elif q == "q4":
            if zs_n != 2 * self.zt_total:
                fail(C_I4, str(2 * self.zt_total), f"numZSnap={zs_n}")
            if zs_n < 2:
                fail(C_I10_4, ">= 2", str(zs_n))

    def finish(self, result: RunResult) -> list:
        return self.violations
