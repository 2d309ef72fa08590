import pytest

from decider_lab.ghost_m2 import (
    C_I2,
    C_I6,
    M2Ghost,
    M2Harness,
    M2Monitor,
    m2_check_invariants,
    m2_ghost_update,
    m2_variant,
    num_z_snap,
    num_z_tape,
)
from decider_lab.machines import B, X, Z, sipser_m2_machine
from decider_lab.tm import MachineError, run, trace
from decider_lab.variants import NA, variant_decreases

M2 = sipser_m2_machine()


def _configs_with_ghost(n):
    g, prev = M2Ghost(), None
    for c in trace(M2, "0" * n):
        if prev is not None:
            g = m2_ghost_update((prev.state, prev.tape[prev.head]), g, c.tape)
        yield c, g
        prev = c


def test_first_snapshot_after_blank_is_written():
    first = next(g.snap for c, g in _configs_with_ghost(3) if g.snap is not None)
    assert first == (B, Z, Z, B)


def test_snapshot_after_one_division():
    snaps = []
    for c, g in _configs_with_ghost(4):
        if g.snap is not None and g.snap not in snaps:
            snaps.append(g.snap)
    assert snaps[1] == (B, X, Z, X, B)


def test_update_identity_on_self_loop():
    g = M2Ghost((B, Z, B))
    assert m2_ghost_update(("q1", X), g, (B, X, B)) is g


def test_num_z():
    assert num_z_tape((B, Z, Z, B), 3) == 3
    assert num_z_tape((X, X), 0) == 0
    assert num_z_snap((B, X, Z, X, B), 5) == 3
    with pytest.raises(ValueError):
        num_z_tape((B,), 2)


def test_reference_clean_on_0000_and_halving():
    seen_q4 = False
    for c, g in _configs_with_ghost(4):
        assert m2_check_invariants(c, g, 4) == []
        if c.state == "q4" and g.snap == (B, Z, Z, Z, B):
            seen_q4 = True
            assert num_z_snap(g.snap, 4) == 4 and num_z_tape(c.tape, 4) == 2
    assert seen_q4


def test_snapshot_corruption_reported():
    for c, g in _configs_with_ghost(8):
        if c.state == "q2" and X in c.tape[c.head:]:
            break
    else:
        # q2 with a cross at or right of the head only appears in later cycles
        pytest.skip("no suitable configuration")
    i = c.tape.index(X, c.head)
    snap = list(g.snap)
    snap[i] = Z if snap[i] == X else X
    clauses = {v.clause for v in m2_check_invariants(c, M2Ghost(tuple(snap)), 8)}
    assert clauses & {C_I2, C_I6}


def test_snapshot_corruption_flip_x_to_z():
    for c, g in _configs_with_ghost(8):
        if c.state == "q2" and g.snap is not None and X in g.snap[: c.head]:
            break
    snap = list(g.snap)
    snap[snap.index(X)] = Z
    clauses = {v.clause for v in m2_check_invariants(c, M2Ghost(tuple(snap)), 8)}
    assert clauses & {C_I2, C_I6}


def test_variant_examples():
    confs = list(_configs_with_ghost(2))
    v0 = m2_variant(*confs[0], 2)
    v1 = m2_variant(*confs[1], 2)
    assert v0 == (1, NA, NA, NA)
    assert v1 == (0, 2, 1, 2)
    assert variant_decreases(v0, v1)
    for (a, ga), (b, gb) in zip(confs, confs[1:]):
        if a.state == "q2" and b.state == "q4":
            va, vb = m2_variant(a, ga, 2), m2_variant(b, gb, 2)
            assert (va[2], vb[2]) == (1, 0)


def test_variant_component1_drops_at_division():
    confs = list(_configs_with_ghost(4))
    drops = [
        (m2_variant(a, ga, 4)[1], m2_variant(b, gb, 4)[1])
        for (a, ga), (b, gb) in zip(confs, confs[1:])
        if a.state == "q4" and b.state == "q1"
    ]
    assert drops == [(4, 2), (2, 1)]


def test_empty_input_rejects_without_snapshot():
    h = M2Harness(0)
    r = run(M2, "", observer=h)
    assert r.decision == "reject" and h.violations == []
    assert h.ghost.snap is None


def _both(machine, n):
    ref, mon = M2Harness(n), M2Monitor(n)

    def obs(c):
        ref(c)
        mon(c)

    try:
        run(machine, "0" * n, observer=obs)
    except MachineError:
        pass
    key = lambda vs: [(v.step, v.state, v.clause) for v in vs]
    return key(ref.violations), key(mon.violations), ref, mon


def test_monitor_matches_reference_on_clean_runs():
    for n in range(0, 48):
        a, b, ref, mon = _both(M2, n)
        assert a == b == []
        assert ref.lemmas == mon.lemmas
        assert ref.variant_checks == mon.variant_checks


def _mutants():
    for (q, a), entry in sorted(M2.transitions.items()):
        for nq in sorted(M2.states):
            for w in (B, Z, X):
                for d in ("L", "R"):
                    if (nq, w, d) != entry:
                        yield M2.with_transition(q, a, (nq, w, d))


def test_monitor_matches_reference_on_mutants():
    detected = 0
    mutants = list(_mutants())
    assert len(mutants) == 615
    for m in mutants:
        for n in (0, 1, 2, 3, 5, 8):
            a, b, _, _ = _both(m, n)
            assert a == b, (m.transitions, n)
            detected += bool(a)
    assert detected > 0


def test_lemma_counters_fire():
    h = M2Monitor(8)
    run(M2, "0" * 8, observer=h)
    assert h.lemmas["only_zeroes"] == 1
    assert h.lemmas["num_zeroes"] == 4  # initial snapshot plus three divisions
    assert h.lemmas["write_locality"] == 7  # 4 + 2 + 1 crossings
    assert h.violations == []
