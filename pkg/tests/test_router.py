import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import moves_conflict
from zonemove.circuit import CZGate
from zonemove.errors import InsufficientStorage, OccupancyViolation, StaleMove
from zonemove.hardware import Mode, Site, Zone, ZoneLayout, move_duration
from zonemove.router import (
    CollMove,
    MoveKind,
    Placement,
    apply_collmove,
    conflicts,
    group_moves,
    make_move,
    plan_stage_moves,
    validate_layout,
)
from zonemove.stages import Stage

C, S = Zone.COMPUTE, Zone.STORAGE
LAY = ZoneLayout(4, 4, 4, 8)


def stage(*pairs):
    return Stage(tuple(CZGate(a, b) for a, b in pairs))


def place(**sites):
    return Placement(LAY, {int(k[1:]): v for k, v in sites.items()})


def kinds(violations):
    return sorted(v.kind for v in violations)


# -- plan_stage_moves -------------------------------------------------------


def test_both_in_storage_pair_meets_in_compute():
    p = place(q0=Site(S, 0, 0), q1=Site(S, 1, 0))
    moves, nxt = plan_stage_moves(p, stage((0, 1)), Mode.WITH_STORAGE)
    assert len(moves) == 2
    assert {m.kind for m in moves} == {MoveKind.FROM_STORAGE}
    assert nxt.site_of(0) == nxt.site_of(1)
    assert nxt.site_of(0).zone is C
    assert validate_layout(nxt, stage((0, 1))) == []


def test_storage_qubit_joins_static_partner():
    p = place(q0=Site(S, 0, 0), q1=Site(C, 2, 1))
    moves, nxt = plan_stage_moves(p, stage((0, 1)), Mode.WITH_STORAGE)
    assert [(m.qubit, m.dst) for m in moves] == [(0, Site(C, 2, 1))]
    assert nxt.site_of(1) == Site(C, 2, 1)


def test_idle_compute_qubit_drops_down_its_column():
    p = place(q0=Site(C, 0, 0), q1=Site(C, 0, 0), q2=Site(C, 2, 3))
    moves, nxt = plan_stage_moves(p, stage((0, 1)), Mode.WITH_STORAGE)
    assert [(m.qubit, m.src, m.dst) for m in moves] == [(2, Site(C, 2, 3), Site(S, 2, 0))]
    assert nxt.qubits_in(C) == [0, 1]


def test_idle_qubit_skips_taken_storage_in_column():
    p = place(q0=Site(C, 0, 0), q1=Site(C, 0, 0), q2=Site(C, 2, 3), q3=Site(S, 2, 0))
    moves, _ = plan_stage_moves(p, stage((0, 1)), Mode.WITH_STORAGE)
    assert [(m.qubit, m.dst) for m in moves] == [(2, Site(S, 2, 1))]


def test_farther_idle_qubit_goes_first():
    # both idle qubits share column 1; the one higher up claims the nearest storage row
    lay = ZoneLayout(2, 3, 2, 1)
    p = Placement(lay, {0: Site(C, 1, 0), 1: Site(C, 1, 2), 2: Site(C, 0, 1), 3: Site(C, 0, 1)})
    moves, _ = plan_stage_moves(p, stage((2, 3)), Mode.WITH_STORAGE)
    dst = {m.qubit: m.dst for m in moves}
    assert dst[1] == Site(S, 1, 0)
    assert dst[0] == Site(S, 0, 0)


def test_no_storage_left():
    lay = ZoneLayout(2, 1, 1, 1)
    p = Placement(lay, {0: Site(C, 0, 0), 1: Site(C, 0, 0), 2: Site(C, 1, 0), 3: Site(S, 0, 0)})
    with pytest.raises(InsufficientStorage):
        plan_stage_moves(p, stage((0, 1)), Mode.WITH_STORAGE)


def test_fixed_point():
    p = place(q0=Site(C, 0, 0), q1=Site(C, 0, 0), q2=Site(S, 0, 0))
    moves, nxt = plan_stage_moves(p, stage((0, 1)), Mode.WITH_STORAGE)
    assert moves == []
    assert nxt == p


def test_nonstorage_separates_stale_pair():
    p = place(q0=Site(C, 0, 0), q1=Site(C, 0, 0), q2=Site(C, 1, 0), q3=Site(C, 2, 0))
    s = stage((2, 3))
    moves, nxt = plan_stage_moves(p, s, Mode.NON_STORAGE)
    assert validate_layout(nxt, s) == []
    assert nxt.site_of(0) != nxt.site_of(1)
    assert not nxt.qubits_in(S)
    assert len(moves) == 2


def test_nonstorage_lone_idle_qubits_stay():
    p = place(q0=Site(C, 0, 0), q1=Site(C, 1, 0), q2=Site(C, 2, 0))
    moves, nxt = plan_stage_moves(p, stage((0, 1)), Mode.NON_STORAGE)
    # both could stay; the lower id travels
    assert [m.qubit for m in moves] == [0]
    assert nxt.site_of(0) == nxt.site_of(1) == Site(C, 1, 0)
    assert nxt.site_of(2) == Site(C, 2, 0)


def test_motivation_follow_up_stage_has_no_cluster():
    # pairs (1,2),(3,4),(5,6) sit together; the next stage pairs (2,3),(4,5)
    first = {1: Site(C, 0, 0), 2: Site(C, 0, 0), 3: Site(C, 1, 0), 4: Site(C, 1, 0), 5: Site(C, 2, 0), 6: Site(C, 2, 0)}
    first[0] = Site(S, 0, 0)
    for mode in Mode:
        p = Placement(LAY, first)
        s = stage((2, 3), (4, 5))
        moves, nxt = plan_stage_moves(p, s, mode)
        assert validate_layout(nxt, s) == []
        # continuous routing: nobody returns to an initial storage row
        assert all(m.kind is not MoveKind.INTRA_STORAGE for m in moves)


# -- conflicts ----------------------------------------------------------------


def mv(q, xs, ys, xe, ye):
    from zonemove.router import Move1Q

    return Move1Q(q, Site(C, 0, 0), Site(C, 0, 1), (xs, ys), (xe, ye), ((xe - xs) ** 2 + (ye - ys) ** 2) ** 0.5)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (mv(0, 0, 0, 30, 0), mv(1, 15, 0, 45, 0), False),
        (mv(0, 0, 0, 30, 0), mv(1, 0, 15, 15, 15), True),
        (mv(0, 30, 0, 0, 0), mv(1, 15, 0, 45, 0), True),
        (mv(0, 30, 0, 15, 0), mv(1, 0, 0, 15, 0), True),
        (mv(0, 0, 0, 0, 30), mv(1, 15, 0, 15, 30), False),
    ],
)
def test_conflict_cases(a, b, expected):
    assert conflicts(a, b) is expected
    assert conflicts(b, a) is expected
    assert moves_conflict((a.start, a.end), (b.start, b.end)) is expected


coord = st.sampled_from([0.0, 15.0, 30.0, 45.0, -30.0])


@given(st.tuples(*[coord] * 8))
def test_conflict_symmetric_and_irreflexive(c):
    a, b = mv(0, *c[:4]), mv(1, *c[4:])
    assert conflicts(a, b) == conflicts(b, a) == moves_conflict((a.start, a.end), (b.start, b.end))
    assert not conflicts(a, a)


# -- grouping -------------------------------------------------------------------


def test_group_example_15_15_75():
    a = make_move(0, Site(C, 0, 0), Site(C, 1, 0), LAY)
    b = make_move(1, Site(C, 2, 1), Site(C, 3, 1), LAY)
    c = make_move(2, Site(C, 3, 0), Site(S, 0, 2), LAY)
    assert [a.distance, b.distance, c.distance] == [15, 15, 75]
    assert not moves_conflict((a.start, a.end), (b.start, b.end))
    assert moves_conflict((a.start, a.end), (c.start, c.end))
    assert moves_conflict((b.start, b.end), (c.start, c.end))
    groups = group_moves([c, b, a])
    assert [tuple(m.qubit for m in g.moves) for g in groups] == [(0, 1), (2,)]
    assert groups[0].duration == move_duration(15)
    assert groups[1].duration == move_duration(75)


def test_group_two_moves():
    a = make_move(0, Site(C, 0, 0), Site(C, 0, 1), LAY)
    b = make_move(1, Site(C, 1, 0), Site(C, 1, 1), LAY)
    assert len(group_moves([a, b])) == 1
    swap = make_move(1, Site(C, 1, 0), Site(C, 0, 2), LAY)
    assert len(group_moves([a, swap])) == 2


def test_collmove_counts_in_and_out():
    cm = CollMove.of(
        [
            make_move(0, Site(C, 0, 0), Site(S, 0, 0), LAY),
            make_move(1, Site(C, 1, 0), Site(S, 1, 0), LAY),
            make_move(2, Site(S, 2, 0), Site(C, 2, 0), LAY),
        ]
    )
    assert (cm.n_in, cm.n_out) == (2, 1)


def random_moves(rng, k):
    sites = [s for s in LAY.sites(C) + LAY.sites(S)]
    src = rng.sample(sites, k)
    dst = rng.sample(sites, k)
    return [make_move(q, a, b, LAY) for q, (a, b) in enumerate(zip(src, dst)) if a != b]


@settings(max_examples=100)
@given(st.integers(0, 2**32), st.integers(1, 12))
def test_grouping_matches_pairwise_oracle(seed, k):
    moves = random_moves(random.Random(seed), k)
    groups = group_moves(moves)
    assert sorted(m.qubit for g in groups for m in g.moves) == sorted(m.qubit for m in moves)
    for g in groups:
        for i, a in enumerate(g.moves):
            for b in g.moves[i + 1 :]:
                assert not moves_conflict((a.start, a.end), (b.start, b.end))
    assert len(groups) <= max(len(moves), 1) or not moves
    clean = not any(
        moves_conflict((a.start, a.end), (b.start, b.end)) for i, a in enumerate(moves) for b in moves[i + 1 :]
    )
    if clean and moves:
        assert len(groups) == 1


# -- apply_collmove / validate_layout -------------------------------------------


def test_apply_empty_is_identity():
    p = place(q0=Site(C, 0, 0))
    assert apply_collmove(p, CollMove.of([])) == p


def test_apply_to_storage():
    p = place(q0=Site(C, 0, 0))
    q = apply_collmove(p, CollMove.of([make_move(0, Site(C, 0, 0), Site(S, 0, 0), LAY)]))
    assert q.occupants(Site(C, 0, 0)) == frozenset()
    assert q.occupants(Site(S, 0, 0)) == {0}


def test_apply_third_occupant():
    p = place(q0=Site(C, 0, 0), q1=Site(C, 0, 0), q2=Site(C, 1, 0))
    with pytest.raises(OccupancyViolation):
        apply_collmove(p, CollMove.of([make_move(2, Site(C, 1, 0), Site(C, 0, 0), LAY)]))


def test_apply_stale():
    p = place(q0=Site(C, 0, 0))
    with pytest.raises(StaleMove):
        apply_collmove(p, CollMove.of([make_move(0, Site(C, 1, 0), Site(C, 2, 0), LAY)]))


def test_apply_is_simultaneous():
    # a qubit may land on a site that another leaves in the same motion
    p = place(q0=Site(S, 0, 0), q1=Site(S, 1, 0))
    out = apply_collmove(
        p,
        CollMove.of(
            [make_move(0, Site(S, 0, 0), Site(S, 1, 0), LAY), make_move(1, Site(S, 1, 0), Site(S, 2, 0), LAY)]
        ),
    )
    assert out.site_of(0) == Site(S, 1, 0)


def test_validate_ok():
    p = place(q0=Site(C, 0, 0), q1=Site(C, 0, 0), q2=Site(S, 0, 0))
    assert validate_layout(p, stage((0, 1))) == []


def test_validate_cluster_of_three():
    p = place(q4=Site(C, 1, 1), q5=Site(C, 1, 1), q6=Site(C, 1, 1))
    assert "overfull" in kinds(validate_layout(p, stage((4, 5))))


def test_validate_non_partners_and_split_pair():
    p = place(q0=Site(C, 0, 0), q1=Site(C, 1, 0), q2=Site(C, 0, 0))
    assert kinds(validate_layout(p, stage((0, 1)))) == ["not-colocated", "unexpected-pair"]


def test_validate_pair_in_storage():
    p = Placement(LAY, {0: Site(S, 0, 0), 1: Site(S, 0, 0)})
    assert kinds(validate_layout(p, stage((0, 1)))) == ["not-colocated", "storage-overfull"]
