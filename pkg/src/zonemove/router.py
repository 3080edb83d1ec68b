"""Continuous routing between stage layouts.

For every stage the router decides where each qubit goes (non-interacting
qubits drop into storage, interacting pairs meet on one compute site) and
then packs the resulting single-qubit moves into collective AOD moves whose
members never swap their relative x or y order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    InsufficientCompute,
    InsufficientStorage,
    OccupancyViolation,
    StaleMove,
    UnplacedQubit,
)
from .hardware import (
    DEFAULT_PARAMS,
    HardwareParams,
    Mode,
    Site,
    Zone,
    ZoneLayout,
    move_duration,
    physical_position,
)
from .stages import Stage

COMPUTE_CAPACITY = 2
STORAGE_CAPACITY = 1


class Placement:
    """Qubit-to-site map with an inverse occupancy index."""

    def __init__(self, layout: ZoneLayout, qubit_site: Mapping[int, Site]):
        self.layout = layout
        self.qubit_site: dict[int, Site] = dict(qubit_site)
        self.site_occupants: dict[Site, set[int]] = {}
        for q, s in self.qubit_site.items():
            self.site_occupants.setdefault(s, set()).add(q)

    def site_of(self, q: int) -> Site:
        try:
            return self.qubit_site[q]
        except KeyError:
            raise UnplacedQubit(f"qubit {q} has no site") from None

    def occupants(self, s: Site) -> frozenset[int]:
        return frozenset(self.site_occupants.get(s, ()))

    def copy(self) -> Placement:
        return Placement(self.layout, self.qubit_site)

    def qubits_in(self, zone: Zone) -> list[int]:
        return sorted(q for q, s in self.qubit_site.items() if s.zone is zone)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Placement):
            return NotImplemented
        return self.layout == other.layout and self.qubit_site == other.qubit_site

    def __repr__(self) -> str:
        return f"Placement({dict(sorted(self.qubit_site.items()))})"

    def to_json(self) -> list:
        return [self.qubit_site[q].to_json() for q in sorted(self.qubit_site)]


class Label(str, enum.Enum):
    STATIC = "static"
    MOBILE = "mobile"
    UNDECIDED = "undecided"


class MoveKind(str, enum.Enum):
    TO_STORAGE = "to-storage"
    FROM_STORAGE = "from-storage"
    INTRA_COMPUTE = "intra-compute"
    INTRA_STORAGE = "intra-storage"


@dataclass(frozen=True)
class Move1Q:
    qubit: int
    src: Site
    dst: Site
    start: tuple[float, float]
    end: tuple[float, float]
    distance: float

    @property
    def kind(self) -> MoveKind:
        if self.src.zone is Zone.COMPUTE:
            return MoveKind.TO_STORAGE if self.dst.zone is Zone.STORAGE else MoveKind.INTRA_COMPUTE
        return MoveKind.INTRA_STORAGE if self.dst.zone is Zone.STORAGE else MoveKind.FROM_STORAGE

    def to_json(self) -> dict:
        return {"qubit": self.qubit, "from": self.src.to_json(), "to": self.dst.to_json()}


def make_move(
    qubit: int, src: Site, dst: Site, layout: ZoneLayout, params: HardwareParams = DEFAULT_PARAMS
) -> Move1Q:
    if src == dst:
        raise ValueError(f"qubit {qubit}: move source and destination coincide ({src!r})")
    start = physical_position(src, layout, params)
    end = physical_position(dst, layout, params)
    dist = ((start[0] - end[0]) ** 2 + (start[1] - end[1]) ** 2) ** 0.5
    return Move1Q(qubit, src, dst, start, end, dist)


@dataclass(frozen=True)
class CollMove:
    moves: tuple[Move1Q, ...]
    max_distance: float
    duration: float
    n_in: int
    n_out: int

    @classmethod
    def of(cls, moves: Iterable[Move1Q], params: HardwareParams = DEFAULT_PARAMS) -> CollMove:
        moves = tuple(moves)
        dmax = max((m.distance for m in moves), default=0.0)
        kinds = [m.kind for m in moves]
        return cls(
            moves,
            dmax,
            move_duration(dmax, params),
            kinds.count(MoveKind.TO_STORAGE),
            kinds.count(MoveKind.FROM_STORAGE),
        )


def _sign(v: float) -> int:
    return (v > 0) - (v < 0)


def conflicts(m1: Move1Q, m2: Move1Q) -> bool:
    """True when the two atoms' order along x or y (ties included) differs before and after."""
    for axis in (0, 1):
        before = _sign(m1.start[axis] - m2.start[axis])
        after = _sign(m1.end[axis] - m2.end[axis])
        if before != after:
            return True
    return False


def group_moves(moves: Sequence[Move1Q], params: HardwareParams = DEFAULT_PARAMS) -> list[CollMove]:
    """First-fit packing of moves, shortest first, into conflict-free groups."""
    groups: list[list[Move1Q]] = []
    for m in sorted(moves, key=lambda m: (m.distance, m.qubit)):
        for g in groups:
            if not any(conflicts(m, other) for other in g):
                g.append(m)
                break
        else:
            groups.append([m])
    return [CollMove.of(g, params) for g in groups]


def apply_moves(p: Placement, moves: Iterable[Move1Q]) -> Placement:
    """Apply moves simultaneously: every atom is lifted before any is dropped."""
    moves = list(moves)
    seen: set[int] = set()
    for m in moves:
        if m.qubit in seen:
            raise StaleMove(f"qubit {m.qubit} moved twice in one step")
        seen.add(m.qubit)
        if p.qubit_site.get(m.qubit) != m.src:
            raise StaleMove(f"qubit {m.qubit} is at {p.qubit_site.get(m.qubit)!r}, not {m.src!r}")
    out = p.copy()
    for m in moves:
        out.site_occupants[m.src].discard(m.qubit)
        if not out.site_occupants[m.src]:
            del out.site_occupants[m.src]
    for m in moves:
        if not out.layout.contains(m.dst):
            raise OccupancyViolation(f"qubit {m.qubit} sent outside the layout to {m.dst!r}")
        out.qubit_site[m.qubit] = m.dst
        occ = out.site_occupants.setdefault(m.dst, set())
        occ.add(m.qubit)
        cap = COMPUTE_CAPACITY if m.dst.zone is Zone.COMPUTE else STORAGE_CAPACITY
        if len(occ) > cap:
            raise OccupancyViolation(f"{m.dst!r} would hold qubits {sorted(occ)}")
    return out


def apply_collmove(p: Placement, cm: CollMove) -> Placement:
    return apply_moves(p, cm.moves)


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def validate_layout(p: Placement, stage: Stage) -> list[Violation]:
    """Check a layout is safe to excite for ``stage``. An empty list means ok."""
    out: list[Violation] = []
    gates = set(stage.gates)
    for g in stage.gates:
        sa, sb = p.qubit_site.get(g.a), p.qubit_site.get(g.b)
        if sa is None or sb is None or sa != sb or sa.zone is not Zone.COMPUTE:
            out.append(Violation("not-colocated", f"gate {g.qubits} at {sa!r} / {sb!r}"))
    for s in sorted(p.site_occupants):
        occ = sorted(p.site_occupants[s])
        if s.zone is Zone.STORAGE:
            if len(occ) > STORAGE_CAPACITY:
                out.append(Violation("storage-overfull", f"{s!r} holds {occ}"))
            continue
        if len(occ) > COMPUTE_CAPACITY:
            out.append(Violation("overfull", f"{s!r} holds {occ}"))
        elif len(occ) == 2:
            a, b = occ
            if not any(g.a == a and g.b == b for g in gates):
                out.append(Violation("unexpected-pair", f"{s!r} holds non-partners {occ}"))
    return out


class _Planner:
    """One routing decision for one stage; ``demoted`` qubits may not stay static."""

    def __init__(
        self,
        current: Placement,
        stage: Stage,
        mode: Mode,
        params: HardwareParams,
        demoted: frozenset[int],
    ):
        self.p = current
        self.layout = current.layout
        self.stage = stage
        self.mode = Mode(mode)
        self.params = params
        self.demoted = demoted
        self.dest: dict[int, Site] = {}
        self.labels: dict[int, Label] = {}
        self.reserved: set[Site] = set()
        self.static_at: dict[Site, int] = {}

    def pos(self, s: Site) -> tuple[float, float]:
        return physical_position(s, self.layout, self.params)

    def is_free(self, s: Site) -> bool:
        # only sites empty at the start of the stage are handed out, so a move
        # never waits on another atom leaving its target
        return not self.p.site_occupants.get(s) and s not in self.reserved

    def nearest_free(self, zone: Zone, origin: Site) -> Site | None:
        ox, oy = self.pos(origin)
        best, best_key = None, None
        for s in self.layout.sites(zone):
            if not self.is_free(s):
                continue
            x, y = self.pos(s)
            key = ((x - ox) ** 2 + (y - oy) ** 2, s.row, s.col)
            if best_key is None or key < best_key:
                best, best_key = s, key
        return best

    def reserve(self, q: int, s: Site) -> None:
        self.reserved.add(s)
        self.dest[q] = s

    def step1_to_storage(self, interacting: frozenset[int]) -> None:
        idle = [
            q for q, s in self.p.qubit_site.items() if q not in interacting and s.zone is Zone.COMPUTE
        ]
        # farthest from storage picks first
        idle.sort(key=lambda q: (-self.pos(self.p.qubit_site[q])[1], self.p.qubit_site[q].col, q))
        cols, rows = self.layout.dims(Zone.STORAGE)
        for q in idle:
            src = self.p.qubit_site[q]
            self.labels[q] = Label.MOBILE
            target = None
            if src.col < cols:
                target = next(
                    (s for s in (Site(Zone.STORAGE, src.col, r) for r in range(rows)) if self.is_free(s)),
                    None,
                )
            if target is None:
                target = self.nearest_free(Zone.STORAGE, src)
            if target is None:
                raise InsufficientStorage(f"no empty storage site for qubit {q}")
            self.reserve(q, target)

    def step1_declutter(self, interacting: frozenset[int]) -> None:
        for q in sorted(self.p.qubit_site):
            src = self.p.qubit_site[q]
            if q in interacting or src.zone is not Zone.COMPUTE:
                continue
            others = self.p.occupants(src) - {q}
            # of two idle co-tenants the lower id keeps the site
            if not any(o in interacting or o < q for o in others):
                continue
            target = self.nearest_free(Zone.COMPUTE, src)
            if target is None:
                raise InsufficientCompute(f"no empty compute site to separate qubit {q}")
            self.labels[q] = Label.MOBILE
            self.reserve(q, target)

    def can_stay(self, q: int) -> bool:
        return q not in self.demoted and self.p.qubit_site[q] not in self.static_at

    def make_static(self, q: int) -> None:
        self.labels[q] = Label.STATIC
        self.static_at[self.p.qubit_site[q]] = q

    def step2_labels(self) -> list[tuple[int, int]]:
        """Label interacting qubits; returns (undecided, follower) pairs for step 3."""
        pending: list[tuple[int, int]] = []
        for g in sorted(self.stage.gates):
            a, b = g.a, g.b
            sa, sb = self.p.site_of(a), self.p.site_of(b)
            if sa == sb:
                self.make_static(a)
                self.make_static(b)
                continue
            a_st, b_st = sa.zone is Zone.STORAGE, sb.zone is Zone.STORAGE
            if a_st and b_st:
                mobile, other = a, b
                self.labels[mobile] = Label.MOBILE
                self.labels[other] = Label.UNDECIDED
                pending.append((other, mobile))
                continue
            if a_st or b_st:
                mobile, other = (a, b) if a_st else (b, a)
            else:
                ok_a, ok_b = self.can_stay(a), self.can_stay(b)
                mobile, other = (b, a) if ok_a and not ok_b else (a, b)
            self.labels[mobile] = Label.MOBILE
            if self.can_stay(other):
                self.make_static(other)
                self.dest[mobile] = self.p.qubit_site[other]
            else:
                self.labels[other] = Label.UNDECIDED
                pending.append((other, mobile))
        return pending

    def step3_resolve(self, pending: list[tuple[int, int]]) -> None:
        for undecided, follower in pending:
            target = self.nearest_free(Zone.COMPUTE, self.p.qubit_site[undecided])
            if target is None:
                raise InsufficientCompute(f"no empty compute site for qubits {undecided}, {follower}")
            self.reserve(undecided, target)
            self.dest[follower] = target

    def run(self) -> None:
        interacting = self.stage.interacting_qubits
        for q in interacting:
            self.p.site_of(q)
        if self.mode is Mode.WITH_STORAGE:
            self.step1_to_storage(interacting)
        else:
            self.step1_declutter(interacting)
        self.step3_resolve(self.step2_labels())

    def wait_cycle(self) -> list[int] | None:
        """Static qubits whose incoming partners wait on each other in a ring.

        An incoming atom may only land once the static qubit's old co-tenant
        has left; if those departures form a cycle no ordering of the moves
        keeps every site within capacity.
        """
        moving = {q: d for q, d in self.dest.items() if d != self.p.qubit_site[q]}
        waits: dict[int, list[int]] = {}
        for q, d in moving.items():
            waits[q] = sorted(o for o in self.p.occupants(d) if o in moving and o != q)
        state: dict[int, int] = {}
        stack: list[int] = []

        def visit(q: int) -> list[int] | None:
            state[q] = 1
            stack.append(q)
            for o in waits[q]:
                if state.get(o) == 1:
                    return stack[stack.index(o):]
                if o not in state:
                    found = visit(o)
                    if found:
                        return found
            stack.pop()
            state[q] = 2
            return None

        for q in sorted(moving):
            if q not in state:
                cyc = visit(q)
                if cyc:
                    return sorted(self.static_at[moving[m]] for m in cyc if moving[m] in self.static_at)
        return None


def plan_stage_moves(
    current: Placement,
    stage: Stage,
    mode: Mode,
    params: HardwareParams = DEFAULT_PARAMS,
) -> tuple[list[Move1Q], Placement]:
    """Decide every single-qubit move needed before ``stage`` can be excited.

    Returns the moves (ordered by qubit id) and the layout they produce.
    """
    demoted: frozenset[int] = frozenset()
    while True:
        planner = _Planner(current, stage, mode, params, demoted)
        planner.run()
        cycle = planner.wait_cycle()
        if not cycle:
            break
        # break the ring by sending one static qubit to a fresh site
        demoted = demoted | {cycle[0]}
    moves = [
        make_move(q, current.qubit_site[q], d, current.layout, params)
        for q, d in sorted(planner.dest.items())
        if d != current.qubit_site[q]
    ]
    return moves, apply_moves(current, moves)
