"""Timed execution schedules.

Collective moves of a stage are ordered so atoms enter storage early and
leave it late, then dealt out to the available AODs in consecutive chunks.
A chunk costs one transfer plus the slowest of its collective moves; after
the last chunk of a stage a single Rydberg pulse runs all of its CZ gates.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Sequence

from .circuit import Circuit, gate_count
from .errors import InvalidAodCount, OccupancyViolation
from .hardware import DEFAULT_PARAMS, HardwareParams, Mode, Zone, ZoneLayout, layout_to_dict
from .router import (
    CollMove,
    Placement,
    apply_collmove,
    apply_moves,
    group_moves,
    plan_stage_moves,
    validate_layout,
)
from .stages import Stage, StagePlan

SCHEDULE_FORMAT = "zonemove-schedule/1"


@dataclass(frozen=True)
class ParallelChunk:
    collmoves: tuple[CollMove, ...]
    duration: float
    start: float = 0.0

    @property
    def end(self) -> float:
        return self.start + self.duration


@dataclass(frozen=True)
class Interval:
    start: float
    end: float
    where: str  # "storage", "compute" or "transit"

    @property
    def length(self) -> float:
        return self.end - self.start


@dataclass
class StageSchedule:
    block: int
    stage: Stage
    chunks: tuple[ParallelChunk, ...]
    start: float
    excitation_at: float
    # non-interacting qubits left in the computation zone during the pulse
    exposed: tuple[int, ...]
    t_rydberg: float

    @property
    def n_i(self) -> int:
        return len(self.exposed)

    @property
    def end(self) -> float:
        return self.excitation_at + self.t_rydberg

    @property
    def num_moves(self) -> int:
        return sum(len(cm.moves) for ch in self.chunks for cm in ch.collmoves)


@dataclass
class Schedule:
    num_qubits: int
    num_blocks: int
    mode: Mode
    n_aods: int
    params: HardwareParams
    layout: ZoneLayout
    initial: Placement
    final: Placement
    stages: list[StageSchedule]
    timeline: dict[int, list[Interval]]
    g2: int
    N_trans: int
    S: int
    sum_n_i: int
    alpha: float | None = None
    meta: dict = field(default_factory=dict)

    @property
    def wall_time(self) -> float:
        return self.stages[-1].end if self.stages else 0.0


def order_collmoves(groups: Sequence[CollMove]) -> list[CollMove]:
    """Stable sort by (atoms entering storage - atoms leaving it), largest first."""
    return sorted(groups, key=lambda g: -(g.n_in - g.n_out))


def chunk_duration(collmoves: Sequence[CollMove], params: HardwareParams = DEFAULT_PARAMS) -> float:
    return params.transfer_legs * params.t_trans + max(cm.duration for cm in collmoves)


def schedule_aods(
    ordered: Sequence[CollMove], n_aods: int, params: HardwareParams = DEFAULT_PARAMS
) -> list[ParallelChunk]:
    if isinstance(n_aods, bool) or not isinstance(n_aods, int) or n_aods < 1:
        raise InvalidAodCount(f"need at least one AOD, got {n_aods!r}")
    chunks = []
    t = 0.0
    for i in range(0, len(ordered), n_aods):
        members = tuple(ordered[i : i + n_aods])
        d = chunk_duration(members, params)
        chunks.append(ParallelChunk(members, d, t))
        t += d
    return chunks


def sequence_for_capacity(
    p: Placement, ordered: Sequence[CollMove], params: HardwareParams = DEFAULT_PARAMS
) -> list[CollMove]:
    """Reorder (and if unavoidable split) collective moves so no site overfills in transit.

    An atom joining a static partner may only land once the partner's previous
    co-tenant has left. The priority order is kept wherever that allows;
    otherwise the earliest group that can run goes first, and a group none of
    whose members can all land yet is split.
    """
    remaining = list(ordered)
    out: list[CollMove] = []
    cur = p
    while remaining:
        for i, g in enumerate(remaining):
            try:
                cur = apply_collmove(cur, g)
            except OccupancyViolation:
                continue
            out.append(remaining.pop(i))
            break
        else:
            cur = _split_first_ready(cur, remaining, out, params)
    return out


def _split_first_ready(cur, remaining, out, params):
    for i, g in enumerate(remaining):
        ready = []
        for m in g.moves:
            try:
                apply_moves(cur, [m])
            except OccupancyViolation:
                continue
            ready.append(m)
        if not ready:
            continue
        try:
            nxt = apply_moves(cur, ready)
        except OccupancyViolation:
            ready = ready[:1]
            nxt = apply_moves(cur, ready)
        rest = [m for m in g.moves if m not in ready]
        out.append(CollMove.of(ready, params))
        remaining[i] = CollMove.of(rest, params)
        return nxt
    raise OccupancyViolation("collective moves wait on each other; no order fits site capacity")


def build_schedule(
    plan: StagePlan,
    initial: Placement,
    mode: Mode,
    n_aods: int = 1,
    params: HardwareParams = DEFAULT_PARAMS,
    circuit: Circuit | None = None,
) -> Schedule:
    mode = Mode(mode)
    if isinstance(n_aods, bool) or not isinstance(n_aods, int) or n_aods < 1:
        raise InvalidAodCount(f"need at least one AOD, got {n_aods!r}")
    qubits = sorted(initial.qubit_site)
    where = {q: initial.qubit_site[q].zone.value for q in qubits}
    since = {q: 0.0 for q in qubits}
    timeline: dict[int, list[Interval]] = {q: [] for q in qubits}

    def settle(q: int, t: float, new_where: str) -> None:
        if t > since[q]:
            timeline[q].append(Interval(since[q], t, where[q]))
        since[q] = t
        where[q] = new_where

    placement = initial
    stages: list[StageSchedule] = []
    t = 0.0
    n_moves = 0
    for block, stage in plan:
        moves, target = plan_stage_moves(placement, stage, mode, params)
        ordered = order_collmoves(group_moves(moves, params))
        ordered = sequence_for_capacity(placement, ordered, params)
        chunks = []
        start = t
        for ch in schedule_aods(ordered, n_aods, params):
            ch = dataclasses.replace(ch, start=t)
            for cm in ch.collmoves:
                placement = apply_collmove(placement, cm)
                for m in cm.moves:
                    settle(m.qubit, ch.start, "transit")
                    settle(m.qubit, ch.end, m.dst.zone.value)
            chunks.append(ch)
            t = ch.end
        assert placement == target
        bad = validate_layout(placement, stage)
        if bad:
            raise OccupancyViolation("; ".join(map(str, bad)))
        interacting = stage.interacting_qubits
        exposed = tuple(q for q in placement.qubits_in(Zone.COMPUTE) if q not in interacting)
        stages.append(StageSchedule(block, stage, tuple(chunks), start, t, exposed, params.t_rydberg))
        n_moves += sum(len(cm.moves) for ch in chunks for cm in ch.collmoves)
        t += params.t_rydberg
    for q in qubits:
        settle(q, t, where[q])

    g2 = gate_count(circuit) if circuit is not None else sum(len(st.gates) for _, st in plan)
    return Schedule(
        num_qubits=len(qubits),
        num_blocks=len(plan.blocks) if circuit is None else len(circuit.blocks),
        mode=mode,
        n_aods=n_aods,
        params=params,
        layout=initial.layout,
        initial=initial,
        final=placement,
        stages=stages,
        timeline=timeline,
        g2=g2,
        N_trans=2 * n_moves,
        S=len(stages),
        sum_n_i=sum(st.n_i for st in stages),
        alpha=plan.alpha,
    )


def _us(seconds: float) -> float:
    return seconds * 1e6


def schedule_to_dict(s: Schedule) -> dict:
    stages = []
    for st in s.stages:
        chunks = []
        for ch in st.chunks:
            chunks.append(
                {
                    "start_us": _us(ch.start),
                    "duration_us": _us(ch.duration),
                    "collmoves": [
                        {
                            "aod": k,
                            "duration_us": _us(cm.duration),
                            "moves": [m.to_json() for m in cm.moves],
                        }
                        for k, cm in enumerate(ch.collmoves)
                    ],
                }
            )
        stages.append(
            {
                "block": st.block,
                "gates": [[g.a, g.b] for g in st.stage.gates],
                "start_us": _us(st.start),
                "chunks": chunks,
                "excitation_us": _us(st.excitation_at),
                "n_i": st.n_i,
            }
        )
    return {
        "format": SCHEDULE_FORMAT,
        "num_qubits": s.num_qubits,
        "num_blocks": s.num_blocks,
        "mode": s.mode.value,
        "n_aods": s.n_aods,
        "alpha": s.alpha,
        "params": dataclasses.asdict(s.params),
        "layout": layout_to_dict(s.layout),
        "initial_placement": s.initial.to_json(),
        "stages": stages,
        "counters": {"g2": s.g2, "S": s.S, "N_trans": s.N_trans, "sum_n_i": s.sum_n_i},
        "T_exe_us": _us(s.wall_time),
    }


def dump_schedule(s: Schedule) -> str:
    return json.dumps(schedule_to_dict(s), indent=2, sort_keys=True) + "\n"
