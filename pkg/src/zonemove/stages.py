"""Stage partitioning and ordering for commuting CZ blocks.

A stage is a set of CZ gates on pairwise disjoint qubits, executed by a
single Rydberg excitation. Each block is split into stages by greedy
coloring of its gate-conflict graph; the stages of a block are then ordered
to limit traffic between the storage and computation zones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .circuit import Circuit, CZGate
from .errors import EmptyInput

DEFAULT_ALPHA = 0.5


@dataclass(frozen=True)
class Stage:
    gates: tuple[CZGate, ...]
    # position in the block's partition; used only for tie-breaking
    index: int = 0

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for g in self.gates:
            if g.a in seen or g.b in seen:
                raise ValueError(f"stage gates overlap on qubit(s) of {g.qubits}")
            seen.update(g.qubits)

    @property
    def interacting_qubits(self) -> frozenset[int]:
        return frozenset(q for g in self.gates for q in g.qubits)

    def partner(self) -> dict[int, int]:
        out = {}
        for g in self.gates:
            out[g.a] = g.b
            out[g.b] = g.a
        return out


@dataclass(frozen=True)
class StagePlan:
    blocks: tuple[tuple[Stage, ...], ...]
    alpha: float = DEFAULT_ALPHA

    def __iter__(self):
        """Yield ``(block_index, stage)`` in execution order."""
        for b, stages in enumerate(self.blocks):
            for st in stages:
                yield b, st

    @property
    def num_stages(self) -> int:
        return sum(len(s) for s in self.blocks)


def conflict_graph(gates: Sequence[CZGate]) -> list[set[int]]:
    """Adjacency sets over gate indices; two gates are adjacent when they share a qubit."""
    by_qubit: dict[int, list[int]] = {}
    for i, g in enumerate(gates):
        for q in g.qubits:
            by_qubit.setdefault(q, []).append(i)
    adj: list[set[int]] = [set() for _ in gates]
    for idx in by_qubit.values():
        for i in idx:
            adj[i].update(j for j in idx if j != i)
    return adj


def partition_block(block: Sequence[CZGate]) -> list[Stage]:
    gates = list(block)
    if not gates:
        return []
    adj = conflict_graph(gates)
    order = sorted(range(len(gates)), key=lambda i: (-len(adj[i]), i))
    color = [-1] * len(gates)
    for v in order:
        # first color not used by an already-colored neighbour
        taken = {color[u] for u in adj[v] if color[u] != -1}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    n_colors = max(color) + 1
    return [
        Stage(tuple(g for i, g in enumerate(gates) if color[i] == c), index=c)
        for c in range(n_colors)
    ]


def stage_distance(cur: frozenset[int], nxt: frozenset[int], alpha: float) -> float:
    """Qubits leaving the interaction set cost 1, qubits joining it cost ``alpha``."""
    return len(cur - nxt) + alpha * len(nxt - cur)


def order_stages(stages: Sequence[Stage], alpha: float = DEFAULT_ALPHA) -> list[Stage]:
    if not stages:
        raise EmptyInput("cannot order an empty list of stages")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    remaining = list(range(len(stages)))
    qsets = [st.interacting_qubits for st in stages]
    first = min(remaining, key=lambda i: (len(qsets[i]), i))
    order = [first]
    remaining.remove(first)
    while remaining:
        cur = qsets[order[-1]]
        nxt = min(remaining, key=lambda i: (stage_distance(cur, qsets[i], alpha), i))
        order.append(nxt)
        remaining.remove(nxt)
    return [stages[i] for i in order]


def plan_stages(c: Circuit, alpha: float = DEFAULT_ALPHA) -> StagePlan:
    """Partition and order every block; block order is kept as given."""
    blocks = []
    for blk in c.blocks:
        stages = partition_block(blk)
        blocks.append(tuple(order_stages(stages, alpha)) if stages else ())
    return StagePlan(tuple(blocks), alpha)
