"""Circuits as ordered blocks of commuting CZ gates."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DuplicateGateInBlock, MalformedInput, QubitOutOfRange, SelfPair


@dataclass(frozen=True, order=True)
class CZGate:
    """A CZ between two qubits, always stored with ``a < b``."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a == self.b:
            raise SelfPair(f"CZ gate on a single qubit ({self.a}, {self.b})")
        if self.a > self.b:
            lo, hi = self.b, self.a
            object.__setattr__(self, "a", lo)
            object.__setattr__(self, "b", hi)

    @property
    def qubits(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __iter__(self):
        return iter((self.a, self.b))


CZBlock = tuple[CZGate, ...]


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    blocks: tuple[CZBlock, ...] = ()
    num_1q_gates: int | None = field(default=None)

    def __post_init__(self) -> None:
        blocks = tuple(tuple(_as_gate(g) for g in blk) for blk in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        validate_circuit(self)

    @classmethod
    def from_pairs(
        cls,
        num_qubits: int,
        blocks: Iterable[Iterable[Sequence[int]]],
        num_1q_gates: int | None = None,
    ) -> Circuit:
        return cls(num_qubits, tuple(tuple(CZGate(*p) for p in blk) for blk in blocks), num_1q_gates)

    @property
    def gates(self) -> list[CZGate]:
        return [g for blk in self.blocks for g in blk]


def _as_gate(g) -> CZGate:
    if isinstance(g, CZGate):
        return g
    a, b = g
    return CZGate(a, b)


def validate_circuit(c: Circuit) -> None:
    if isinstance(c.num_qubits, bool) or not isinstance(c.num_qubits, int) or c.num_qubits < 0:
        raise MalformedInput(f"num_qubits must be a non-negative integer, got {c.num_qubits!r}")
    if c.num_1q_gates is not None and (
        isinstance(c.num_1q_gates, bool) or not isinstance(c.num_1q_gates, int) or c.num_1q_gates < 0
    ):
        raise MalformedInput(f"num_1q_gates must be a non-negative integer, got {c.num_1q_gates!r}")
    for i, blk in enumerate(c.blocks):
        seen: set[CZGate] = set()
        for g in blk:
            if g.a < 0 or g.b >= c.num_qubits:
                raise QubitOutOfRange(f"block {i}: gate {g.qubits} outside 0..{c.num_qubits - 1}")
            if g in seen:
                raise DuplicateGateInBlock(f"block {i}: gate {g.qubits} appears twice")
            seen.add(g)


def gate_count(c: Circuit) -> int:
    return sum(len(blk) for blk in c.blocks)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def circuit_from_dict(doc) -> Circuit:
    if not isinstance(doc, dict):
        raise MalformedInput("circuit document must be a JSON object")
    unknown = set(doc) - {"num_qubits", "blocks", "num_1q_gates"}
    if unknown:
        raise MalformedInput(f"unknown keys: {sorted(unknown)}")
    if "num_qubits" not in doc or "blocks" not in doc:
        raise MalformedInput("circuit needs 'num_qubits' and 'blocks'")
    n = doc["num_qubits"]
    if not _is_int(n) or n < 0:
        raise MalformedInput(f"num_qubits must be a non-negative integer, got {n!r}")
    g1 = doc.get("num_1q_gates")
    if g1 is not None and (not _is_int(g1) or g1 < 0):
        raise MalformedInput(f"num_1q_gates must be a non-negative integer, got {g1!r}")
    blocks = doc["blocks"]
    if not isinstance(blocks, list):
        raise MalformedInput("'blocks' must be a list")
    parsed = []
    for i, blk in enumerate(blocks):
        if not isinstance(blk, list):
            raise MalformedInput(f"block {i} must be a list of pairs")
        gates = []
        for pair in blk:
            if not (isinstance(pair, list) and len(pair) == 2 and all(_is_int(q) for q in pair)):
                raise MalformedInput(f"block {i}: bad gate {pair!r}")
            if pair[0] < 0 or pair[1] < 0:
                raise QubitOutOfRange(f"block {i}: negative qubit in {pair!r}")
            gates.append(CZGate(pair[0], pair[1]))
        parsed.append(tuple(gates))
    return Circuit(n, tuple(parsed), g1)


def parse_circuit(text: str | bytes) -> Circuit:
    """Parse a circuit JSON document; raises a ``CircuitError`` subclass on bad input."""
    try:
        doc = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise MalformedInput(f"not valid JSON: {exc}") from exc
    return circuit_from_dict(doc)


def circuit_to_dict(c: Circuit) -> dict:
    doc: dict = {
        "num_qubits": c.num_qubits,
        "blocks": [[[g.a, g.b] for g in blk] for blk in c.blocks],
    }
    if c.num_1q_gates is not None:
        doc["num_1q_gates"] = c.num_1q_gates
    return doc


def serialize_circuit(c: Circuit, indent: int | None = None) -> str:
    if indent is None:
        return json.dumps(circuit_to_dict(c), separators=(",", ":"))
    return json.dumps(circuit_to_dict(c), indent=indent)
