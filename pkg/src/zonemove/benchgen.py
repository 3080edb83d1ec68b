"""Seeded generators for the benchmark circuit families.

Only the CZ skeleton of each family is produced, with one fixed block
decomposition per family:

* ``qaoa-regular<d>``: one block, the edges of a random d-regular graph
* ``qaoa-random``: one block, every pair kept with probability ``p``
* ``bv``: one block of ``(i, n-1)`` for each 1 in a secret of exactly n//2 ones
* ``vqe``: one block with every pair (full entanglement)
* ``qsim``: one block per Pauli string, a chain through its support in index order
* ``qft``: ``n-1`` blocks, block ``i`` = ``{(i, j) : j > i}``

All randomness comes from :class:`SplitMix64`, so a (family, n, seed) triple
yields the same circuit on every platform.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations

from .circuit import Circuit, CZGate
from .errors import DegenerateSpec, InfeasibleSpec

MASK64 = (1 << 64) - 1
REGULAR_RETRIES = 1000
_DEFAULT_PROBABILITY = {"qaoa-random": 0.5, "qsim": 0.3}


class SplitMix64:
    """Steele/Lea/Flood SplitMix64; the state is the raw 64-bit seed."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def random(self) -> float:
        """Uniform double in [0, 1) from the top 53 bits."""
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled to avoid modulo bias."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def shuffle(self, items: list) -> None:
        # Fisher-Yates, walking down from the end
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class BenchSpec:
    family: str
    num_qubits: int
    seed: int = 0
    degree: int = 3
    # None picks the family default: 0.5 per pair for qaoa-random, 0.3 per qubit for qsim
    probability: float | None = None
    num_strings: int = 10

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise DegenerateSpec(f"unknown family {self.family!r}")
        if self.probability is None:
            object.__setattr__(self, "probability", _DEFAULT_PROBABILITY.get(self.family, 0.5))
        if not 0.0 < self.probability <= 1.0:
            raise DegenerateSpec(f"probability must lie in (0, 1], got {self.probability}")
        if self.family == "qsim" and self.num_strings < 1:
            raise DegenerateSpec("qsim needs at least one Pauli string")


def _regular_edges(n: int, d: int, rng: SplitMix64) -> list[tuple[int, int]]:
    """Stub pairing that only joins suitable stubs; restarts on a dead end.

    Plain configuration-model rejection stalls for dense degrees, so pairs are
    drawn among the remaining stubs that would form a new simple edge.
    """
    for _ in range(REGULAR_RETRIES):
        left = {v: d for v in range(n)}
        edges: set[tuple[int, int]] = set()
        while left:
            verts = sorted(left)
            cands = [
                (a, b)
                for i, a in enumerate(verts)
                for b in verts[i + 1 :]
                if (a, b) not in edges
            ]
            if not cands:
                break
            weights = [left[a] * left[b] for a, b in cands]
            pick = rng.below(sum(weights))
            for (a, b), w in zip(cands, weights):
                if pick < w:
                    break
                pick -= w
            edges.add((a, b))
            for v in (a, b):
                left[v] -= 1
                if not left[v]:
                    del left[v]
        if not left:
            return sorted(edges)
    raise InfeasibleSpec(f"no simple {d}-regular graph on {n} vertices after {REGULAR_RETRIES} tries")


def _qaoa_regular(spec: BenchSpec, rng: SplitMix64) -> list[list[tuple[int, int]]]:
    n, d = spec.num_qubits, spec.degree
    if d < 1:
        raise DegenerateSpec("degree must be at least 1")
    if d >= n or (n * d) % 2:
        raise InfeasibleSpec(f"no {d}-regular graph on {n} vertices")
    return [_regular_edges(n, d, rng)]


def _qaoa_random(spec: BenchSpec, rng: SplitMix64):
    n = spec.num_qubits
    return [[(i, j) for i, j in combinations(range(n), 2) if rng.random() < spec.probability]]


def _bv(spec: BenchSpec, rng: SplitMix64):
    n = spec.num_qubits
    data = list(range(n - 1))
    rng.shuffle(data)
    ones = sorted(data[: n // 2])
    return [[(i, n - 1) for i in ones]]


def _vqe(spec: BenchSpec, rng: SplitMix64):
    return [list(combinations(range(spec.num_qubits), 2))]


def _qsim(spec: BenchSpec, rng: SplitMix64):
    n = spec.num_qubits
    blocks = []
    for _ in range(spec.num_strings):
        while True:
            support = [q for q in range(n) if rng.random() < spec.probability]
            # a string touching fewer than two qubits has no entangling part
            if len(support) >= 2:
                break
        blocks.append(list(zip(support, support[1:])))
    return blocks


def _qft(spec: BenchSpec, rng: SplitMix64):
    n = spec.num_qubits
    return [[(i, j) for j in range(i + 1, n)] for i in range(n - 1)]


FAMILIES = {
    "qaoa-regular": _qaoa_regular,
    "qaoa-random": _qaoa_random,
    "bv": _bv,
    "vqe": _vqe,
    "qsim": _qsim,
    "qft": _qft,
}


def generate(spec: BenchSpec) -> Circuit:
    if spec.num_qubits < 2:
        raise DegenerateSpec(f"{spec.family} needs at least 2 qubits, got {spec.num_qubits}")
    rng = SplitMix64(spec.seed)
    blocks = FAMILIES[spec.family](spec, rng)
    return Circuit(spec.num_qubits, tuple(tuple(CZGate(a, b) for a, b in blk) for blk in blocks))


_REGULAR_NAME = re.compile(r"qaoa-regular(\d+)$")


def spec_from_name(name: str, num_qubits: int, seed: int = 0, **kwargs) -> BenchSpec:
    """Build a spec from a CLI-style family name such as ``qaoa-regular3``."""
    name = name.lower()
    m = _REGULAR_NAME.match(name)
    if m:
        return BenchSpec("qaoa-regular", num_qubits, seed, degree=int(m.group(1)), **kwargs)
    if name == "qsim-rand":
        name = "qsim"
    return BenchSpec(name, num_qubits, seed, **kwargs)
