"""Output-fidelity and execution-time model for compiled schedules.

The fidelity is a product of independent factors::

    f1**g1 * f2**g2 * f_exc**sum(n_i) * f_trans**N_trans * prod_q (1 - T_q / T2)

where ``n_i`` counts idle atoms hit by the i-th Rydberg pulse, ``N_trans``
counts SLM<->AOD hand-offs and ``T_q`` is the time atom ``q`` spends outside
storage without taking part in a gate.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

from .circuit import Circuit, gate_count
from .errors import DecoherenceOverflow, IncompleteTimeline, InconsistentCounters
from .hardware import DEFAULT_PARAMS, HardwareParams
from .scheduler import Schedule


@dataclass
class FidelityReport:
    f_cz: float
    f_exc: float
    f_trans: float
    f_dec: float
    f_1q: float | None
    total: float
    T_exe: float
    g2: int
    S: int
    sum_n_i: int
    N_trans: int
    T_q: dict[int, float] = field(default_factory=dict)


def interaction_counts(s: Schedule) -> dict[int, int]:
    counts = {q: 0 for q in s.timeline}
    for st in s.stages:
        for q in st.stage.interacting_qubits:
            counts[q] = counts.get(q, 0) + 1
    return counts


def compute_idle_times(s: Schedule) -> dict[int, float]:
    """Per-qubit time outside storage, less the pulses the qubit takes part in."""
    end = s.wall_time
    counts = interaction_counts(s)
    out = {}
    for q in range(s.num_qubits):
        ivs = s.timeline.get(q)
        if ivs is None:
            raise IncompleteTimeline(f"qubit {q} has no timeline")
        t = 0.0
        for iv in ivs:
            if iv.start != t:
                raise IncompleteTimeline(f"qubit {q}: gap or overlap at t={t}")
            t = iv.end
        if t != end:
            raise IncompleteTimeline(f"qubit {q}: timeline ends at {t}, schedule at {end}")
        outside = sum(iv.length for iv in ivs if iv.where != "storage")
        # clamp float dust; a pulse interval is never longer than outside time
        out[q] = max(outside - s.params.t_rydberg * counts[q], 0.0)
    return out


def execution_time(
    s: Schedule, c: Circuit | None = None, params: HardwareParams | None = None, include_1q: bool = False
) -> float:
    params = params or s.params
    total = 0.0
    for st in s.stages:
        total += sum(ch.duration for ch in st.chunks) + params.t_rydberg
    if include_1q:
        n_blocks = len(c.blocks) if c is not None else s.num_blocks
        total += (n_blocks + 1) * params.t_1q
    return total


def _check_counters(s: Schedule, c: Circuit | None) -> None:
    moves = sum(st.num_moves for st in s.stages)
    problems = []
    if s.S != len(s.stages):
        problems.append(f"S={s.S} but {len(s.stages)} stages")
    if s.N_trans != 2 * moves:
        problems.append(f"N_trans={s.N_trans} but {moves} moves")
    if s.sum_n_i != sum(st.n_i for st in s.stages):
        problems.append("sum_n_i disagrees with per-stage counts")
    if c is not None and s.g2 != gate_count(c):
        problems.append(f"g2={s.g2} but circuit has {gate_count(c)} gates")
    if problems:
        raise InconsistentCounters("; ".join(problems))


def evaluate(
    s: Schedule,
    c: Circuit | None = None,
    params: HardwareParams | None = None,
    include_1q: bool = False,
) -> FidelityReport:
    params = params or s.params or DEFAULT_PARAMS
    _check_counters(s, c)
    t_q = compute_idle_times(s)
    over = {q: t for q, t in t_q.items() if t >= params.t2}
    if over:
        q = min(over)
        raise DecoherenceOverflow(f"qubit {q} idles {over[q]:.6g} s, not below T2 = {params.t2} s")
    f_cz = params.f2**s.g2
    f_exc = params.f_exc**s.sum_n_i
    f_trans = params.f_trans**s.N_trans
    f_dec = math.prod(1.0 - t / params.t2 for _, t in sorted(t_q.items()))
    f_1q = None
    if include_1q and c is not None and c.num_1q_gates is not None:
        f_1q = params.f1**c.num_1q_gates
    total = f_cz * f_exc * f_trans * f_dec * (1.0 if f_1q is None else f_1q)
    return FidelityReport(
        f_cz=f_cz,
        f_exc=f_exc,
        f_trans=f_trans,
        f_dec=f_dec,
        f_1q=f_1q,
        total=total,
        T_exe=execution_time(s, c, params, include_1q),
        g2=s.g2,
        S=s.S,
        sum_n_i=s.sum_n_i,
        N_trans=s.N_trans,
        T_q=t_q,
    )


CSV_COLUMNS = [
    "circuit",
    "mode",
    "n_aods",
    "f_cz",
    "f_exc",
    "f_trans",
    "f_dec",
    "total",
    "T_exe_us",
    "S",
    "N_trans",
    "T_comp_ms",
]


def report_to_dict(r: FidelityReport, **extra) -> dict:
    doc = asdict(r)
    doc["T_exe_us"] = doc.pop("T_exe") * 1e6
    doc["T_q_us"] = {str(q): t * 1e6 for q, t in sorted(doc.pop("T_q").items())}
    doc.update(extra)
    return doc


def report_row(doc: dict) -> list:
    return [doc.get(col, "") if doc.get(col) is not None else "" for col in CSV_COLUMNS]


def reports_to_csv(docs: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for d in docs:
        w.writerow(report_row(d))
    return buf.getvalue()


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return "-" if v in (None, "") else str(v)


def reports_to_markdown(docs: list[dict]) -> str:
    lines = ["| " + " | ".join(CSV_COLUMNS) + " |", "|" + "---|" * len(CSV_COLUMNS)]
    for d in docs:
        lines.append("| " + " | ".join(_fmt(d.get(col)) for col in CSV_COLUMNS) + " |")
    return "\n".join(lines) + "\n"


def dump_report(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
