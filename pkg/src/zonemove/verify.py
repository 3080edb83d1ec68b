"""Replay a serialized schedule and re-check every physical and bookkeeping rule."""

from __future__ import annotations

import math
from itertools import combinations

from .errors import OccupancyViolation, StaleMove, ZoneMoveError
from .hardware import HardwareParams, Site, Zone, layout_from_dict, move_duration
from .router import Placement, Violation, apply_moves, conflicts, make_move, validate_layout
from .stages import Stage
from .circuit import CZGate

REL_TOL = 1e-9
ABS_TOL_US = 1e-9


def _close(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=ABS_TOL_US)


def _force(p: Placement, moves) -> Placement:
    qs = dict(p.qubit_site)
    for m in moves:
        qs[m.qubit] = m.dst
    return Placement(p.layout, qs)


def verify_schedule(doc: dict) -> list[Violation]:
    """Return every violation found; an empty list means the schedule is clean."""
    try:
        return _verify(doc)
    except (KeyError, TypeError, ValueError, ZoneMoveError) as exc:
        return [Violation("MalformedSchedule", f"{type(exc).__name__}: {exc}")]


def _verify(doc: dict) -> list[Violation]:
    out: list[Violation] = []
    params = HardwareParams(**doc["params"])
    layout = layout_from_dict(doc["layout"])
    p = Placement(layout, {q: Site.from_json(s) for q, s in enumerate(doc["initial_placement"])})
    for s, occ in p.site_occupants.items():
        cap = 2 if s.zone is Zone.COMPUTE else 1
        if len(occ) > cap or not layout.contains(s):
            out.append(Violation("OccupancyViolation", f"initial layout: {s!r} holds {sorted(occ)}"))

    t = 0.0
    n_moves = 0
    sum_n_i = 0
    g2 = 0
    for i, st in enumerate(doc["stages"]):
        where = f"stage {i}"
        stage = Stage(tuple(CZGate(a, b) for a, b in st["gates"]))
        g2 += len(stage.gates)
        if not _close(st["start_us"], t * 1e6):
            out.append(Violation("DurationMismatch", f"{where}: starts at {st['start_us']} us, expected {t * 1e6}"))
        for j, ch in enumerate(st["chunks"]):
            cw = f"{where} chunk {j}"
            if not _close(ch["start_us"], t * 1e6):
                out.append(Violation("DurationMismatch", f"{cw}: starts at {ch['start_us']} us, expected {t * 1e6}"))
            chunk_moves = []
            longest = 0.0
            if not ch["collmoves"]:
                out.append(Violation("MalformedSchedule", f"{cw}: no collective moves"))
            for cm in ch["collmoves"]:
                moves = [
                    make_move(m["qubit"], Site.from_json(m["from"]), Site.from_json(m["to"]), layout, params)
                    for m in cm["moves"]
                ]
                for m1, m2 in combinations(moves, 2):
                    if conflicts(m1, m2):
                        out.append(
                            Violation("ConflictViolation", f"{cw} AOD {cm['aod']}: qubits {m1.qubit} and {m2.qubit}")
                        )
                dur = move_duration(max((m.distance for m in moves), default=0.0), params)
                if not _close(cm["duration_us"], dur * 1e6):
                    out.append(Violation("DurationMismatch", f"{cw} AOD {cm['aod']}: {cm['duration_us']} us != {dur * 1e6}"))
                longest = max(longest, dur)
                chunk_moves.extend(moves)
            expected = params.transfer_legs * params.t_trans + longest
            if not _close(ch["duration_us"], expected * 1e6):
                out.append(Violation("DurationMismatch", f"{cw}: {ch['duration_us']} us != {expected * 1e6}"))
            try:
                p = apply_moves(p, chunk_moves)
            except StaleMove as exc:
                out.append(Violation("StaleMove", f"{cw}: {exc}"))
                p = _force(p, chunk_moves)
            except OccupancyViolation as exc:
                out.append(Violation("OccupancyViolation", f"{cw}: {exc}"))
                p = _force(p, chunk_moves)
            n_moves += len(chunk_moves)
            t += expected
        if not _close(st["excitation_us"], t * 1e6):
            out.append(Violation("DurationMismatch", f"{where}: pulse at {st['excitation_us']} us, expected {t * 1e6}"))
        for v in validate_layout(p, stage):
            kind = "OccupancyViolation" if "overfull" in v.kind else "LayoutViolation"
            out.append(Violation(kind, f"{where}: {v}"))
        exposed = [q for q in p.qubits_in(Zone.COMPUTE) if q not in stage.interacting_qubits]
        if st["n_i"] != len(exposed):
            out.append(Violation("CounterMismatch", f"{where}: n_i={st['n_i']}, replay finds {len(exposed)}"))
        sum_n_i += len(exposed)
        t += params.t_rydberg

    counters = doc["counters"]
    expect = {"S": len(doc["stages"]), "N_trans": 2 * n_moves, "sum_n_i": sum_n_i, "g2": g2}
    for key, val in expect.items():
        if counters.get(key) != val:
            out.append(Violation("CounterMismatch", f"{key}={counters.get(key)}, replay finds {val}"))
    if not _close(doc["T_exe_us"], t * 1e6):
        out.append(Violation("CounterMismatch", f"T_exe_us={doc['T_exe_us']}, replay finds {t * 1e6}"))
    return out
