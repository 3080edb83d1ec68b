"""End-to-end compilation: stages, routing, move scheduling, scoring."""

from __future__ import annotations

import time
from dataclasses import dataclass

from .circuit import Circuit
from .fidelity import FidelityReport, evaluate
from .hardware import DEFAULT_PARAMS, HardwareParams, Mode, ZoneLayout, default_geometry, initial_layout
from .scheduler import Schedule, build_schedule
from .stages import DEFAULT_ALPHA, plan_stages


@dataclass(frozen=True)
class CompileConfig:
    mode: Mode = Mode.WITH_STORAGE
    n_aods: int = 1
    alpha: float = DEFAULT_ALPHA
    hw_path: str | None = None
    include_1q: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode", Mode(self.mode))
        if self.n_aods < 1:
            raise ValueError("n_aods must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")


@dataclass
class CompileResult:
    schedule: Schedule
    report: FidelityReport
    t_comp: float  # seconds of wall clock spent compiling


def compile_circuit(
    c: Circuit,
    mode: Mode = Mode.WITH_STORAGE,
    n_aods: int = 1,
    alpha: float = DEFAULT_ALPHA,
    params: HardwareParams = DEFAULT_PARAMS,
    layout: ZoneLayout | None = None,
) -> Schedule:
    layout = layout or default_geometry(max(c.num_qubits, 1))
    plan = plan_stages(c, alpha)
    start = initial_layout(c, layout, mode)
    return build_schedule(plan, start, mode, n_aods, params, circuit=c)


def run(
    c: Circuit,
    config: CompileConfig,
    params: HardwareParams = DEFAULT_PARAMS,
    layout: ZoneLayout | None = None,
) -> CompileResult:
    t0 = time.perf_counter()
    sched = compile_circuit(c, config.mode, config.n_aods, config.alpha, params, layout)
    t_comp = time.perf_counter() - t0
    return CompileResult(sched, evaluate(sched, c, params, config.include_1q), t_comp)
