"""Compiler for zoned neutral-atom quantum computers.

Turns circuits of commuting CZ blocks into timed atom-movement schedules
and scores them with a product-form fidelity model.
"""

from .circuit import Circuit, CZGate, gate_count, parse_circuit, serialize_circuit
from .hardware import HardwareParams, Mode, Site, Zone, ZoneLayout, default_geometry
from .pipeline import CompileConfig, compile_circuit, run
from .fidelity import FidelityReport, evaluate

__all__ = [
    "Circuit",
    "CZGate",
    "gate_count",
    "parse_circuit",
    "serialize_circuit",
    "HardwareParams",
    "Mode",
    "Site",
    "Zone",
    "ZoneLayout",
    "default_geometry",
    "CompileConfig",
    "compile_circuit",
    "run",
    "FidelityReport",
    "evaluate",
]

__version__ = "0.1.0"
