"""Zoned-architecture geometry, physical parameters and timing laws.

Coordinates are in micrometres, times in seconds. The computation zone
occupies ``y >= 0``; the storage zone sits below it, starting ``zone_gap``
under compute row 0 and growing towards negative ``y``.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from .errors import InsufficientCapacity, MalformedInput, SiteOutOfBounds

if TYPE_CHECKING:
    from .circuit import Circuit
    from .router import Placement


class Zone(str, enum.Enum):
    COMPUTE = "compute"
    STORAGE = "storage"


class Mode(str, enum.Enum):
    WITH_STORAGE = "with-storage"
    NON_STORAGE = "non-storage"


@dataclass(frozen=True)
class HardwareParams:
    f1: float = 0.9999
    f2: float = 0.995
    f_exc: float = 0.9975
    f_trans: float = 0.999
    t_1q: float = 1e-6
    t_rydberg: float = 270e-9
    t_trans: float = 15e-6
    accel: float = 2750.0  # m/s^2
    t2: float = 1.5
    site_pitch: float = 15.0  # um
    zone_gap: float = 30.0  # um
    # transfers charged per parallel chunk in the duration formula
    transfer_legs: int = 1

    def __post_init__(self) -> None:
        for name in ("f1", "f2", "f_exc", "f_trans"):
            v = getattr(self, name)
            if not 0.0 < v <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {v}")
        for name in ("t_1q", "t_rydberg", "t_trans", "accel", "t2", "zone_gap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.site_pitch < 10.0:
            raise ValueError(f"site_pitch {self.site_pitch} um is below the 10 um safe spacing")
        if self.transfer_legs < 0:
            raise ValueError("transfer_legs must be non-negative")


DEFAULT_PARAMS = HardwareParams()


@dataclass(frozen=True)
class ZoneLayout:
    compute_cols: int
    compute_rows: int
    storage_cols: int
    storage_rows: int

    def __post_init__(self) -> None:
        if min(self.compute_cols, self.compute_rows, self.storage_cols, self.storage_rows) < 1:
            raise ValueError(f"zone dimensions must be >= 1: {self}")

    def dims(self, zone: Zone) -> tuple[int, int]:
        if zone is Zone.COMPUTE:
            return self.compute_cols, self.compute_rows
        return self.storage_cols, self.storage_rows

    def capacity(self, zone: Zone) -> int:
        cols, rows = self.dims(zone)
        return cols * rows

    def sites(self, zone: Zone) -> list[Site]:
        """All sites of ``zone`` in row-major order."""
        cols, rows = self.dims(zone)
        return [Site(zone, c, r) for r in range(rows) for c in range(cols)]

    def contains(self, s: Site) -> bool:
        cols, rows = self.dims(s.zone)
        return 0 <= s.col < cols and 0 <= s.row < rows


@dataclass(frozen=True, order=True)
class Site:
    zone: Zone
    col: int
    row: int

    def __repr__(self) -> str:
        return f"{self.zone.value[0].upper()}({self.col},{self.row})"

    def to_json(self) -> list:
        return [self.zone.value, self.col, self.row]

    @classmethod
    def from_json(cls, v) -> Site:
        zone, col, row = v
        return cls(Zone(zone), int(col), int(row))


def default_geometry(num_qubits: int) -> ZoneLayout:
    """ceil(sqrt(n)) square compute grid; storage twice as many rows."""
    if num_qubits < 1:
        raise ValueError("num_qubits must be >= 1")
    side = math.isqrt(num_qubits - 1) + 1
    return ZoneLayout(side, side, side, 2 * side)


def physical_position(
    s: Site, layout: ZoneLayout, params: HardwareParams = DEFAULT_PARAMS
) -> tuple[float, float]:
    if not layout.contains(s):
        raise SiteOutOfBounds(f"{s!r} outside {layout}")
    x = params.site_pitch * s.col
    if s.zone is Zone.COMPUTE:
        return (x, params.site_pitch * s.row)
    return (x, -params.zone_gap - params.site_pitch * s.row)


def euclidean_distance(
    a: Site, b: Site, layout: ZoneLayout, params: HardwareParams = DEFAULT_PARAMS
) -> float:
    xa, ya = physical_position(a, layout, params)
    xb, yb = physical_position(b, layout, params)
    return math.hypot(xa - xb, ya - yb)


def move_duration(distance: float, params: HardwareParams = DEFAULT_PARAMS) -> float:
    """Time in seconds to shuttle an atom ``distance`` micrometres.

    ``t = sqrt(d / a)`` passes through both calibration points quoted for the
    hardware (27.5 um in 100 us, 110 um in 200 us) at ``a = 2750 m/s^2``.
    """
    if distance < 0:
        raise ValueError("distance must be non-negative")
    return math.sqrt(distance * 1e-6 / params.accel)


def initial_layout(c: Circuit, layout: ZoneLayout, mode: Mode) -> Placement:
    """Row-major placement of every qubit in storage (or compute, for non-storage runs)."""
    from .router import Placement

    zone = Zone.STORAGE if Mode(mode) is Mode.WITH_STORAGE else Zone.COMPUTE
    cols, _ = layout.dims(zone)
    if c.num_qubits > layout.capacity(zone):
        raise InsufficientCapacity(
            f"{c.num_qubits} qubits do not fit the {zone.value} zone ({layout.capacity(zone)} sites)"
        )
    return Placement(layout, {q: Site(zone, q % cols, q // cols) for q in range(c.num_qubits)})


_PARAM_KEYS = {
    "f1": ("f1", 1.0),
    "f2": ("f2", 1.0),
    "f_exc": ("f_exc", 1.0),
    "f_trans": ("f_trans", 1.0),
    "t_1q_us": ("t_1q", 1e-6),
    "t_rydberg_ns": ("t_rydberg", 1e-9),
    "t_trans_us": ("t_trans", 1e-6),
    "accel_m_s2": ("accel", 1.0),
    "t2_s": ("t2", 1.0),
    "site_pitch_um": ("site_pitch", 1.0),
    "zone_gap_um": ("zone_gap", 1.0),
    "transfer_legs": ("transfer_legs", None),
}


def params_from_dict(doc: dict) -> HardwareParams:
    kwargs = {}
    for key, (attr, scale) in _PARAM_KEYS.items():
        if key in doc:
            kwargs[attr] = int(doc[key]) if scale is None else float(doc[key]) * scale
    return replace(DEFAULT_PARAMS, **kwargs)


def params_to_dict(p: HardwareParams) -> dict:
    doc = {}
    for key, (attr, scale) in _PARAM_KEYS.items():
        v = getattr(p, attr)
        doc[key] = v if scale is None else v / scale
    return doc


def load_hardware_config(text: str, num_qubits: int) -> tuple[HardwareParams, ZoneLayout]:
    """Parse a hardware config document; missing fields fall back to defaults."""
    try:
        doc = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"hardware config is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise MalformedInput("hardware config must be a JSON object")
    known = set(_PARAM_KEYS) | {"compute", "storage"}
    unknown = set(doc) - known
    if unknown:
        raise MalformedInput(f"unknown hardware keys: {sorted(unknown)}")
    try:
        params = params_from_dict(doc)
    except (TypeError, ValueError) as exc:
        raise MalformedInput(str(exc)) from exc
    geo = default_geometry(max(num_qubits, 1))
    compute = doc.get("compute", [geo.compute_cols, geo.compute_rows])
    storage = doc.get("storage", [geo.storage_cols, geo.storage_rows])
    try:
        layout = ZoneLayout(int(compute[0]), int(compute[1]), int(storage[0]), int(storage[1]))
    except (TypeError, ValueError, IndexError) as exc:
        raise MalformedInput(f"bad zone dimensions: {exc}") from exc
    return params, layout


def layout_to_dict(layout: ZoneLayout) -> dict:
    return {
        "compute": [layout.compute_cols, layout.compute_rows],
        "storage": [layout.storage_cols, layout.storage_rows],
    }


def layout_from_dict(doc: dict) -> ZoneLayout:
    (cc, cr), (sc, sr) = doc["compute"], doc["storage"]
    return ZoneLayout(cc, cr, sc, sr)

