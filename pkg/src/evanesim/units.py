"""Parsing of physical quantities written with unit suffixes ("32.8mm", "9.15GHz")."""

from __future__ import annotations

import math
import re

_NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_QUANTITY = re.compile(rf"^\s*({_NUMBER})\s*([A-Za-z/]*)\s*$")

UNITS = {
    "length": {"": 1.0, "m": 1.0, "km": 1e3, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "nm": 1e-9},
    "frequency": {"": 1.0, "Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12},
    "time": {"": 1.0, "s": 1.0, "ms": 1e-3, "us": 1e-6, "ns": 1e-9, "ps": 1e-12, "fs": 1e-15},
    # bare angles are degrees, the unit the geometry is usually quoted in
    "angle": {"": math.pi / 180, "deg": math.pi / 180, "rad": 1.0},
    "speed": {"": 1.0, "m/s": 1.0},
    "impedance": {"": 1.0, "rayl": 1.0},
    "dimensionless": {"": 1.0},
}


def parse_quantity(value, kind: str, wavelength: float | None = None) -> float:
    """Return ``value`` in base SI units (radians for angles).

    Lengths additionally accept the suffix ``lambda`` when a reference
    ``wavelength`` is supplied.
    """
    if isinstance(value, bool):
        raise ValueError(f"expected a {kind}, got a boolean")
    if isinstance(value, (int, float)):
        return float(value) * UNITS[kind][""]
    match = _QUANTITY.match(str(value))
    if match is None:
        raise ValueError(f"cannot parse {value!r} as a {kind}")
    number, suffix = float(match.group(1)), match.group(2)
    if kind == "length" and suffix in ("lambda", "lam"):
        if wavelength is None:
            raise ValueError("'lambda' suffix needs a reference wavelength")
        return number * wavelength
    table = UNITS[kind]
    if suffix not in table:
        raise ValueError(f"unknown {kind} unit {suffix!r} (known: {', '.join(u for u in table if u)})")
    return number * table[suffix]
