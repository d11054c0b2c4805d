"""Unit conversions: intracavity photons to flux and power, dB, and suffixed quantities."""

from __future__ import annotations

import math
import re
from typing import Dict, Optional

from .model import C_LIGHT, HBAR, ConfigurationError, Geometry


def intracavity_to_flux(alpha_sq: float, t: float) -> float:
    """Photon flux [1/s] carried by ``alpha_sq`` intracavity photons at transmission rate ``t``."""
    return t * alpha_sq


def flux_to_power(flux: float, omega: float) -> float:
    """Optical power [W] of a photon flux at angular frequency ``omega``."""
    return HBAR * omega * flux


def power_to_flux(power: float, omega: float) -> float:
    return power / (HBAR * omega)


def intracavity_to_power(alpha_sq: float, t: float, omega: float) -> float:
    return flux_to_power(intracavity_to_flux(alpha_sq, t), omega)


def default_transmission_rate(geometry: Optional[Geometry]) -> float:
    """Inverse round-trip time v_g / L_eff."""
    if geometry is None:
        raise ConfigurationError(
            "transmission_rate must be given explicitly when no geometry block is present"
        )
    return geometry.v_g / geometry.l_eff


def to_db(v: float) -> float:
    return 10.0 * math.log10(v)


def from_db(db: float) -> float:
    return 10.0 ** (db / 10.0)


def wavelength_to_omega(wavelength: float) -> float:
    return 2.0 * math.pi * C_LIGHT / wavelength


# Per-kind suffix tables. An empty suffix means the SI unit.
# Frequency-style suffixes are scale factors on s^-1 only (no 2 pi).
UNITS: Dict[str, Dict[str, float]] = {
    "rate": {
        "": 1.0, "1/s": 1.0, "s^-1": 1.0, "rad/s": 1.0,
        "Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9, "THz": 1e12,
    },
    "power": {"": 1.0, "W": 1.0, "mW": 1e-3, "uW": 1e-6, "µW": 1e-6, "nW": 1e-9},
    "length": {"": 1.0, "m": 1.0, "mm": 1e-3, "um": 1e-6, "µm": 1e-6, "nm": 1e-9},
    "area": {"": 1.0, "m^2": 1.0, "mm^2": 1e-6, "um^2": 1e-12, "µm^2": 1e-12, "nm^2": 1e-18},
    "velocity": {"": 1.0, "m/s": 1.0},
    "n2": {"": 1.0, "m^2/W": 1.0, "cm^2/W": 1e-4},
    "inv_kelvin": {"": 1.0, "1/K": 1.0, "K^-1": 1.0},
    "conductivity": {"": 1.0, "W/(m K)": 1.0, "W/m/K": 1.0, "W/(m*K)": 1.0},
    "angle": {"": 1.0, "rad": 1.0, "deg": math.pi / 180.0},
    "dimensionless": {"": 1.0, "%": 1e-2},
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*(.*?)\s*$")


def parse_quantity(text: str, kind: str, key: str = "?") -> float:
    """Parse ``"800 MHz"``-style text into an SI float for the given unit kind."""
    table = UNITS[kind]
    match = _QUANTITY.match(text)
    if match is None:
        raise ConfigurationError(f"{key}: cannot parse {text!r} as a number with a {kind} unit")
    number, suffix = match.groups()
    if suffix not in table:
        allowed = ", ".join(repr(s) for s in table if s) or "none"
        raise ConfigurationError(
            f"{key}: unknown unit {suffix!r} for a {kind} quantity (expected one of {allowed})"
        )
    value = float(number) * table[suffix]
    if not math.isfinite(value):
        raise ConfigurationError(f"{key}: value {text!r} is not finite")
    return value
