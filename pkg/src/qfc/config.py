"""
Run configuration files.

INI-style sections with ``key = value unit`` lines, for example::

    [resonator]
    kappa = 800 MHz
    gamma = 200 MHz
    g_opt = 1.5 MHz
    wavelength = 1550 nm

    [pump]
    p_n = 0.9

Loading is strict: unknown sections or keys are rejected, and every quantity
is converted to SI before it reaches the model.
"""

from __future__ import annotations

import configparser
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from .model import (
    ConfigurationError,
    Geometry,
    PumpDrive,
    ResonatorParams,
    Thermal,
    derive_g_opt,
    derive_g_th,
)
from .units import default_transmission_rate, parse_quantity, wavelength_to_omega

log = logging.getLogger(__name__)

SCHEMA: Dict[str, Dict[str, str]] = {
    "resonator": {
        "kappa": "rate",
        "gamma": "rate",
        "g_opt": "rate",
        "g_th": "rate",
        "d1": "rate",
        "d2": "rate",
        "eta": "dimensionless",
        "omega_p": "rate",
        "wavelength": "length",
    },
    "geometry": {
        "n_eff": "dimensionless",
        "l_eff": "length",
        "a_eff": "area",
        "v_g": "velocity",
        "n2": "n2",
        "m": "int",
    },
    "thermal": {"gamma_abs": "rate", "a_th": "inv_kelvin", "k_th": "conductivity"},
    "pump": {"p_in": "power", "p_n": "dimensionless"},
    "conversion": {"transmission_rate": "rate"},
    "threshold": {
        "delta_p0_min": "rate",
        "delta_p0_max": "rate",
        "delta_p0_count": "int",
        "mu_max": "int",
    },
    "comb": {"mu_max": "int"},
    "squeeze": {
        "delta_min": "rate",
        "delta_max": "rate",
        "delta_count": "int",
        "phi_min": "angle",
        "phi_max": "angle",
        "phi_count": "int",
    },
    "g2": {"p_n_min": "dimensionless", "p_n_max": "dimensionless", "p_n_count": "int", "deltas": "rate_list"},
    "jsi": {
        "delta_s_min": "rate",
        "delta_s_max": "rate",
        "delta_s_count": "int",
        "delta_i_min": "rate",
        "delta_i_max": "rate",
        "delta_i_count": "int",
    },
    "output": {"path": "str", "format": "str"},
}

SWEEP_SECTIONS = ("threshold", "comb", "squeeze", "g2", "jsi")


@dataclass(frozen=True)
class RunConfig:
    resonator: ResonatorParams
    pump: Optional[PumpDrive]
    sweeps: Dict[str, Dict[str, Any]]
    output_path: Optional[str] = None
    output_format: str = "csv"
    transmission_rate: Optional[float] = None
    t_provenance: str = "none"
    warnings: Tuple[str, ...] = field(default_factory=tuple)


def _convert(section: str, key: str, raw: str) -> Any:
    kind = SCHEMA[section][key]
    where = f"[{section}] {key}"
    if kind == "str":
        return raw.strip()
    if kind == "int":
        try:
            return int(raw.strip())
        except ValueError:
            raise ConfigurationError(f"{where}: expected an integer, got {raw!r}") from None
    if kind == "rate_list":
        items = [s for s in raw.split(",") if s.strip()]
        if not items:
            raise ConfigurationError(f"{where}: expected a comma-separated list of rates")
        return [parse_quantity(s, "rate", where) for s in items]
    return parse_quantity(raw, kind, where)


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    parser = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#",), strict=True, default_section="__none__"
    )
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from exc

    values: Dict[str, Dict[str, Any]] = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigurationError(f"unknown section [{section}] (expected one of {', '.join(SCHEMA)})")
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigurationError(
                    f"unknown key {key!r} in [{section}] (expected one of {', '.join(SCHEMA[section])})"
                )
            values[section][key] = _convert(section, key, raw)
    return _build(values)


def load_config(path: Union[str, Path]) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, str(path))


def _require(section: Dict[str, Any], key: str, name: str) -> Any:
    if key not in section:
        raise ConfigurationError(f"missing required key {key!r} in [{name}]")
    return section[key]


def _build(values: Dict[str, Dict[str, Any]]) -> RunConfig:
    notes: List[str] = []
    res = values.get("resonator")
    if res is None:
        raise ConfigurationError("missing [resonator] section")

    if ("omega_p" in res) == ("wavelength" in res):
        raise ConfigurationError("[resonator] needs exactly one of omega_p and wavelength")
    omega_p = res["omega_p"] if "omega_p" in res else wavelength_to_omega(res["wavelength"])

    geometry = None
    if "geometry" in values:
        g = values["geometry"]
        geometry = Geometry(
            n_eff=_require(g, "n_eff", "geometry"),
            l_eff=_require(g, "l_eff", "geometry"),
            a_eff=_require(g, "a_eff", "geometry"),
            v_g=_require(g, "v_g", "geometry"),
            n2=_require(g, "n2", "geometry"),
            m=g.get("m"),
        )
    thermal = None
    if "thermal" in values:
        t = values["thermal"]
        thermal = Thermal(
            gamma_abs=_require(t, "gamma_abs", "thermal"),
            a_th=_require(t, "a_th", "thermal"),
            k_th=_require(t, "k_th", "thermal"),
        )

    if "g_opt" in res:
        g_opt = res["g_opt"]
        if geometry is not None:
            notes.append("g_opt given directly and derivable from [geometry]; the direct value is used")
    else:
        g_opt = derive_g_opt(geometry, omega_p)
    if "g_th" in res:
        g_th = res["g_th"]
        if thermal is not None and geometry is not None:
            notes.append("g_th given directly and derivable from [thermal]; the direct value is used")
    elif thermal is not None:
        g_th = derive_g_th(thermal, geometry, omega_p)
    else:
        g_th = 0.0

    params = ResonatorParams(
        kappa=_require(res, "kappa", "resonator"),
        gamma=_require(res, "gamma", "resonator"),
        g_opt=g_opt,
        g_th=g_th,
        omega_p=omega_p,
        d1=res.get("d1", 0.0),
        d2=res.get("d2", 0.0),
        eta=res.get("eta", 1.0),
        geometry=geometry,
        thermal=thermal,
    )

    pump = None
    if "pump" in values:
        pump = PumpDrive(p_in=values["pump"].get("p_in"), p_n=values["pump"].get("p_n"))

    if "transmission_rate" in values.get("conversion", {}):
        t_rate: Optional[float] = values["conversion"]["transmission_rate"]
        provenance = "explicit"
    elif geometry is not None:
        t_rate = default_transmission_rate(geometry)
        provenance = "default"
    else:
        t_rate, provenance = None, "none"

    out = values.get("output", {})
    fmt = out.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigurationError(f"[output] format: expected 'csv' or 'json', got {fmt!r}")

    for note in notes:
        log.warning(note)
    return RunConfig(
        resonator=params,
        pump=pump,
        sweeps={name: values[name] for name in SWEEP_SECTIONS if name in values},
        output_path=out.get("path"),
        output_format=fmt,
        transmission_rate=t_rate,
        t_provenance=provenance,
        warnings=tuple(notes),
    )
