"""Command-line entry point: ``qfc threshold|comb|squeeze|g2|jsi --config FILE``."""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys
from typing import Any, Dict, List, Optional

from .config import RunConfig, load_config
from .io import FORMATS, render_csv, render_json, write_dataset
from .model import ConfigurationError, SingularityError, ValidityError, normalize_pump, threshold_power
from .spectra import Grid, SpectrumDataset, comb_spectrum, g2_curves, jsi_map, squeezing_map, threshold_map

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_VALIDITY = 3
EXIT_SINGULAR = 4

G2_NOTE_THRESHOLD = 1e6

log = logging.getLogger("qfc")


def _sweep(cfg: RunConfig, name: str) -> Dict[str, Any]:
    if name not in cfg.sweeps:
        raise ConfigurationError(f"subcommand {name!r} needs a [{name}] section")
    return cfg.sweeps[name]


def _get(section: Dict[str, Any], key: str, name: str) -> Any:
    if key not in section:
        raise ConfigurationError(f"missing required key {key!r} in [{name}]")
    return section[key]


def _grid(section: Dict[str, Any], prefix: str, name: str) -> Grid:
    try:
        return Grid(
            _get(section, f"{prefix}_min", name),
            _get(section, f"{prefix}_max", name),
            _get(section, f"{prefix}_count", name),
        )
    except ValueError as exc:
        if isinstance(exc, ConfigurationError):
            raise
        raise ConfigurationError(f"[{name}] {prefix}: {exc}") from None


def _pump_x(cfg: RunConfig) -> float:
    if cfg.pump is None:
        raise ConfigurationError("missing [pump] section (p_in or p_n)")
    return normalize_pump(cfg.pump, cfg.resonator)


def build(command: str, cfg: RunConfig, threads: int = 1) -> SpectrumDataset:
    """Run one subcommand's dataset builder from a loaded config."""
    params = cfg.resonator
    if command == "threshold":
        sec = _sweep(cfg, "threshold")
        grid = _grid(sec, "delta_p0", "threshold")
        mu_max = _get(sec, "mu_max", "threshold")
        x = _pump_x(cfg)
        p_in = cfg.pump.p_in if cfg.pump.p_in is not None else x * threshold_power(params)
        if cfg.transmission_rate is None:
            raise ConfigurationError(
                "threshold needs [conversion] transmission_rate or a [geometry] block for the default"
            )
        ds = threshold_map(params, p_in, grid, mu_max, cfg.transmission_rate, threads, cfg.t_provenance)
    elif command == "comb":
        sec = _sweep(cfg, "comb")
        mu_max = _get(sec, "mu_max", "comb")
        if mu_max < 0:
            raise ConfigurationError("[comb] mu_max must be >= 0")
        ds = comb_spectrum(params, _pump_x(cfg), range(-mu_max, mu_max + 1), threads)
    elif command == "squeeze":
        sec = _sweep(cfg, "squeeze")
        ds = squeezing_map(params, _pump_x(cfg), _grid(sec, "delta", "squeeze"), _grid(sec, "phi", "squeeze"), threads)
    elif command == "g2":
        sec = _sweep(cfg, "g2")
        ds = g2_curves(params, _grid(sec, "p_n", "g2"), _get(sec, "deltas", "g2"), threads)
    elif command == "jsi":
        sec = _sweep(cfg, "jsi")
        ds = jsi_map(
            params, _pump_x(cfg), _grid(sec, "delta_s", "jsi"), _grid(sec, "delta_i", "jsi"), threads
        )
    else:
        raise ValueError(f"unknown command {command!r}")
    meta = dict(ds.meta)
    meta.setdefault("t_provenance", cfg.t_provenance)
    return dataclasses.replace(ds, meta=meta)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfc", description="Steady-state quantum frequency comb observables."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("threshold", "classical threshold regions and pump branches vs. bare detuning"),
        ("comb", "per-line photon density, squeezing and g2 across the comb"),
        ("squeeze", "quadrature variance map over detuning and LO phase"),
        ("g2", "signal/idler g2 vs. normalized pump"),
        ("jsi", "joint spectral intensity map"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="run configuration file")
        p.add_argument("--out", help="output file (default: [output] path, else stdout)")
        p.add_argument("--format", choices=FORMATS, help="output format (default: [output] format)")
        p.add_argument("--threads", type=int, default=1, help="worker threads for row evaluation")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="qfc: %(message)s")
    args = make_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        ds = build(args.command, cfg, max(1, args.threads))
    except ConfigurationError as exc:
        print(f"qfc: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidityError as exc:
        print(f"qfc: validity error: {exc}", file=sys.stderr)
        return EXIT_VALIDITY
    except SingularityError as exc:
        print(f"qfc: singular cavity response at {exc}", file=sys.stderr)
        return EXIT_SINGULAR

    if args.command in ("g2", "comb") and any(name == "g2_si" for name, _ in ds.schema):
        peak = max(ds.column("g2_si"), default=0.0)
        if peak > G2_NOTE_THRESHOLD:
            print(f"qfc: note: g2_si reaches {peak:.3g}; it diverges as the pump goes to zero", file=sys.stderr)

    fmt = args.format or cfg.output_format
    out = args.out or cfg.output_path
    try:
        if out is None:
            sys.stdout.write(render_json(ds) if fmt == "json" else render_csv(ds))
        else:
            write_dataset(ds, out, fmt)
    except OSError as exc:
        print(f"qfc: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
