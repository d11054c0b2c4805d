"""
Dataset builders sweeping mode number, LO phase, detuning and pump power.

Each builder returns a :class:`SpectrumDataset`: an ordered column schema,
finite numeric rows and a ``meta`` dict that records everything needed to
regenerate the rows. Rows are computed independently and can be spread over
a thread pool; results are always collected in input order.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, NamedTuple, Sequence, Tuple

import numpy as np

from . import __version__
from .classical import (
    effective_detuning,
    first_comb_mode,
    pump_steady_state,
    threshold_amplitude_region,
)
from .model import ResonatorParams, check_pump, threshold_power
from .observables import g2_joint, g2_single, jsi, optimal_angle, photon_number, squeeze, variance
from .units import intracavity_to_power, to_db

# series codes used by threshold_map
SERIES_PUMP = -1
SERIES_P_TH = -2


class Column(NamedTuple):
    name: str
    unit: str


@dataclass(frozen=True)
class Grid:
    """Inclusive linear grid ``count`` points from ``start`` to ``stop``."""

    start: float
    stop: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"grid count must be >= 1, got {self.count}")
        if self.count == 1 and self.start != self.stop:
            raise ValueError("a one-point grid needs start == stop")

    def values(self) -> List[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]

    def as_dict(self) -> Dict[str, Any]:
        return {"start": self.start, "stop": self.stop, "count": self.count}


@dataclass(frozen=True)
class SpectrumDataset:
    schema: Tuple[Column, ...]
    rows: Tuple[Tuple[float, ...], ...]
    meta: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        width = len(self.schema)
        for i, row in enumerate(self.rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} entries, schema has {width}")
            if not all(math.isfinite(v) for v in row):
                raise ValueError(f"row {i} contains non-finite values: {row}")

    def column(self, name: str) -> List[float]:
        idx = [c.name for c in self.schema].index(name)
        return [row[idx] for row in self.rows]


def params_meta(params: ResonatorParams) -> Dict[str, Any]:
    return dataclasses.asdict(params)


def _map(fn: Callable[[Any], Any], items: Sequence[Any], threads: int) -> List[Any]:
    if threads <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _meta(params: ResonatorParams, kind: str, sweep: Dict[str, Any], **extra: Any) -> Dict[str, Any]:
    meta = {
        "artifact": "qfc",
        "version": __version__,
        "dataset": kind,
        "params": params_meta(params),
        "sweep": sweep,
    }
    meta.update(extra)
    return meta


def comb_spectrum(
    params: ResonatorParams, x: float, mu_range: Iterable[int], threads: int = 1
) -> SpectrumDataset:
    """Per-line photon density, squeezing, optimal phase and g2 across the comb.

    The g2 column is dropped at zero pump, where it is undefined.
    """
    check_pump(x)
    mus = sorted(int(m) for m in mu_range)
    if sorted(-m for m in mus) != mus:
        raise ValueError("mu_range must be symmetric around 0")
    with_g2 = x > 0

    def row(mu: int) -> Tuple[float, ...]:
        d = effective_detuning(params, x, mu)
        sq = squeeze(params, x, d)
        values = [float(mu), d, photon_number(params, x, d), sq.v_s_db, sq.v_as_db, sq.phi_opt]
        if with_g2:
            values.append(g2_joint(params, x, d))
        return tuple(values)

    schema = [
        Column("mu", "1"),
        Column("delta_eff", "rad/s"),
        Column("n", "1"),
        Column("v_s", "dB"),
        Column("v_as", "dB"),
        Column("phi_opt", "rad"),
    ]
    if with_g2:
        schema.append(Column("g2_si", "1"))
    onset = first_comb_mode(params, x)
    return SpectrumDataset(
        tuple(schema),
        tuple(_map(row, mus, threads)),
        _meta(
            params,
            "comb",
            {"x": x, "mu": mus},
            mu_root=None if onset is None else onset.mu_real,
        ),
    )


def squeezing_map(
    params: ResonatorParams, x: float, delta_grid: Grid, phi_grid: Grid, threads: int = 1
) -> SpectrumDataset:
    """Quadrature variance in dB on a (detuning, LO phase) grid with the optimal-phase ridge."""
    check_pump(x)
    points = [(d, phi) for d in delta_grid.values() for phi in phi_grid.values()]
    ridge = {d: optimal_angle(params, x, d) for d in delta_grid.values()}

    def row(point: Tuple[float, float]) -> Tuple[float, ...]:
        d, phi = point
        return (d, phi, to_db(variance(params, x, d, phi)), ridge[d])

    schema = (
        Column("delta_eff", "rad/s"),
        Column("phi_lo", "rad"),
        Column("v", "dB"),
        Column("phi_opt", "rad"),
    )
    sweep = {"x": x, "delta_eff": delta_grid.as_dict(), "phi_lo": phi_grid.as_dict()}
    return SpectrumDataset(schema, tuple(_map(row, points, threads)), _meta(params, "squeeze", sweep))


def jsi_map(
    params: ResonatorParams, x: float, delta_s_grid: Grid, delta_i_grid: Grid, threads: int = 1
) -> SpectrumDataset:
    """Raw and max-normalized joint spectral intensity over signal/idler detunings."""
    check_pump(x)
    points = [(ds, di) for ds in delta_s_grid.values() for di in delta_i_grid.values()]
    raw = _map(lambda p: jsi(params, x, p[0], p[1]), points, threads)
    norm = max(raw)
    rows = tuple((ds, di, v, v / norm if norm > 0 else 0.0) for (ds, di), v in zip(points, raw))
    schema = (
        Column("delta_s", "rad/s"),
        Column("delta_i", "rad/s"),
        Column("jsi", "1"),
        Column("jsi_norm", "1"),
    )
    sweep = {"x": x, "delta_s": delta_s_grid.as_dict(), "delta_i": delta_i_grid.as_dict()}
    return SpectrumDataset(schema, rows, _meta(params, "jsi", sweep, normalization=norm))


def g2_curves(
    params: ResonatorParams, x_grid: Grid, deltas: Sequence[float], threads: int = 1
) -> SpectrumDataset:
    """Signal/idler g2 versus normalized pump for a set of effective detunings.

    Zero-pump points are omitted (g2 is undefined there).
    """
    xs = x_grid.values()
    for x in xs:
        check_pump(x)
    points = [(d, x) for d in deltas for x in xs if x > 0]

    def row(point: Tuple[float, float]) -> Tuple[float, ...]:
        d, x = point
        return (x, d, g2_joint(params, x, d), g2_single())

    schema = (
        Column("p_n", "1"),
        Column("delta_eff", "rad/s"),
        Column("g2_si", "1"),
        Column("g2_s", "1"),
    )
    sweep = {"p_n": x_grid.as_dict(), "delta_eff": list(deltas)}
    return SpectrumDataset(schema, tuple(_map(row, points, threads)), _meta(params, "g2", sweep))


def threshold_map(
    params: ResonatorParams,
    p_in: float,
    delta_p0_grid: Grid,
    mu_max: int,
    transmission_rate: float,
    threads: int = 1,
    t_provenance: str = "explicit",
) -> SpectrumDataset:
    """Classical threshold regions, pump branches and the P_th line over bare pump detuning.

    Long format, one row per curve point. ``series`` is the mode number for
    threshold regions (``branch`` 0 = lower, 1 = upper bound), ``-1`` for the
    intracavity pump solutions (``branch`` = root index, ascending) and ``-2``
    for the P_th reference line. Detunings without a threshold region for a
    given mode produce no rows for it.
    """
    if mu_max < 0:
        raise ValueError("mu_max must be >= 0")
    p_th = threshold_power(params)
    check_pump(p_in / p_th)
    omega = params.omega_p
    u_th = params.total_loss / (2.0 * params.g_opt)

    def rows_at(delta: float) -> List[Tuple[float, ...]]:
        out: List[Tuple[float, ...]] = []
        for mu in range(mu_max + 1):
            region = threshold_amplitude_region(params, delta, mu)
            if region is None:
                continue
            for branch, u in enumerate(region):
                out.append((delta, float(mu), float(branch), u, intracavity_to_power(u, transmission_rate, omega)))
        state = pump_steady_state(params, p_in, delta)
        for branch, root in enumerate(state.roots):
            out.append(
                (delta, float(SERIES_PUMP), float(branch), root.photons,
                 intracavity_to_power(root.photons, transmission_rate, omega))
            )
        out.append((delta, float(SERIES_P_TH), 0.0, u_th, p_th))
        return out

    schema = (
        Column("delta_p0", "rad/s"),
        Column("series", "1"),
        Column("branch", "1"),
        Column("photons", "1"),
        Column("power", "W"),
    )
    chunks = _map(rows_at, delta_p0_grid.values(), threads)
    rows = tuple(r for chunk in chunks for r in chunk)
    sweep = {"p_in": p_in, "delta_p0": delta_p0_grid.as_dict(), "mu_max": mu_max}
    return SpectrumDataset(
        schema,
        rows,
        _meta(
            params,
            "threshold",
            sweep,
            p_th=p_th,
            transmission_rate=transmission_rate,
            t_provenance=t_provenance,
            series_codes={"pump": SERIES_PUMP, "p_th": SERIES_P_TH, "threshold_region": "mu >= 0"},
        ),
    )
