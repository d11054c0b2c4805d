"""
Classical steady states below the FWM threshold.

Covers the intracavity pump with Kerr and thermal bistability, the detunings
of each comb line, the pump-amplitude region in which a given line can reach
threshold, and the index of the first line to oscillate.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Tuple

from .model import HBAR, ResonatorParams, check_pump, threshold_power

_MERGE_RTOL = 1e-9
_DISC_RTOL = 1e-12


class Stability(str, enum.Enum):
    STABLE = "stable"
    STABLE_LOWER = "stable-lower"
    UNSTABLE_MIDDLE = "unstable-middle"
    STABLE_UPPER = "stable-upper"


class PumpRoot(NamedTuple):
    photons: float  # |alpha_p|^2
    stability: Stability


@dataclass(frozen=True)
class PumpState:
    """All intracavity pump solutions at one bare detuning, sorted ascending."""

    roots: Tuple[PumpRoot, ...]
    delta_p0: float
    x: float

    def __post_init__(self) -> None:
        if not 1 <= len(self.roots) <= 3:
            raise ValueError(f"expected 1 to 3 roots, got {len(self.roots)}")

    @property
    def bistable(self) -> bool:
        return len(self.roots) == 3


class CombOnset(NamedTuple):
    mu_real: float
    candidates: Tuple[int, int]


def solve_cubic(a: float, b: float, c: float, d: float) -> List[float]:
    """Real roots of ``a u^3 + b u^2 + c u + d`` in ascending order.

    Analytic solution of the depressed cubic (trigonometric form for three real
    roots, Cardano otherwise), followed by damped Newton polishing on the
    original polynomial. Roots closer than 1e-9 relative are merged.
    """
    if a == 0:
        raise ValueError("leading coefficient must be nonzero")
    B, C, D = b / a, c / a, d / a
    shift = B / 3.0
    p = C - B * B / 3.0
    q = 2.0 * B**3 / 27.0 - B * C / 3.0 + D
    # discriminant of t^3 + p t + q, sign convention: > 0 means three real roots
    disc = -(4.0 * p**3 + 27.0 * q * q)
    scale = max(abs(4.0 * p**3), 27.0 * q * q)

    if p == 0:
        ts = [_cbrt(-q)]
    elif disc > _DISC_RTOL * scale:
        r = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * r)
        theta = math.acos(max(-1.0, min(1.0, arg)))
        ts = [r * math.cos((theta - 2.0 * math.pi * k) / 3.0) for k in range(3)]
    elif disc < -_DISC_RTOL * scale:
        s = math.sqrt(q * q / 4.0 + p**3 / 27.0)
        ts = [_cbrt(-q / 2.0 + s) + _cbrt(-q / 2.0 - s)]
    else:
        # double root (and a simple one)
        t_simple = 3.0 * q / p
        t_double = -3.0 * q / (2.0 * p)
        ts = [t_simple, t_double]

    roots = sorted(_polish(t - shift, a, b, c, d) for t in ts)
    merged: List[float] = []
    for u in roots:
        if merged and abs(u - merged[-1]) <= _MERGE_RTOL * max(abs(u), abs(merged[-1]), 1e-300):
            continue
        merged.append(u)
    return merged


def _cbrt(v: float) -> float:
    return math.copysign(abs(v) ** (1.0 / 3.0), v)


def _polish(u: float, a: float, b: float, c: float, d: float, steps: int = 8) -> float:
    def f(v: float) -> float:
        return ((a * v + b) * v + c) * v + d

    fu = f(u)
    for _ in range(steps):
        if fu == 0:
            break
        fp = (3.0 * a * u + 2.0 * b) * u + c
        if fp == 0:
            break
        step = fu / fp
        lam = 1.0
        while lam > 1e-4:
            trial = u - lam * step
            ft = f(trial)
            if abs(ft) < abs(fu):
                u, fu = trial, ft
                break
            lam *= 0.5
        else:
            break
    return u


def pump_steady_state(params: ResonatorParams, p_in: float, delta_p0: float) -> PumpState:
    """Intracavity pump photon numbers u solving
    ``u [(delta_p0 + g_tot u)^2 + Gamma^2/4] = kappa P_in / (hbar w_p)``.

    Signal and idler contributions to the pump detuning are neglected.
    """
    if p_in < 0:
        raise ValueError(f"p_in must be >= 0, got {p_in}")
    x = p_in / threshold_power(params)
    if p_in == 0:
        return PumpState((PumpRoot(0.0, Stability.STABLE),), delta_p0, x)

    G = params.total_loss
    g = params.g_tot
    drive = params.kappa * p_in / (HBAR * params.omega_p)
    if g == 0:
        u = drive / (delta_p0**2 + G * G / 4.0)
        return PumpState((PumpRoot(u, Stability.STABLE),), delta_p0, x)

    roots = [
        u
        for u in solve_cubic(g * g, 2.0 * delta_p0 * g, delta_p0**2 + G * G / 4.0, -drive)
        if u >= 0
    ]
    if len(roots) == 1:
        labels = [Stability.STABLE]
    elif len(roots) == 2:
        labels = [Stability.STABLE_LOWER, Stability.STABLE_UPPER]
    else:
        labels = [Stability.STABLE_LOWER, Stability.UNSTABLE_MIDDLE, Stability.STABLE_UPPER]
    return PumpState(tuple(PumpRoot(u, s) for u, s in zip(roots, labels)), delta_p0, x)


def injection_locked_pump(params: ResonatorParams, x: float, validate: bool = True) -> float:
    """Pump photon number Gamma x / (2 g_opt) at injection locking."""
    if validate:
        check_pump(x)
    return params.total_loss * x / (2.0 * params.g_opt)


def pump_detuning(params: ResonatorParams, x: float, validate: bool = True) -> float:
    """Bare pump detuning at injection locking, -g_tot Gamma x / (2 g_opt)."""
    if validate:
        check_pump(x)
    return -params.g_tot * params.total_loss * x / (2.0 * params.g_opt)


def mode_detuning(params: ResonatorParams, x: float, mu: int, validate: bool = True) -> float:
    """Detuning of comb line ``mu`` including Kerr and thermal shifts.

    Quadratic in ``mu``, matching the dispersion Taylor series.
    """
    if validate:
        check_pump(x)
    G = params.total_loss
    return 0.5 * params.d2 * mu * mu - G * (params.g_th + 2.0 * params.g_opt) * x / (2.0 * params.g_opt)


def effective_detuning(params: ResonatorParams, x: float, mu: int, validate: bool = True) -> float:
    """Pump-referenced detuning of line ``mu``, D2 mu^2 / 2 - Gamma x / 2.

    Independent of the thermal nonlinearity.
    """
    if validate:
        check_pump(x)
    return 0.5 * params.d2 * mu * mu - 0.5 * params.total_loss * x


def first_comb_mode(params: ResonatorParams, x: float, validate: bool = True) -> Optional[CombOnset]:
    """Mode number where the effective detuning vanishes, sqrt(Gamma x / D2).

    Returns None for normal (or zero) dispersion, where no line ever reaches
    zero effective detuning.
    """
    if validate:
        check_pump(x)
    if params.d2 <= 0:
        return None
    mu = math.sqrt(params.total_loss * x / params.d2)
    return CombOnset(mu, (math.floor(mu), math.ceil(mu)))


def threshold_amplitude_region(
    params: ResonatorParams, delta_p0: float, mu: int
) -> Optional[Tuple[float, float]]:
    """Range of intracavity pump photon numbers over which line ``mu`` is above threshold.

    Solves ``g_opt^2 u^2 = Delta_mu(u)^2 + Gamma^2/4`` with
    ``Delta_mu(u) = delta_p0 - D2 mu^2/2 + (2 g_opt + g_th) u``. Returns
    ``(u_lo, u_hi)`` or None when no non-negative real solution exists.
    """
    g = params.g_opt
    gt = params.g_th
    G = params.total_loss
    lin = params.d2 * mu * mu - 2.0 * delta_p0
    denom = 6.0 * g * g + 8.0 * g * gt + 2.0 * gt * gt
    t1 = g * g * lin * lin
    t2 = G * G * (3.0 * g * g + 4.0 * g * gt + gt * gt)
    disc = t1 - t2
    if abs(disc) <= _DISC_RTOL * max(t1, t2):
        root = 0.0
    elif disc < 0:
        return None
    else:
        root = math.sqrt(disc)
    centre = lin * (2.0 * g + gt)
    u_lo = (centre - root) / denom
    u_hi = (centre + root) / denom
    if u_lo < 0 or u_hi < 0:
        return None
    return u_lo, u_hi


def fwm_threshold_check(params: ResonatorParams, u: float, delta_s: float, delta_i: float) -> complex:
    """Determinant of the classical signal/idler evolution matrix.

    Its real part changes sign where the pump photon number ``u`` crosses the
    FWM threshold; the imaginary part is returned for diagnostics.
    """
    G = params.total_loss
    g = params.g_opt
    # pump phase fixed real: alpha_p^2 = u
    l00 = 1j * delta_s - G / 2.0
    l01 = -1j * g * u
    l10 = 1j * g * u
    l11 = -1j * delta_i - G / 2.0
    return l00 * l11 - l01 * l10


def threshold_photon_number(params: ResonatorParams, delta_s: float, delta_i: float) -> Optional[float]:
    """Pump photon number at the FWM threshold, sqrt(Delta_i Delta_s + Gamma^2/4) / g_opt."""
    arg = delta_i * delta_s + params.total_loss**2 / 4.0
    if arg < 0:
        return None
    return math.sqrt(arg) / params.g_opt
