"""
Closed-form quantum observables of one signal/idler pair at line centre.

Every function works with the normalized pump ``x = P_in/P_th`` and with
detunings in s^-1 as they enter the drift matrix. Internally detunings are
scaled by the total loss rate Gamma. Photon numbers and pair moments are
dimensionless spectral densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .matrix import QuantumMoments
from .model import ResonatorParams, check_pump
from .units import to_db


class UndefinedCorrelationError(ValueError):
    """g2 requested at zero pump, where it is 0/0."""


@dataclass(frozen=True)
class SqueezeResult:
    v_s: float
    v_as: float
    phi_opt: float
    v_s_db: float
    v_as_db: float


def _reduced(params: ResonatorParams, x: float, delta: float, validate: bool):
    if validate:
        check_pump(x)
    G = params.total_loss
    d = delta / G
    # 4 d^2 + 1 - x^2, with 1 - x^2 factored to keep precision near threshold
    den = 4.0 * d * d + (1.0 - x) * (1.0 + x)
    return G, d, den


def photon_number(params: ResonatorParams, x: float, delta_eff: float, validate: bool = True) -> float:
    """Out-coupled signal photon density,
    4 Gamma^3 kappa eta x^2 / (4 Delta^2 + Gamma^2 (1 - x^2))^2."""
    G, _, den = _reduced(params, x, delta_eff, validate)
    return 4.0 * (params.kappa / G) * params.eta * x * x / (den * den)


def pair_moment(params: ResonatorParams, x: float, delta_eff: float, validate: bool = True) -> complex:
    """Pair moment <b_s b_i>,
    2 kappa Gamma eta x (Gamma^2 x^2 - (2 Delta + i Gamma)^2) / (4 Delta^2 + Gamma^2 (1 - x^2))^2."""
    G, d, den = _reduced(params, x, delta_eff, validate)
    w = x * x - (2.0 * d + 1j) ** 2
    return 2.0 * (params.kappa / G) * params.eta * x * w / (den * den)


def pair_moments(
    params: ResonatorParams, x: float, delta_s: float, delta_i: float, validate: bool = True
) -> QuantumMoments:
    """Moments for independent signal and idler detunings.

    Obtained from the 2x2 (b_s, b_i^dag) block of the drift matrix; reduces to
    :func:`photon_number` and :func:`pair_moment` when ``delta_s == delta_i``.
    """
    if validate:
        check_pump(x)
    G = params.total_loss
    ds, di = delta_s / G, delta_i / G
    a_s = 0.5 - 1j * ds
    a_i = 0.5 - 1j * di
    det = a_s.conjugate() * a_i - 0.25 * x * x
    det_sq = abs(det) ** 2
    scale = params.eta * params.kappa / G
    n = scale * x * x / (4.0 * det_sq)
    m = scale * 0.5 * x * (a_s * a_i + 0.25 * x * x) / det_sq
    return QuantumMoments(n, n, m)


def variance(params: ResonatorParams, x: float, delta_eff: float, phi_lo: float, validate: bool = True) -> float:
    """Two-mode quadrature variance relative to vacuum at local-oscillator phase ``phi_lo``."""
    n = photon_number(params, x, delta_eff, validate)
    m = pair_moment(params, x, delta_eff, validate)
    rot = complex(math.cos(2.0 * phi_lo), math.sin(2.0 * phi_lo))
    return 2.0 * (m * rot).real + 2.0 * n + 1.0


def optimal_angle(params: ResonatorParams, x: float, delta_eff: float, validate: bool = True) -> float:
    """Local-oscillator phase minimizing :func:`variance`.

    Anti-squeezing occurs at the returned angle plus pi/2.
    """
    G, d, _ = _reduced(params, x, delta_eff, validate)
    num = 4.0 * d
    den = 4.0 * d * d - (1.0 + x * x)
    if den > 0:
        return -0.5 * math.atan(num / den)
    # den <= 0 branch; den == 0 is the limit taken from below
    ratio = math.atan(num / den) if den != 0 else -math.copysign(0.5 * math.pi, num)
    return -0.5 * ratio + 0.5 * math.pi


def squeeze(params: ResonatorParams, x: float, delta_eff: float, validate: bool = True) -> SqueezeResult:
    """Squeezed and anti-squeezed variances at the optimal phase.

    ``v_s = 1 + 2n - 2|m|`` and ``v_as = 1 + 2n + 2|m|``. The squeezed value
    uses the exact rearrangement ``n - |m| = -2 kappa Gamma eta x / (2 Gamma^2 x + |W|)``
    with ``|W|^2 = 4 Gamma^4 x^2 + (4 Delta^2 + Gamma^2 (1 - x^2))^2``, which
    avoids cancellation between two large numbers close to threshold.
    """
    G, d, den = _reduced(params, x, delta_eff, validate)
    n = photon_number(params, x, delta_eff, validate=False)
    m_abs = abs(pair_moment(params, x, delta_eff, validate=False))
    w_abs = math.hypot(2.0 * x, den)
    v_s = 1.0 - 4.0 * (params.kappa / G) * params.eta * x / (2.0 * x + w_abs)
    v_as = 1.0 + 2.0 * n + 2.0 * m_abs
    phi = optimal_angle(params, x, delta_eff, validate=False)
    return SqueezeResult(v_s, v_as, phi, _safe_db(v_s), _safe_db(v_as))


def squeeze_limits(params: ResonatorParams, x: float, validate: bool = True):
    """Line-centre squeezing and anti-squeezing, ``(v_s_opt, v_as_opt)``.

    ``1 -/+ (4 kappa eta / Gamma) x / (1 +/- x)^2``; the squeezed value tends
    to ``1 - eta kappa / Gamma`` and the anti-squeezed one diverges as x -> 1.
    """
    if validate:
        check_pump(x)
    c = 4.0 * params.kappa * params.eta / params.total_loss
    v_s = 1.0 - c * x / (1.0 + x) ** 2
    v_as = 1.0 + c * x / (1.0 - x) ** 2 if x != 1.0 else math.inf
    return v_s, v_as


def g2_single() -> float:
    """Zero-delay autocorrelation of either mode alone (thermal statistics)."""
    return 2.0


def g2_joint(params: ResonatorParams, x: float, delta_eff: float, validate: bool = True) -> float:
    """Zero-delay signal/idler cross-correlation,
    ((4 D^2 + G^2)^2 / (G^4 x^2) + x^2 - 8 D^2 / G^2 + 6) / 4."""
    G, d, _ = _reduced(params, x, delta_eff, validate)
    if x == 0:
        raise UndefinedCorrelationError("g2 is undefined at zero pump power")
    a = (4.0 * d * d + 1.0) / x
    return 0.25 * (a * a + x * x - 8.0 * d * d + 6.0)


def jsi(params: ResonatorParams, x: float, delta_s: float, delta_i: float, validate: bool = True) -> float:
    """Joint spectral intensity <b_s^dag b_i^dag b_s b_i> at detunings ``delta_s``, ``delta_i``.

    Both detunings use the drift-matrix sign convention, so
    ``jsi(p, x, d, d)`` equals ``n^2 + |m|^2`` of :func:`photon_number` and
    :func:`pair_moment`. Scaled by eta^2 for collection loss.
    """
    if validate:
        check_pump(x)
    G = params.total_loss
    ds, di = delta_s / G, delta_i / G
    x2 = x * x
    # every term is grouped symmetrically so that swapping ds, di is bit-exact
    cross = di * ds
    prod = (4.0 * di * di + 1.0) * (4.0 * ds * ds + 1.0)
    num = x2 * x2 + 2.0 * x2 * (3.0 - 4.0 * cross) + prod
    # x^4 - 2 x^2 (1 + 4 di ds) + prod, regrouped around (1 - x^2)^2
    one_minus = (1.0 - x) * (1.0 + x)
    den = one_minus * one_minus - 8.0 * x2 * cross + 4.0 * (di * di + ds * ds) + 16.0 * cross * cross
    k = params.kappa / G
    return params.eta**2 * 4.0 * k * k * x2 * num / (den * den)


def _safe_db(v: float) -> float:
    if v <= 0:
        return -math.inf
    return to_db(v)
