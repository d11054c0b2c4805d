"""
Resonator parameters, derived nonlinear rates and the FWM threshold power.

All rates are plain angular rates in s^-1. A value quoted as "800 MHz" in a
config file means 8e8 s^-1; no factor of 2*pi is applied anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

# CODATA 2018 (both exact by SI definition)
HBAR = 1.054571817e-34  # reduced Planck constant [J s]
C_LIGHT = 299792458.0  # speed of light in vacuum [m/s]

# Linearized input-output theory breaks down above this fraction of P_th.
LINEARIZATION_BOUND = 0.99895


class ConfigurationError(ValueError):
    """Missing or inconsistent model inputs."""


class ValidityError(ValueError):
    """Operating point outside the range where the linearized model holds."""


class SingularityError(ArithmeticError):
    """A linear system in the quantum engine could not be solved."""


@dataclass(frozen=True)
class Geometry:
    """Waveguide and ring geometry used to derive ``g_opt`` and cold resonances.

    Parameters
    ----------
    n_eff : float
        Effective refractive index.
    l_eff : float
        Effective ring length [m].
    a_eff : float
        Effective mode area [m^2].
    v_g : float
        Group velocity [m/s].
    n2 : float
        Nonlinear refractive index [m^2/W].
    m : int, optional
        Azimuthal mode number of the pumped resonance.
    """

    n_eff: float
    l_eff: float
    a_eff: float
    v_g: float
    n2: float
    m: Optional[int] = None

    def __post_init__(self) -> None:
        for name in ("n_eff", "l_eff", "a_eff", "v_g", "n2"):
            value = getattr(self, name)
            if not value > 0:
                raise ConfigurationError(f"geometry.{name} must be positive, got {value}")
        if self.m is not None and self.m <= 0:
            raise ConfigurationError(f"geometry.m must be a positive integer, got {self.m}")


@dataclass(frozen=True)
class Thermal:
    """Absorption and heat-transport inputs used to derive ``g_th``."""

    gamma_abs: float  # absorption loss rate [s^-1]
    a_th: float  # thermo-optic temperature coefficient [1/K]
    k_th: float  # thermal conductivity [W/(m K)]

    def __post_init__(self) -> None:
        if self.gamma_abs < 0:
            raise ConfigurationError(f"thermal.gamma_abs must be >= 0, got {self.gamma_abs}")
        if not self.k_th > 0:
            raise ConfigurationError(f"thermal.k_th must be positive, got {self.k_th}")


@dataclass(frozen=True)
class ResonatorParams:
    """One resonator plus pump-laser configuration.

    The total loss rate ``Gamma = kappa + gamma`` is exposed as a property and
    never stored.
    """

    kappa: float
    gamma: float
    g_opt: float
    omega_p: float
    g_th: float = 0.0
    d1: float = 0.0
    d2: float = 0.0
    eta: float = 1.0
    geometry: Optional[Geometry] = None
    thermal: Optional[Thermal] = None

    def __post_init__(self) -> None:
        if not self.kappa > 0:
            raise ConfigurationError(f"kappa must be positive, got {self.kappa}")
        if not self.gamma >= 0:
            raise ConfigurationError(f"gamma must be >= 0, got {self.gamma}")
        if not self.g_opt > 0:
            raise ConfigurationError(f"g_opt must be positive, got {self.g_opt}")
        if not self.g_th >= 0:
            raise ConfigurationError(f"g_th must be >= 0, got {self.g_th}")
        if not 0.0 <= self.eta <= 1.0:
            raise ConfigurationError(f"eta must lie in [0, 1], got {self.eta}")
        if not self.omega_p > 0:
            raise ConfigurationError(f"omega_p must be positive, got {self.omega_p}")
        for name in ("d1", "d2"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigurationError(f"{name} must be finite")

    @property
    def total_loss(self) -> float:
        """Gamma = kappa + gamma [s^-1]."""
        return self.kappa + self.gamma

    @property
    def g_tot(self) -> float:
        return self.g_opt + self.g_th


@dataclass(frozen=True)
class PumpDrive:
    """Pump specification: absolute input power or power normalized to P_th.

    Exactly one of ``p_in`` [W] and ``p_n`` must be given.
    """

    p_in: Optional[float] = None
    p_n: Optional[float] = None

    def __post_init__(self) -> None:
        if (self.p_in is None) == (self.p_n is None):
            raise ConfigurationError("exactly one of p_in and p_n must be given")
        value = self.p_in if self.p_in is not None else self.p_n
        if not value >= 0:
            raise ConfigurationError(f"pump must be non-negative, got {value}")


def derive_g_opt(geometry: Optional[Geometry], omega_p: float) -> float:
    """Kerr nonlinearity per photon, hbar w^2 v_g^2 n2 / (c A_eff L_eff)."""
    if geometry is None:
        raise ConfigurationError("deriving g_opt requires a geometry block")
    g = (
        HBAR * omega_p**2 * geometry.v_g**2 * geometry.n2
        / (C_LIGHT * geometry.a_eff * geometry.l_eff)
    )
    return g


def derive_g_th(thermal: Optional[Thermal], geometry: Optional[Geometry], omega_p: float) -> float:
    """Thermal nonlinearity per photon, hbar w^2 n_eff gamma_abs a_th / (2 k L_eff)."""
    if thermal is None or geometry is None:
        raise ConfigurationError("deriving g_th requires both thermal and geometry blocks")
    return (
        HBAR * omega_p**2 * geometry.n_eff * thermal.gamma_abs * thermal.a_th
        / (2.0 * thermal.k_th * geometry.l_eff)
    )


def threshold_power(params: ResonatorParams) -> float:
    """Minimum input power for FWM oscillation [W]."""
    G = params.total_loss
    return G**3 * HBAR * params.omega_p / (8.0 * params.g_opt * params.kappa)


def check_pump(x: float) -> float:
    """Return ``x`` if it is a usable normalized pump, else raise ValidityError."""
    if not x >= 0:
        raise ValidityError(f"normalized pump must be >= 0, got {x}")
    if x > LINEARIZATION_BOUND:
        raise ValidityError(
            f"normalized pump P_in/P_th = {x:.6g} exceeds the linearization bound "
            f"{LINEARIZATION_BOUND} (model valid only below the FWM threshold)"
        )
    return x


def normalize_pump(drive: PumpDrive, params: ResonatorParams) -> float:
    """Convert a pump drive to x = P_in/P_th, rejecting values above the bound."""
    if drive.p_n is not None:
        x = drive.p_n
    else:
        x = drive.p_in / threshold_power(params)
    return check_pump(x)


def cold_resonance(params: ResonatorParams, m: Optional[int] = None) -> float:
    """Cold-cavity resonance 2 pi c m / (n_eff L_eff) [rad/s].

    ``m`` defaults to the mode number stored in the geometry block.
    """
    geo = params.geometry
    if geo is None:
        raise ConfigurationError("cold_resonance requires a geometry block")
    if m is None:
        m = geo.m
    if m is None:
        raise ConfigurationError("no azimuthal mode number given")
    return 2.0 * math.pi * C_LIGHT * m / (geo.n_eff * geo.l_eff)
