"""
Linearized input-output engine for one signal/idler pair.

The field vector is ordered ``(b_s, b_s^dag, b_i, b_i^dag)``. The out-coupled
fields are

    B_out = M_in B_in + M_loss B_gamma,

with ``M_in = -A`` and ``M_loss = -sqrt(gamma/kappa) (A - I)``, where
``A = [Omega - K - kappa/2][Omega - K + kappa/2]^-1``. Second moments follow by
sandwiching vacuum statistics (only <b b^dag> = 1 is nonzero) between the
transfer matrices. Nothing here uses the closed-form observables, so this
module serves as an independent check on them.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .model import ResonatorParams, SingularityError, check_pump

COND_WARN = 1e12

# <v_a v_b> for a vacuum input vector v = (b_s, b_s^dag, b_i, b_i^dag)
_VACUUM = np.zeros((4, 4))
_VACUUM[0, 1] = 1.0
_VACUUM[2, 3] = 1.0


@dataclass(frozen=True)
class DriftMatrix:
    k: np.ndarray
    sigma: complex
    delta_s_eff: float
    delta_i_eff: float


@dataclass(frozen=True)
class QuantumMoments:
    """Normally ordered moments of the out-coupled pair (dimensionless spectral densities)."""

    n_s: float
    n_i: float
    m_si: complex


def build_drift(
    params: ResonatorParams,
    x: float,
    delta_s_eff: float,
    delta_i_eff: Optional[float] = None,
    validate: bool = True,
) -> DriftMatrix:
    """Drift matrix K with pump parameter sigma = Gamma x (pump phase zero)."""
    if validate:
        check_pump(x)
    if delta_i_eff is None:
        delta_i_eff = delta_s_eff
    sigma = complex(params.total_loss * x)
    half_gamma = params.gamma / 2.0
    ds, di = delta_s_eff, delta_i_eff
    k = np.zeros((4, 4), dtype=complex)
    k[0, 0] = -1j * ds - half_gamma
    k[1, 1] = 1j * ds - half_gamma
    k[2, 2] = -1j * di - half_gamma
    k[3, 3] = 1j * di - half_gamma
    k[0, 3] = sigma / 2.0
    k[1, 2] = sigma.conjugate() / 2.0
    k[2, 1] = sigma / 2.0
    k[3, 0] = sigma.conjugate() / 2.0
    k.setflags(write=False)
    return DriftMatrix(k, sigma, ds, di)


def frequency_matrix(omega: float) -> np.ndarray:
    """Omega = diag(i w, -i w, i w, -i w) for sideband offset ``omega`` from line centre."""
    return np.diag([1j * omega, -1j * omega, 1j * omega, -1j * omega])


def transfer_matrices(
    drift: DriftMatrix, params: ResonatorParams, omega: float = 0.0
) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(M_in, M_loss)`` mapping input and loss-channel fields to the output."""
    kappa, gamma = params.kappa, params.gamma
    eye = np.eye(4)
    base = frequency_matrix(omega) - drift.k
    right = base + 0.5 * kappa * eye
    left = base - 0.5 * kappa * eye
    cond = np.linalg.cond(right)
    if not np.isfinite(cond):
        raise SingularityError(_point(drift, params, omega))
    if cond > COND_WARN:
        warnings.warn(f"ill-conditioned cavity response (cond={cond:.3g}) at {_point(drift, params, omega)}")
    try:
        # A = left @ right^-1, i.e. solve A right = left
        a = np.linalg.solve(right.T, left.T).T
    except np.linalg.LinAlgError as exc:
        raise SingularityError(_point(drift, params, omega)) from exc
    m_in = -a
    m_loss = -np.sqrt(gamma / kappa) * (a - eye)
    return m_in, m_loss


def output_correlations(drift: DriftMatrix, params: ResonatorParams, omega: float = 0.0) -> np.ndarray:
    """Matrix of <out_a out_b> before collection loss (4x4 complex)."""
    m_in, m_loss = transfer_matrices(drift, params, omega)
    return m_in @ _VACUUM @ m_in.T + m_loss @ _VACUUM @ m_loss.T


def second_moments(
    drift: DriftMatrix,
    params: ResonatorParams,
    omega: float = 0.0,
    eta: Optional[float] = None,
) -> QuantumMoments:
    """Photon densities and pair moment after a beam splitter of efficiency ``eta``.

    The admixed vacuum contributes nothing to normally ordered moments, so the
    splitter simply scales them by ``eta``.
    """
    if eta is None:
        eta = params.eta
    corr = output_correlations(drift, params, omega)
    n_s = float(corr[1, 0].real)
    n_i = float(corr[3, 2].real)
    m_si = complex(corr[0, 2])
    return QuantumMoments(eta * n_s, eta * n_i, eta * m_si)


def _point(drift: DriftMatrix, params: ResonatorParams, omega: float) -> str:
    return (
        f"kappa={params.kappa:g}, gamma={params.gamma:g}, sigma={drift.sigma.real:g}, "
        f"delta_s={drift.delta_s_eff:g}, delta_i={drift.delta_i_eff:g}, omega={omega:g}"
    )
