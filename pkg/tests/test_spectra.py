import math
import random

import numpy as np
import pytest

from qfc.classical import effective_detuning, pump_steady_state, threshold_amplitude_region
from qfc.model import ResonatorParams, ValidityError, threshold_power
from qfc.observables import g2_joint, jsi, optimal_angle, photon_number, squeeze, squeeze_limits, variance
from qfc.spectra import (
    SERIES_P_TH,
    SERIES_PUMP,
    Column,
    Grid,
    SpectrumDataset,
    comb_spectrum,
    g2_curves,
    jsi_map,
    squeezing_map,
    threshold_map,
)
from qfc.units import to_db

from .conftest import OMEGA_1550


def _spot_rows(ds, fraction=0.05, seed=3):
    rng = random.Random(seed)
    k = max(1, int(len(ds.rows) * fraction))
    return rng.sample(list(ds.rows), k)


def test_grid_inclusive():
    np.testing.assert_array_equal(Grid(-1.0, 1.0, 5).values(), [-1.0, -0.5, 0.0, 0.5, 1.0])
    assert Grid(2.0, 2.0, 1).values() == [2.0]
    with pytest.raises(ValueError):
        Grid(0.0, 1.0, 0)


def test_dataset_rejects_bad_rows():
    schema = (Column("a", "1"), Column("b", "1"))
    with pytest.raises(ValueError):
        SpectrumDataset(schema, ((1.0,),), {})
    with pytest.raises(ValueError):
        SpectrumDataset(schema, ((1.0, math.nan),), {})
    ds = SpectrumDataset(schema, ((1.0, 2.0), (3.0, 4.0)), {})
    assert ds.column("b") == [2.0, 4.0]


# --- comb ------------------------------------------------------------------


def test_comb_rows_reproducible(comb_ring):
    ds = comb_spectrum(comb_ring, 0.99, range(-30, 31))
    assert [c.name for c in ds.schema] == ["mu", "delta_eff", "n", "v_s", "v_as", "phi_opt", "g2_si"]
    assert len(ds.rows) == 61
    for mu, d, n, v_s, v_as, phi, g2 in _spot_rows(ds, 0.2):
        assert d == effective_detuning(comb_ring, 0.99, int(mu))
        sq = squeeze(comb_ring, 0.99, d)
        assert (n, v_s, v_as, phi) == (photon_number(comb_ring, 0.99, d), sq.v_s_db, sq.v_as_db, sq.phi_opt)
        assert g2 == g2_joint(comb_ring, 0.99, d)
    assert ds.meta["mu_root"] == pytest.approx(math.sqrt(0.99 * 1e9 / 1e7))


def test_comb_symmetric_in_mu(comb_ring):
    ds = comb_spectrum(comb_ring, 0.9, range(-12, 13))
    by_mu = {row[0]: row[1:] for row in ds.rows}
    for mu in range(1, 13):
        assert by_mu[mu] == by_mu[-mu]


def test_comb_zero_pump_drops_g2(comb_ring):
    ds = comb_spectrum(comb_ring, 0.0, range(-3, 4))
    assert "g2_si" not in [c.name for c in ds.schema]
    assert all(n == 0.0 for n in ds.column("n"))
    assert all(v == 0.0 for v in ds.column("v_s") + ds.column("v_as"))


def test_comb_rejects_asymmetric_range(comb_ring):
    with pytest.raises(ValueError):
        comb_spectrum(comb_ring, 0.5, range(0, 5))
    with pytest.raises(ValidityError):
        comb_spectrum(comb_ring, 0.999, range(-1, 2))


def test_comb_threads_identical(comb_ring):
    assert comb_spectrum(comb_ring, 0.95, range(-20, 21), threads=4) == comb_spectrum(comb_ring, 0.95, range(-20, 21))


def test_normal_dispersion_comb():
    p = ResonatorParams(kappa=8e8, gamma=2e8, g_opt=1.5e6, d2=-1e7, omega_p=OMEGA_1550)
    ds = comb_spectrum(p, 0.99, range(-30, 31))
    n = ds.column("n")
    assert ds.column("mu")[int(np.argmax(n))] == 0.0
    assert ds.meta["mu_root"] is None
    assert all(d < 0 for d in ds.column("delta_eff"))


# --- squeezing map ----------------------------------------------------------


def test_squeezing_map(comb_ring):
    dg = Grid(-2e9, 2e9, 21)
    pg = Grid(0.0, math.pi, 13)
    ds = squeezing_map(comb_ring, 0.9, dg, pg)
    assert len(ds.rows) == 21 * 13
    for d, phi, v, ridge in _spot_rows(ds, 0.2):
        assert v == to_db(variance(comb_ring, 0.9, d, phi))
        assert ridge == optimal_angle(comb_ring, 0.9, d)
    # phi = 0 and phi = pi rows agree
    rows = {(r[0], r[1]): r[2] for r in ds.rows}
    for d in dg.values():
        np.testing.assert_allclose(rows[(d, 0.0)], rows[(d, math.pi)], atol=1e-12)
    # the extremes sit on the Delta = 0 slice at the line-centre limits
    v_s, v_as = squeeze_limits(comb_ring, 0.9)
    values = ds.column("v")
    np.testing.assert_allclose(min(values), to_db(v_s), atol=1e-9)
    np.testing.assert_allclose(max(values), to_db(v_as), atol=1e-9)


# --- JSI --------------------------------------------------------------------


def test_jsi_map_normalization_and_transpose(comb_ring):
    g = Grid(-1e9, 1e9, 21)
    ds = jsi_map(comb_ring, 0.99, g, g)
    assert ds.meta["normalization"] == jsi(comb_ring, 0.99, 0.0, 0.0)
    assert abs(ds.meta["normalization"] / 125396342.22 - 1) < 5e-3
    assert max(ds.column("jsi_norm")) == 1.0
    values = {(r[0], r[1]): r[2] for r in ds.rows}
    for (s, i), v in values.items():
        assert values[(i, s)] == v


def test_jsi_grows_with_pump(comb_ring):
    g = Grid(-1e9, 1e9, 21)
    low = jsi_map(comb_ring, 0.95, g, g).column("jsi")
    high = jsi_map(comb_ring, 0.99, g, g).column("jsi")
    assert all(a < b for a, b in zip(low, high))


# --- g2 ---------------------------------------------------------------------


def test_g2_curves(comb_ring):
    ds = g2_curves(comb_ring, Grid(0.0, 0.99, 12), [0.0, 4e8])
    # x = 0 omitted for both detunings
    assert len(ds.rows) == 2 * 11
    assert all(v == 2.0 for v in ds.column("g2_s"))
    for x, d, g2, _ in ds.rows:
        assert g2 == g2_joint(comb_ring, x, d)
        assert g2 >= 2.0


# --- threshold --------------------------------------------------------------


def test_threshold_map_rows(thermal_ring):
    p_in = 0.9 * threshold_power(thermal_ring)
    grid = Grid(-12e9, 2e9, 57)
    ds = threshold_map(thermal_ring, p_in, grid, 3, 1e11)
    assert ds.meta["p_th"] == threshold_power(thermal_ring)
    assert ds.meta["series_codes"]["pump"] == SERIES_PUMP
    for delta, series, branch, photons, power in ds.rows:
        series, branch = int(series), int(branch)
        if series == SERIES_P_TH:
            assert power == threshold_power(thermal_ring)
            continue
        if series == SERIES_PUMP:
            assert photons == pump_steady_state(thermal_ring, p_in, delta).roots[branch].photons
        else:
            assert photons == threshold_amplitude_region(thermal_ring, delta, series)[branch]
        np.testing.assert_allclose(power, 1e11 * photons * 1.054571817e-34 * OMEGA_1550, rtol=1e-12)
    # one P_th row per detuning, empty regions omitted
    assert sum(1 for r in ds.rows if r[1] == SERIES_P_TH) == 57
    region_rows = [r for r in ds.rows if r[1] >= 0]
    assert 0 < len(region_rows) < 57 * 4 * 2


def test_threshold_map_bistability_present(thermal_ring):
    ds = threshold_map(thermal_ring, 0.9 * threshold_power(thermal_ring), Grid(-12e9, 2e9, 281), 0, 1e11)
    branches = {}
    for delta, series, branch, *_ in ds.rows:
        if series == SERIES_PUMP:
            branches[delta] = branches.get(delta, 0) + 1
    assert max(branches.values()) == 3
    assert min(branches.values()) == 1


def test_threshold_map_deterministic(thermal_ring):
    args = (thermal_ring, 0.9 * threshold_power(thermal_ring), Grid(-12e9, 2e9, 141), 4, 1e11)
    assert threshold_map(*args) == threshold_map(*args, threads=3)
