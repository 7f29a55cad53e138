import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spdcwg.dispersion import C_LIGHT, parse_dispersion_file, um_to_omega, wavenumber
from spdcwg.phasematching import (
    ModeTriplet,
    NoPhaseMatchingError,
    WaveguideSpec,
    phase_mismatch,
    pm_function,
    pm_locus,
    qpm_period_for,
    ridge_width_nm,
)

PDD = ModeTriplet("P", "D", "D")

# constant indices n_p = 2.0, n_s = n_i = 1.8 (see conftest):
# k_p - k_s - k_i = 0.2 (ws + wi) / c, so period 2.09 um at 418 nm
CONST_PERIOD = 0.418e-6 / 0.2


def test_waveguide_validation(constant):
    with pytest.raises(ValueError):
        WaveguideSpec(0.0, 1e-6, constant)
    with pytest.raises(ValueError):
        WaveguideSpec(1e-3, -1e-6, constant)
    with pytest.raises(ValueError):
        WaveguideSpec(1e-3, 1e-6, constant, qpm_order=0)
    assert WaveguideSpec(1e-3, 1e-6, constant).mode_labels == ("P", "D")


def test_constructed_cancellation(constant):
    wg = WaveguideSpec(1.3e-3, CONST_PERIOD, constant)
    wp = float(um_to_omega(0.418))
    assert abs(phase_mismatch(wg, PDD, wp / 2, wp / 2)) < 1e-6


def test_halving_period_shifts_by_grating_term(constant):
    wg = WaveguideSpec(1.3e-3, CONST_PERIOD, constant)
    half = WaveguideSpec(1.3e-3, CONST_PERIOD / 2, constant)
    wp = float(um_to_omega(0.418))
    shift = phase_mismatch(half, PDD, wp / 2, wp / 2) - phase_mismatch(wg, PDD, wp / 2, wp / 2)
    assert shift == pytest.approx(-2 * math.pi / CONST_PERIOD, rel=1e-12)


def test_mismatch_term_by_term(synthetic_wg, synthetic):
    t = ModeTriplet("00", "01", "10")
    ws, wi = 2.21e15, 2.35e15
    expected = (
        wavenumber(synthetic, "00", ws + wi)
        - wavenumber(synthetic, "01", ws)
        - wavenumber(synthetic, "10", wi)
        - 2 * math.pi / 3.9375e-6
    )
    assert phase_mismatch(synthetic_wg, t, ws, wi) == pytest.approx(expected, rel=1e-12, abs=1e-6)


@given(st.floats(2.0e15, 2.6e15), st.floats(2.0e15, 2.6e15),
       st.floats(1e-6, 2e-5), st.floats(1e-6, 2e-5), st.integers(1, 3))
def test_grating_term_linearity(synthetic, ws, wi, period_a, period_b, order):
    t = ModeTriplet("00", "00", "01")
    a = WaveguideSpec(1e-3, period_a, synthetic, qpm_order=order)
    b = WaveguideSpec(1e-3, period_b, synthetic, qpm_order=order)
    diff = phase_mismatch(a, t, ws, wi) - phase_mismatch(b, t, ws, wi)
    expected = 2 * math.pi * order * (1 / period_b - 1 / period_a)
    assert diff == pytest.approx(expected, rel=1e-9, abs=1e-6)


@given(st.floats(2.0e15, 2.6e15), st.floats(2.0e15, 2.6e15))
def test_exchange_symmetry_for_equal_modes(synthetic_wg, ws, wi):
    t = ModeTriplet("00", "01", "01")
    assert phase_mismatch(synthetic_wg, t, ws, wi) == phase_mismatch(synthetic_wg, t, wi, ws)


def test_pm_function_reference_values():
    assert pm_function(0.0, 1e-3) == 1 + 0j
    L = 1.3e-3
    assert abs(pm_function(2 * math.pi / L, L)) < 1e-15
    # |sin(x)/x| at x = pi/2 is 2/pi
    assert abs(pm_function(math.pi / L, L)) == pytest.approx(2 / math.pi, rel=1e-14)
    with pytest.raises(ValueError):
        pm_function(1.0, 0.0)


def test_pm_function_vectorized_matches_scalar():
    dk = np.linspace(-5e4, 5e4, 101)
    vec = pm_function(dk, 1e-3)
    for k in (0, 17, 50, 100):
        assert vec[k] == pm_function(float(dk[k]), 1e-3)


def test_qpm_period_closed_form(constant):
    t = ModeTriplet("P", "D", "D")
    period = qpm_period_for(constant, t, 0.418, 0.836, 0.836)
    k_p = 2 * math.pi * 2.0 / 0.418e-6
    k_s = 2 * math.pi * 1.8 / 0.836e-6
    assert period == pytest.approx(2 * math.pi / (k_p - 2 * k_s), rel=1e-12)
    assert period == pytest.approx(2.09e-6, rel=1e-12)
    assert qpm_period_for(constant, t, 0.418, 0.836, 0.836, order=3) == pytest.approx(3 * period)


def test_qpm_period_degenerate_bulk_has_no_solution(constant):
    with pytest.raises(NoPhaseMatchingError):
        qpm_period_for(constant, ModeTriplet("D", "D", "D"), 0.418, 0.836, 0.836)


def test_qpm_period_rejects_energy_violation(constant):
    with pytest.raises(ValueError, match="energy"):
        qpm_period_for(constant, PDD, 0.418, 0.836, 0.840)


def test_qpm_period_round_trip(synthetic):
    t = ModeTriplet("00", "00", "00")
    lam_s, lam_i = 0.81, 0.87
    lam_p = 1 / (1 / lam_s + 1 / lam_i)
    period = qpm_period_for(synthetic, t, lam_p, lam_s, lam_i)
    wg = WaveguideSpec(1.3e-3, period, synthetic)
    dk = phase_mismatch(wg, t, float(um_to_omega(lam_s)), float(um_to_omega(lam_i)))
    assert abs(dk) <= 1e-6


def test_synthetic_file_phase_matches_near_fig_period(synthetic):
    period = qpm_period_for(synthetic, ModeTriplet("00", "00", "00"), 0.418, 0.836, 0.836)
    assert period == pytest.approx(3.9375e-6, rel=1e-3)


def test_locus_constant_index_is_antidiagonal(constant):
    wg = WaveguideSpec(1.3e-3, CONST_PERIOD, constant)
    wp0 = float(um_to_omega(0.418))
    omega_s = np.linspace(0.40 * wp0, 0.60 * wp0, 21)
    res = pm_locus(wg, PDD, omega_s, (0.3 * wp0, 0.7 * wp0))
    pts = res.as_array()
    assert len(pts) == 21 and not res.omitted
    # dk = 0.2 (ws + wi)/c - 2 pi/period: the root is exactly ws + wi = wp0
    assert np.allclose(pts.sum(axis=1), wp0, rtol=1e-12)
    assert np.all(np.diff(pts[:, 0]) > 0)


def test_locus_empty_range(constant):
    wg = WaveguideSpec(1.3e-3, CONST_PERIOD, constant)
    assert pm_locus(wg, PDD, [], (1e15, 3e15)).points == []


def test_locus_reports_samples_without_root(constant):
    wg = WaveguideSpec(1.3e-3, CONST_PERIOD, constant)
    wp0 = float(um_to_omega(0.418))
    res = pm_locus(wg, PDD, [0.5 * wp0, 0.9 * wp0], (0.3 * wp0, 0.45 * wp0))
    assert res.points == []
    assert len(res.omitted) == 2


@pytest.mark.parametrize("idler", ["00", "01", "10"])
def test_locus_points_reverified(synthetic_wg, idler):
    t = ModeTriplet("00", idler, idler)
    omega_s = um_to_omega(np.linspace(0.95, 0.75, 15))
    bounds = (float(um_to_omega(1.15)), float(um_to_omega(0.70)))
    res = pm_locus(synthetic_wg, t, omega_s, bounds)
    assert len(res.points) == 15
    for ws, wi in res.points:
        assert abs(phase_mismatch(synthetic_wg, t, ws, wi)) <= 1e-6


def test_ridge_width_constant_case(constant):
    wg = WaveguideSpec(1.3e-3, CONST_PERIOD, constant)
    wp0 = float(um_to_omega(0.418))
    width = ridge_width_nm(wg, PDD, wp0 / 2, wp0 / 2)
    # |grad dk| in nm: d/dlam (0.2 * 2 pi / lam) per axis at 836 nm
    g = 0.2 * 2 * math.pi / (836e-9) ** 2 * 1e-9
    expected = 4 * 1.3915573782515103 / 1.3e-3 / (g * math.sqrt(2))
    assert width == pytest.approx(expected, rel=1e-4)
