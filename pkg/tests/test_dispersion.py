import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from spdcwg.dispersion import (
    C_LIGHT,
    DispersionParseError,
    DispersionRangeError,
    DispersionSchemaError,
    UnknownModeError,
    effective_index,
    omega_to_um,
    parse_dispersion_file,
    um_to_omega,
    wavenumber,
)

ONE_CONSTANT = """\
mode = 00
kind = constant
value = 2.0
range_um = 0.4 1.0
"""

TABLE = """\
# tabulated test mode
mode = T
kind = table
point = 0.80 1.80
point = 0.90 1.78
"""

KTP_LIKE_TABLE = """\
mode = 00
kind = table
point = 0.80 1.8300
point = 0.82 1.8285
point = 0.84 1.8272
point = 0.86 1.8260
"""


def test_parse_single_constant_mode():
    prov = parse_dispersion_file(ONE_CONSTANT)
    assert prov.mode_labels == ["00"]
    assert effective_index(prov, "00", 0.8) == 2.0


def test_parse_two_modes():
    text = ONE_CONSTANT + "\nmode = 01\nkind = constant\nvalue = 1.9\nrange_um = 0.4 1.0\n"
    prov = parse_dispersion_file(text)
    assert set(prov.mode_labels) == {"00", "01"}
    assert effective_index(prov, "01", 0.5) == 1.9


def test_duplicate_mode_is_schema_error():
    with pytest.raises(DispersionSchemaError, match="duplicate"):
        parse_dispersion_file(ONE_CONSTANT + ONE_CONSTANT)


def test_empty_file_is_schema_error():
    with pytest.raises(DispersionSchemaError):
        parse_dispersion_file("# nothing here\n\nsource = x\n")


@pytest.mark.parametrize(
    "text, line",
    [
        ("mode = 00\nkind constant\n", 2),
        ("mode = 00\nkind = constant\nvalue = two\n", 3),
        ("\n\nkind = constant\n", 3),
        ("mode = 00\nkind = constant\nbogus = 1\n", 3),
        ("mode = 00\nkind = table\npoint = 0.8\n", 3),
        ("mode = 00\nkind = prism\n", 2),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(DispersionParseError) as info:
        parse_dispersion_file(text)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


@pytest.mark.parametrize(
    "text",
    [
        "mode = 00\nkind = constant\nvalue = 2.0\n",  # no range
        "mode = 00\nkind = table\npoint = 0.9 1.8\npoint = 0.8 1.7\n",  # not increasing
        "mode = 00\nkind = table\npoint = 0.9 1.8\n",  # one point
        "mode = 00\nkind = constant\nvalue = 0.5\nrange_um = 0.4 1.0\n",  # n < 1
        "mode = 00\nkind = sellmeier\nrange_um = 0.4 1.0\ncoeffs = 2.0 1.0\n",  # odd pole count
        "mode = 00\nkind = sellmeier\nform = cauchy\nrange_um = 0.4 1.0\ncoeffs = 2.0\n",
        "mode = 00\nkind = table\nrange_um = 0.7 0.9\npoint = 0.8 1.8\npoint = 0.9 1.7\n",
    ],
)
def test_schema_errors(text):
    with pytest.raises(DispersionSchemaError):
        parse_dispersion_file(text)


def test_constant_and_vacuum_models():
    vac = parse_dispersion_file("mode = v\nkind = constant\nvalue = 1\nrange_um = 0.2 5\n")
    assert effective_index(vac, "v", 1.234) == 1.0


def test_table_linear_interpolation():
    prov = parse_dispersion_file(TABLE)
    # hand interpolation: halfway between 1.80 and 1.78
    assert effective_index(prov, "T", 0.85) == pytest.approx(1.79, abs=1e-12)
    assert effective_index(prov, "T", 0.80) == 1.80
    assert effective_index(prov, "T", 0.90) == 1.78


def test_out_of_range_is_an_error():
    prov = parse_dispersion_file(TABLE)
    with pytest.raises(DispersionRangeError):
        effective_index(prov, "T", 0.95)
    with pytest.raises(DispersionRangeError):
        effective_index(prov, "T", np.array([0.85, 0.79]))


def test_unknown_mode():
    prov = parse_dispersion_file(TABLE)
    with pytest.raises(UnknownModeError):
        effective_index(prov, "nope", 0.85)


def test_wavenumber_vacuum_and_scaling():
    one = parse_dispersion_file("mode = a\nkind = constant\nvalue = 1\nrange_um = 0.5 2\n")
    two = parse_dispersion_file("mode = a\nkind = constant\nvalue = 2\nrange_um = 0.5 2\n")
    omega = 2 * math.pi * C_LIGHT / 1e-6
    assert wavenumber(one, "a", omega) == pytest.approx(2 * math.pi * 1e6, rel=1e-14)
    assert wavenumber(two, "a", omega) == pytest.approx(4 * math.pi * 1e6, rel=1e-14)


def test_wavenumber_tabulated_against_hand_evaluation():
    prov = parse_dispersion_file(KTP_LIKE_TABLE)
    omega = 2 * math.pi * 299792458.0 / 0.836e-6
    # spreadsheet-style: lambda back from omega, linear interpolation on 0.82..0.84
    lam = 2 * math.pi * 299792458.0 / omega * 1e6
    n = 1.8285 + (lam - 0.82) / (0.84 - 0.82) * (1.8272 - 1.8285)
    assert wavenumber(prov, "00", omega) == pytest.approx(n * omega / 299792458.0, rel=1e-12)


def test_sellmeier_forms_match_direct_formula():
    text = (
        "mode = a\nkind = sellmeier\nrange_um = 0.4 1.5\ncoeffs = 2.25 1.0 0.05673\n"
        "mode = b\nkind = sellmeier\nform = standard-ir\nrange_um = 0.4 1.5\ncoeffs = 2.25 1.0 0.05673 0.012\n"
        "offset = 0.01 -0.002\n"
    )
    prov = parse_dispersion_file(text)
    lam = 0.9
    na = math.sqrt(2.25 + lam**2 / (lam**2 - 0.05673))
    nb = math.sqrt(2.25 + lam**2 / (lam**2 - 0.05673) - 0.012 * lam**2) + 0.01 - 0.002 * lam
    assert effective_index(prov, "a", lam) == pytest.approx(na, rel=1e-14)
    assert effective_index(prov, "b", lam) == pytest.approx(nb, rel=1e-14)


def test_synthetic_file_loads(synthetic):
    assert set(synthetic.mode_labels) == {"00", "01", "10", "11"}
    assert "synthetic" in synthetic.metadata
    n = effective_index(synthetic, "00", np.linspace(0.3, 2.0, 50))
    assert np.all(n >= 1) and np.all(np.diff(n) < 0)


def test_provider_is_read_only(synthetic):
    with pytest.raises(TypeError):
        synthetic.models["zz"] = None


@given(st.floats(min_value=0.31, max_value=1.99))
def test_round_trip_wavenumber_effective_index(synthetic, lam_um):
    prov = synthetic
    omega = float(um_to_omega(lam_um))
    k = wavenumber(prov, "01", omega)
    n = effective_index(prov, "01", float(omega_to_um(omega)))
    assert k * C_LIGHT / omega == pytest.approx(n, rel=1e-12)


@given(st.floats(min_value=1.0, max_value=4.0), st.floats(min_value=0.5, max_value=1.9),
       st.floats(min_value=0.5, max_value=1.9))
def test_constant_model_is_linear_in_omega(n0, lam_a, lam_b):
    prov = parse_dispersion_file(f"mode = a\nkind = constant\nvalue = {n0!r}\nrange_um = 0.4 2\n")
    wa, wb = float(um_to_omega(lam_a)), float(um_to_omega(lam_b))
    ka, kb = wavenumber(prov, "a", wa), wavenumber(prov, "a", wb)
    assert ka / wa == pytest.approx(n0 / C_LIGHT, rel=1e-13)
    assert kb / wb == pytest.approx(n0 / C_LIGHT, rel=1e-13)


@given(st.floats(min_value=0.0, max_value=1.0))
def test_interpolation_bounded_by_neighbours(frac):
    prov = parse_dispersion_file(TABLE)
    n = effective_index(prov, "T", 0.8 + 0.1 * frac)
    assert 1.78 <= n <= 1.80
