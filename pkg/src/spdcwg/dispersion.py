"""Refractive-index models for waveguide modes and the dispersion-file parser.

A dispersion file is plain text, one ``key = value`` pair per line. Blank
lines and anything after ``#`` are ignored. Keys before the first ``mode``
line are file-level metadata (currently only ``source``). Each ``mode = <label>``
line opens a new block that runs until the next ``mode`` line::

    source = synthetic test data

    mode = 00
    kind = sellmeier
    form = standard            # or: standard-ir
    range_um = 0.35 1.2
    coeffs = 2.1 0.9 0.04      # A B1 C1 [B2 C2 ...] [D for standard-ir]
    offset = 0.0 -0.002        # optional polynomial in lambda (um), c0 c1 ...

    mode = 01
    kind = table
    point = 0.80 1.80
    point = 0.90 1.78

    mode = 10
    kind = constant
    value = 2.0
    range_um = 0.4 1.0

Sellmeier forms (lambda in um):

* ``standard``:    n^2 = A + sum_j B_j lambda^2 / (lambda^2 - C_j)
* ``standard-ir``: the same minus D lambda^2 (D is the last coefficient)

Tabulated models interpolate linearly. ``range_um`` is optional for tables and
defaults to the sample span. Queries outside the declared range raise
:class:`DispersionRangeError`; nothing is extrapolated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

C_LIGHT = 299_792_458.0  # m/s

KINDS = ("constant", "sellmeier", "table")
SELLMEIER_FORMS = ("standard", "standard-ir")


class DispersionError(Exception):
    """Base class for dispersion failures."""


class DispersionParseError(DispersionError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DispersionSchemaError(DispersionError):
    pass


class DispersionRangeError(DispersionError):
    pass


class UnknownModeError(DispersionError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


def omega_to_um(omega):
    """Vacuum wavelength in um for angular frequency in rad/s."""
    return 2.0 * np.pi * C_LIGHT / np.asarray(omega, dtype=float) * 1e6


def um_to_omega(wavelength_um):
    return 2.0 * np.pi * C_LIGHT / (np.asarray(wavelength_um, dtype=float) * 1e-6)


@dataclass(frozen=True)
class SellmeierModel:
    form_id: str
    coefficients: tuple[float, ...]
    valid_range: tuple[float, float]

    def __post_init__(self):
        if self.form_id not in SELLMEIER_FORMS:
            raise DispersionSchemaError(f"unknown Sellmeier form {self.form_id!r}")
        n_poles = len(self.coefficients) - 1 - (self.form_id == "standard-ir")
        if n_poles < 0 or n_poles % 2:
            raise DispersionSchemaError(
                f"form {self.form_id!r} got {len(self.coefficients)} coefficients"
            )
        _check_range(self.valid_range)

    def n_squared(self, wavelength_um):
        lam2 = np.asarray(wavelength_um, dtype=float) ** 2
        coeffs = self.coefficients
        ir = 0.0
        if self.form_id == "standard-ir":
            coeffs, ir = coeffs[:-1], coeffs[-1]
        total = coeffs[0] - ir * lam2
        for b, c in zip(coeffs[1::2], coeffs[2::2]):
            total = total + b * lam2 / (lam2 - c)
        return total

    def __call__(self, wavelength_um):
        n2 = self.n_squared(wavelength_um)
        if np.any(n2 < 1.0):
            raise DispersionSchemaError("Sellmeier model gives n < 1 inside its range")
        return np.sqrt(n2)


@dataclass(frozen=True)
class ConstantModel:
    value: float
    valid_range: tuple[float, float]

    def __post_init__(self):
        if self.value < 1.0:
            raise DispersionSchemaError(f"constant index {self.value} is below 1")
        _check_range(self.valid_range)

    def __call__(self, wavelength_um):
        return np.full(np.shape(wavelength_um), self.value, dtype=float)


@dataclass(frozen=True)
class TableModel:
    wavelengths: tuple[float, ...]
    indices: tuple[float, ...]
    valid_range: tuple[float, float]

    def __post_init__(self):
        lam = np.asarray(self.wavelengths)
        if lam.size < 2:
            raise DispersionSchemaError("table needs at least 2 points")
        if np.any(np.diff(lam) <= 0):
            raise DispersionSchemaError("table wavelengths must be strictly increasing")
        if min(self.indices) < 1.0:
            raise DispersionSchemaError("table contains an index below 1")
        _check_range(self.valid_range)
        lo, hi = self.valid_range
        if lo < lam[0] or hi > lam[-1]:
            raise DispersionSchemaError("range_um extends beyond the tabulated points")

    def __call__(self, wavelength_um):
        return np.interp(wavelength_um, self.wavelengths, self.indices)


def _check_range(valid_range):
    lo, hi = valid_range
    if not (0 < lo < hi):
        raise DispersionSchemaError(f"invalid range_um {lo} {hi}")


@dataclass(frozen=True)
class ModeDispersionModel:
    """Effective index of one guided mode: base index plus a polynomial offset."""

    mode_label: str
    base: SellmeierModel | ConstantModel | TableModel
    mode_offset: tuple[float, ...] = ()

    @property
    def valid_range(self) -> tuple[float, float]:
        return self.base.valid_range

    def __call__(self, wavelength_um):
        lam = np.asarray(wavelength_um, dtype=float)
        lo, hi = self.valid_range
        bad = (lam < lo) | (lam > hi) | ~np.isfinite(lam)
        if np.any(bad):
            worst = lam[bad].flat[0] if lam.ndim else float(lam)
            raise DispersionRangeError(
                f"mode {self.mode_label}: wavelength {worst:.9g} um outside [{lo}, {hi}]"
            )
        n = self.base(lam)
        if self.mode_offset:
            # Horner, c0 + c1*lam + c2*lam^2 ...
            poly = np.zeros_like(lam)
            for c in reversed(self.mode_offset):
                poly = poly * lam + c
            n = n + poly
            if np.any(n < 1.0):
                raise DispersionSchemaError(f"mode {self.mode_label}: offset drives n below 1")
        return n


@dataclass(frozen=True)
class DispersionProvider:
    models: Mapping[str, ModeDispersionModel]
    metadata: str = ""

    def __post_init__(self):
        if not self.models:
            raise DispersionSchemaError("no modes declared")
        object.__setattr__(self, "models", MappingProxyType(dict(self.models)))

    @property
    def mode_labels(self) -> list[str]:
        return list(self.models)

    def model(self, mode: str) -> ModeDispersionModel:
        try:
            return self.models[mode]
        except KeyError:
            raise UnknownModeError(f"unknown mode {mode!r}") from None


def effective_index(provider: DispersionProvider, mode: str, wavelength_um):
    """Effective index of ``mode`` at vacuum wavelength(s) in um.

    Scalars in, Python float out; arrays in, arrays out.
    """
    n = provider.model(mode)(wavelength_um)
    return float(n) if np.ndim(n) == 0 else n


def wavenumber(provider: DispersionProvider, mode: str, omega):
    """Propagation constant k = n_eff * omega / c in rad/m."""
    omega = np.asarray(omega, dtype=float)
    n = provider.model(mode)(omega_to_um(omega))
    k = n * omega / C_LIGHT
    return float(k) if np.ndim(k) == 0 else k


@dataclass
class _Block:
    label: str
    line: int
    keys: dict = field(default_factory=dict)
    points: list = field(default_factory=list)


def _floats(text: str, line: int, key: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split()]
    except ValueError:
        raise DispersionParseError(line, f"{key}: expected numbers, got {text!r}") from None


def parse_dispersion_file(content: str) -> DispersionProvider:
    """Parse dispersion-file text into a :class:`DispersionProvider`."""
    source = ""
    blocks: list[_Block] = []
    for lineno, raw in enumerate(content.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise DispersionParseError(lineno, f"expected 'key = value', got {text!r}")
        key, _, value = (part.strip() for part in text.partition("="))
        if not key or not value:
            raise DispersionParseError(lineno, f"empty key or value in {text!r}")

        if key == "mode":
            if any(b.label == value for b in blocks):
                raise DispersionSchemaError(f"line {lineno}: duplicate mode label {value!r}")
            blocks.append(_Block(value, lineno))
            continue
        if not blocks:
            if key == "source":
                source = value
                continue
            raise DispersionParseError(lineno, f"key {key!r} before any 'mode' line")

        block = blocks[-1]
        if key == "point":
            pair = _floats(value, lineno, key)
            if len(pair) != 2:
                raise DispersionParseError(lineno, "point needs '<lambda_um> <n>'")
            block.points.append((lineno, pair[0], pair[1]))
        elif key in ("kind", "form"):
            block.keys[key] = (lineno, value)
        elif key in ("range_um", "coeffs", "offset", "value"):
            block.keys[key] = (lineno, _floats(value, lineno, key))
        else:
            raise DispersionParseError(lineno, f"unknown key {key!r}")

    if not blocks:
        raise DispersionSchemaError("no modes declared")
    models = {b.label: _build_model(b) for b in blocks}
    return DispersionProvider(models, source)


def _build_model(block: _Block) -> ModeDispersionModel:
    keys = block.keys
    where = f"mode {block.label!r} (line {block.line})"
    if "kind" not in keys:
        raise DispersionSchemaError(f"{where}: missing 'kind'")
    kind = keys["kind"][1]
    if kind not in KINDS:
        raise DispersionParseError(keys["kind"][0], f"unknown kind {kind!r}")

    valid_range = None
    if "range_um" in keys:
        line, vals = keys["range_um"]
        if len(vals) != 2:
            raise DispersionParseError(line, "range_um needs '<lo> <hi>'")
        valid_range = (vals[0], vals[1])

    try:
        if kind == "table":
            if not block.points:
                raise DispersionSchemaError(f"{where}: table without points")
            lam = tuple(p[1] for p in block.points)
            idx = tuple(p[2] for p in block.points)
            base = TableModel(lam, idx, valid_range or (lam[0], lam[-1]))
        else:
            if valid_range is None:
                raise DispersionSchemaError(f"{where}: missing range_um")
            if block.points:
                raise DispersionSchemaError(f"{where}: 'point' rows only allowed for tables")
            if kind == "constant":
                if "value" not in keys or len(keys["value"][1]) != 1:
                    raise DispersionSchemaError(f"{where}: constant needs one 'value'")
                base = ConstantModel(keys["value"][1][0], valid_range)
            else:
                if "coeffs" not in keys:
                    raise DispersionSchemaError(f"{where}: sellmeier needs 'coeffs'")
                form = keys.get("form", (0, "standard"))[1]
                base = SellmeierModel(form, tuple(keys["coeffs"][1]), valid_range)
    except DispersionSchemaError as exc:
        if str(exc).startswith("mode "):
            raise
        raise DispersionSchemaError(f"{where}: {exc}") from None

    offset = tuple(keys["offset"][1]) if "offset" in keys else ()
    return ModeDispersionModel(block.label, base, offset)


def load_dispersion_file(path) -> DispersionProvider:
    with open(path, encoding="utf-8") as fh:
        return parse_dispersion_file(fh.read())
