"""YAML run configuration.

Every section is optional until a subcommand needs it. Relative file paths are
resolved against the directory holding the config file. Keys::

    dispersion: <path to dispersion file>
    waveguide:  length_mm, qpm_period_um, qpm_order (default 1),
                core: {width_um, depth_um}        # for overlap weights
    pump:       center_nm, fwhm_nm, shape (gaussian)
    triplets:   - {pump, signal, idler, weight | coupling}
                  weight: number or [re, im]; overrides the overlap integral
                  coupling: pump coupling (default 1) used with core overlap
    grid:       signal_nm: [lo, hi], idler_nm: [lo, hi], n_signal, n_idler
    locus:      signal_nm: [lo, hi], n_signal, idler_nm: [lo, hi],
                tolerance (rad/m, 1e-6), bracket_steps (400)
    filters:    trigger_center_nm, trigger_fwhm_nm (6), trigger_shape,
                signal_cutoff_nm, trigger_transmission, signal_transmission
    detectors:  trigger: {efficiency, dark_hz}, signal: {efficiency, dark_hz}
    coincidence: window_ns (5), window_factor (1), accidentals (cw|pulsed),
                 rep_rate_mhz (pulsed only)
    rates:      pair_rate_hz, trigger_axis (idler|signal)
    reduce:     input (measured CSV), counting_interval_s (300)
    design:     pump_nm, signal_nm, idler_nm, order (1), triplet (index, 0)
    scan:       center_nm: [...], fwhm_nm: [...]
    output:     dir (out), format (csv|json|both)

Overrides are ``dotted.key=value`` strings; the value is read as YAML, so
``pump.fwhm_nm=6`` gives a float and ``grid.signal_nm=[800, 900]`` a list.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import yaml

from .detection import CoincidenceSpec, DetectorSpec, FilterSpec
from .dispersion import DispersionProvider, load_dispersion_file
from .jsa import GridSpec, TransverseModeModel, overlap_weight
from .phasematching import ModeTriplet, WaveguideSpec
from .pump import PumpSpec

_MISSING = object()


class ConfigError(Exception):
    pass


def apply_override(data: dict, assignment: str) -> None:
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not key=value")
    key, _, raw = assignment.partition("=")
    parts = [p for p in key.strip().split(".") if p]
    if not parts:
        raise ConfigError(f"override {assignment!r} has an empty key")
    try:
        value = yaml.safe_load(raw) if raw.strip() else None
    except yaml.YAMLError as exc:
        raise ConfigError(f"{key}: cannot parse override value: {exc}") from None
    node = data
    for i, part in enumerate(parts[:-1]):
        nxt = node.get(part)
        if nxt is None:
            nxt = node[part] = {}
        if not isinstance(nxt, dict):
            raise ConfigError(f"{'.'.join(parts[:i + 1])}: is not a section")
        node = nxt
    node[parts[-1]] = value


@dataclass
class RunConfig:
    data: dict
    base_dir: Path

    @classmethod
    def load(cls, path, overrides=()) -> "RunConfig":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise OSError(f"cannot read config {path}: {exc.strerror}") from None
        return cls.from_text(text, path.parent, overrides)

    @classmethod
    def from_text(cls, text: str, base_dir=".", overrides=()) -> "RunConfig":
        try:
            data = yaml.safe_load(text) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"YAML syntax error: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config root must be a mapping")
        for item in overrides:
            apply_override(data, item)
        return cls(data, Path(base_dir))

    # --- raw access -------------------------------------------------------

    def get(self, key: str, default=_MISSING):
        node = self.data
        for i, part in enumerate(key.split(".")):
            if not isinstance(node, dict) or part not in node or node[part] is None:
                if default is _MISSING:
                    raise ConfigError(f"{key}: missing")
                return default
            node = node[part]
        return node

    def number(self, key: str, default=_MISSING, positive=False, integer=False):
        value = self.get(key, default)
        if value is None:
            return None
        if isinstance(value, str):
            # YAML 1.1 reads 1.0e6 (no exponent sign) as a string
            try:
                value = float(value)
            except ValueError:
                pass
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key}: expected a number, got {value!r}")
        if integer and int(value) != value:
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        if positive and not value > 0:
            raise ConfigError(f"{key}: must be positive, got {value!r}")
        return int(value) if integer else float(value)

    def interval(self, key: str) -> tuple[float, float]:
        value = self.get(key)
        if (not isinstance(value, (list, tuple)) or len(value) != 2
                or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
            raise ConfigError(f"{key}: expected [lo, hi], got {value!r}")
        lo, hi = float(value[0]), float(value[1])
        if not 0 < lo < hi:
            raise ConfigError(f"{key}: range must be positive and ordered, got {value!r}")
        return lo, hi

    def number_list(self, key: str) -> list[float]:
        value = self.get(key)
        if not isinstance(value, (list, tuple)) or not value:
            raise ConfigError(f"{key}: expected a non-empty list")
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0 for v in value):
            raise ConfigError(f"{key}: entries must be positive numbers")
        return [float(v) for v in value]

    def path(self, key: str) -> Path:
        value = self.get(key)
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a file path")
        p = Path(value)
        p = p if p.is_absolute() else self.base_dir / p
        if not p.is_file():
            raise ConfigError(f"{key}: file not found: {p}")
        return p

    def _wrap(self, key, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}") from None

    # --- builders ---------------------------------------------------------

    def dispersion(self) -> DispersionProvider:
        return load_dispersion_file(self.path("dispersion"))

    def waveguide(self, provider: DispersionProvider | None = None) -> WaveguideSpec:
        provider = provider or self.dispersion()
        return self._wrap(
            "waveguide", WaveguideSpec,
            length=self.number("waveguide.length_mm", positive=True) * 1e-3,
            qpm_period=self.number("waveguide.qpm_period_um", positive=True) * 1e-6,
            dispersion=provider,
            qpm_order=self.number("waveguide.qpm_order", 1, positive=True, integer=True),
        )

    def pump(self) -> PumpSpec:
        return self._wrap(
            "pump", PumpSpec,
            self.number("pump.center_nm", positive=True) * 1e-3,
            self.number("pump.fwhm_nm", positive=True) * 1e-3,
            str(self.get("pump.shape", "gaussian")),
        )

    def triplets(self, provider: DispersionProvider) -> list[ModeTriplet]:
        items = self.get("triplets")
        if not isinstance(items, list) or not items:
            raise ConfigError("triplets: expected a non-empty list")
        out = []
        for k, item in enumerate(items):
            key = f"triplets[{k}]"
            if not isinstance(item, dict):
                raise ConfigError(f"{key}: expected a mapping")
            try:
                labels = [str(item[name]) for name in ("pump", "signal", "idler")]
            except KeyError as exc:
                raise ConfigError(f"{key}.{exc.args[0]}: missing") from None
            for name, label in zip(("pump", "signal", "idler"), labels):
                if label not in provider.models:
                    raise ConfigError(f"{key}.{name}: mode {label!r} not in dispersion file")
            if item.get("weight") is not None:
                weight = _complex(item["weight"], f"{key}.weight")
            else:
                coupling = _complex(item.get("coupling", 1.0), f"{key}.coupling")
                width = self.number("waveguide.core.width_um", positive=True)
                depth = self.number("waveguide.core.depth_um", positive=True)
                try:
                    modes = [TransverseModeModel(label, width, depth) for label in labels]
                except ValueError as exc:
                    raise ConfigError(f"{key}: {exc}") from None
                weight = overlap_weight(*modes, pump_coupling=coupling)
            out.append(ModeTriplet(*labels, weight=weight))
        return out

    def grid(self, section: str = "grid") -> GridSpec:
        return self._wrap(
            section, GridSpec.from_wavelengths_nm,
            self.interval(f"{section}.signal_nm"),
            self.number(f"{section}.n_signal", integer=True),
            self.interval(f"{section}.idler_nm"),
            self.number(f"{section}.n_idler", integer=True),
        )

    def filters(self) -> FilterSpec:
        return self._wrap(
            "filters", FilterSpec,
            trigger_center_nm=self.number("filters.trigger_center_nm", positive=True),
            trigger_fwhm_nm=self.number("filters.trigger_fwhm_nm", 6.0, positive=True),
            trigger_shape=str(self.get("filters.trigger_shape", "gaussian")),
            signal_cutoff_nm=self.number("filters.signal_cutoff_nm", 0.0),
            trigger_transmission=self.number("filters.trigger_transmission", 1.0),
            signal_transmission=self.number("filters.signal_transmission", 1.0),
        )

    def detector(self, arm: str) -> DetectorSpec:
        return self._wrap(
            f"detectors.{arm}", DetectorSpec,
            efficiency=self.number(f"detectors.{arm}.efficiency", 1.0),
            dark_rate=self.number(f"detectors.{arm}.dark_hz", 0.0),
        )

    def coincidence(self) -> CoincidenceSpec:
        rep = self.number("coincidence.rep_rate_mhz", None, positive=True)
        return self._wrap(
            "coincidence", CoincidenceSpec,
            pulse_width_s=self.number("coincidence.window_ns", 5.0) * 1e-9,
            window_factor=self.number("coincidence.window_factor", 1.0),
            model=str(self.get("coincidence.accidentals", "cw")),
            rep_rate_hz=None if rep is None else rep * 1e6,
        )

    def output_format(self) -> str:
        fmt = str(self.get("output.format", "both"))
        if fmt not in ("csv", "json", "both"):
            raise ConfigError(f"output.format: expected csv, json or both, got {fmt!r}")
        return fmt


def _complex(value, key) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
            raise ConfigError(f"{key}: expected a number or [re, im]")
        value = complex(value[0], value[1])
    if isinstance(value, bool) or not isinstance(value, (int, float, complex)):
        raise ConfigError(f"{key}: expected a number or [re, im]")
    return complex(value)
