"""Spectral separation, photon counting and coincidence-rate bookkeeping."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .jsa import TripletDecomposition

DEFAULT_WINDOW_S = 5e-9
DEFAULT_COUNTING_INTERVAL_S = 300.0
TRIGGER_SHAPES = ("gaussian", "tophat")
MEASURED_HEADER = ("lambda_nm", "Rs_hz", "Rt_hz", "Rc_hz")


@dataclass(frozen=True)
class FilterSpec:
    trigger_center_nm: float
    trigger_fwhm_nm: float = 6.0
    trigger_shape: str = "gaussian"
    signal_cutoff_nm: float = 0.0
    trigger_transmission: float = 1.0
    signal_transmission: float = 1.0

    def __post_init__(self):
        if not self.trigger_fwhm_nm > 0:
            raise ValueError("trigger FWHM must be positive")
        if self.trigger_shape not in TRIGGER_SHAPES:
            raise ValueError(f"unknown trigger shape {self.trigger_shape!r}")
        for name in ("trigger_transmission", "signal_transmission"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


@dataclass(frozen=True)
class DetectorSpec:
    efficiency: float = 1.0
    dark_rate: float = 0.0  # Hz

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError("detector efficiency must lie in [0, 1]")
        if self.dark_rate < 0:
            raise ValueError("dark rate must be non-negative")


@dataclass(frozen=True)
class CoincidenceSpec:
    """Coincidence logic.

    ``window_factor`` scales the pulse width into the effective AND-gate window
    (anything between 0 and 2). With ``model="pulsed"`` accidentals are counted
    per pump pulse, R_s R_t / rep_rate, and the window drops out.
    """

    pulse_width_s: float = DEFAULT_WINDOW_S
    window_factor: float = 1.0
    model: str = "cw"
    rep_rate_hz: float | None = None

    def __post_init__(self):
        if self.pulse_width_s < 0 or not 0 <= self.window_factor <= 2:
            raise ValueError("need pulse_width_s >= 0 and window_factor in [0, 2]")
        if self.model not in ("cw", "pulsed"):
            raise ValueError(f"unknown accidentals model {self.model!r}")
        if self.model == "pulsed" and not (self.rep_rate_hz and self.rep_rate_hz > 0):
            raise ValueError("pulsed accidentals need a positive rep_rate_hz")

    @property
    def window_s(self) -> float:
        return self.pulse_width_s * self.window_factor

    def accidentals(self, rate_s: float, rate_t: float) -> float:
        if self.model == "pulsed":
            return rate_s * rate_t / self.rep_rate_hz
        return accidental_rate(rate_s, rate_t, self.window_s)


@dataclass(frozen=True)
class RateReport:
    R_s: float
    R_t: float
    R_c: float
    R_acc: float
    lambda_nm: float | None = None
    # Poisson/binomial standard errors, only for measured rows
    sigma_R_s: float | None = None
    sigma_R_t: float | None = None
    sigma_R_c: float | None = None
    sigma_ratio: float | None = None

    def __post_init__(self):
        for name in ("R_s", "R_t", "R_c", "R_acc"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")

    def _need_trigger(self):
        if self.R_t <= 0:
            raise ZeroDivisionError("R_t = 0: heralding ratio undefined")

    @property
    def ratio_raw(self) -> float:
        self._need_trigger()
        return self.R_c / self.R_t

    @property
    def ratio_corrected(self) -> float:
        self._need_trigger()
        return (self.R_c - self.R_acc) / self.R_t

    def as_dict(self) -> dict:
        out = {"lambda_nm": self.lambda_nm, "R_s": self.R_s, "R_t": self.R_t, "R_c": self.R_c,
               "R_acc": self.R_acc, "ratio_raw": self.ratio_raw,
               "ratio_corrected": self.ratio_corrected}
        if self.sigma_ratio is not None:
            out.update(sigma_R_s=self.sigma_R_s, sigma_R_t=self.sigma_R_t,
                       sigma_R_c=self.sigma_R_c, sigma_ratio=self.sigma_ratio)
        return out


def filter_transmission_trigger(f: FilterSpec, wavelength_nm):
    d = np.asarray(wavelength_nm, dtype=float) - f.trigger_center_nm
    if f.trigger_shape == "gaussian":
        shape = np.exp(-4.0 * np.log(2.0) * (d / f.trigger_fwhm_nm) ** 2)
    else:
        shape = (np.abs(d) <= 0.5 * f.trigger_fwhm_nm).astype(float)
    t = f.trigger_transmission * shape
    return float(t) if t.ndim == 0 else t


def filter_transmission_signal(f: FilterSpec, wavelength_nm):
    """Ideal knife edge: blocks everything shorter than the cutoff."""
    lam = np.asarray(wavelength_nm, dtype=float)
    t = np.where(lam >= f.signal_cutoff_nm, f.signal_transmission, 0.0)
    return float(t) if t.ndim == 0 else t


def accidental_rate(rate_s: float, rate_t: float, window_s: float) -> float:
    if min(rate_s, rate_t, window_s) < 0:
        raise ValueError("rates and window must be non-negative")
    return rate_s * rate_t * window_s


def predict_rates(
    dec: TripletDecomposition,
    pair_rate: float,
    f: FilterSpec,
    det_t: DetectorSpec,
    det_s: DetectorSpec,
    coincidence: CoincidenceSpec | float = DEFAULT_WINDOW_S,
    trigger_axis: str = "idler",
) -> RateReport:
    """Singles and coincidence rates from the total JSI.

    The JSI is normalized to a probability density and the filter responses
    are averaged over it. ``trigger_axis`` says which grid axis feeds the
    fiber-tip (trigger) arm; the other axis goes to the signal arm.
    """
    if not pair_rate > 0:
        raise ValueError("pair_rate must be positive")
    if not isinstance(coincidence, CoincidenceSpec):
        coincidence = CoincidenceSpec(pulse_width_s=float(coincidence))
    grid = dec.total
    mass = float(np.sum(grid.values))
    if not mass > 0:
        raise ValueError("total JSI has zero mass")
    prob = grid.values / mass

    if trigger_axis == "idler":
        lam_trig, lam_sig = grid.lambda_i_nm[None, :], grid.lambda_s_nm[:, None]
    elif trigger_axis == "signal":
        lam_trig, lam_sig = grid.lambda_s_nm[:, None], grid.lambda_i_nm[None, :]
    else:
        raise ValueError("trigger_axis must be 'idler' or 'signal'")

    t_trig = filter_transmission_trigger(f, lam_trig)
    t_sig = filter_transmission_signal(f, lam_sig)
    p_trig = float(np.sum(prob * t_trig))
    p_sig = float(np.sum(prob * t_sig))
    p_both = float(np.sum(prob * (t_trig * t_sig)))

    r_t = pair_rate * p_trig * det_t.efficiency + det_t.dark_rate
    r_s = pair_rate * p_sig * det_s.efficiency + det_s.dark_rate
    r_c = pair_rate * p_both * det_t.efficiency * det_s.efficiency
    return RateReport(r_s, r_t, r_c, coincidence.accidentals(r_s, r_t))


@dataclass(frozen=True)
class MeasuredRow:
    lambda_nm: float
    R_s: float
    R_t: float
    R_c: float


def reduce_measured(
    rows,
    coincidence: CoincidenceSpec | float = DEFAULT_WINDOW_S,
    counting_interval_s: float = DEFAULT_COUNTING_INTERVAL_S,
) -> list[RateReport]:
    """Raw and accidental-corrected heralding ratios for measured rows.

    Standard errors: Poisson on each rate over ``counting_interval_s``; the
    ratio uses a binomial error since coincidences are a subset of triggers.
    """
    if not isinstance(coincidence, CoincidenceSpec):
        coincidence = CoincidenceSpec(pulse_width_s=float(coincidence))
    if not counting_interval_s > 0:
        raise ValueError("counting interval must be positive")
    reports = []
    for row in rows:
        row = row if isinstance(row, MeasuredRow) else MeasuredRow(*row)
        if not row.R_t > 0:
            raise ValueError(f"row at {row.lambda_nm} nm: R_t must be positive")
        if min(row.R_s, row.R_c) < 0:
            raise ValueError(f"row at {row.lambda_nm} nm: negative rate")
        T = counting_interval_s
        ratio = row.R_c / row.R_t
        reports.append(RateReport(
            row.R_s, row.R_t, row.R_c, coincidence.accidentals(row.R_s, row.R_t),
            lambda_nm=row.lambda_nm,
            sigma_R_s=np.sqrt(row.R_s * T) / T,
            sigma_R_t=np.sqrt(row.R_t * T) / T,
            sigma_R_c=np.sqrt(row.R_c * T) / T,
            sigma_ratio=float(np.sqrt(max(ratio * (1 - ratio), 0.0) / (row.R_t * T))),
        ))
    return reports


def read_measured_csv(text: str) -> list[MeasuredRow]:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and not r[0].lstrip().startswith("#")]
    if not rows or tuple(c.strip() for c in rows[0]) != MEASURED_HEADER:
        raise ValueError(f"measured CSV must start with header {','.join(MEASURED_HEADER)}")
    out = []
    for lineno, r in enumerate(rows[1:], start=1):
        if len(r) != 4:
            raise ValueError(f"measured CSV data row {lineno}: expected 4 columns, got {len(r)}")
        try:
            out.append(MeasuredRow(*(float(c) for c in r)))
        except ValueError:
            raise ValueError(f"measured CSV data row {lineno}: non-numeric field") from None
    return out
