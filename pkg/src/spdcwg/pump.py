"""Pump spectral envelope."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import C_LIGHT

SHAPES = ("gaussian",)
_LN2 = np.log(2.0)


def bandwidth_to_omega(center_um: float, fwhm_um: float) -> float:
    """First-order conversion of a wavelength FWHM to angular frequency: 2 pi c dl / l0^2."""
    if not center_um > 0 or fwhm_um < 0 or fwhm_um >= center_um:
        raise ValueError("need center_um > fwhm_um >= 0")
    return 2.0 * np.pi * C_LIGHT * (fwhm_um * 1e-6) / (center_um * 1e-6) ** 2


@dataclass(frozen=True)
class PumpSpec:
    """Transform-limited pump; ``fwhm_um`` is the FWHM of the power spectrum |alpha|^2."""

    center_um: float
    fwhm_um: float
    shape: str = "gaussian"

    def __post_init__(self):
        if not self.center_um > 0:
            raise ValueError("pump center wavelength must be positive")
        if not 0 < self.fwhm_um < self.center_um:
            raise ValueError("pump FWHM must lie in (0, center)")
        if self.shape not in SHAPES:
            raise ValueError(f"unsupported pump shape {self.shape!r}")

    @property
    def omega0(self) -> float:
        return 2.0 * np.pi * C_LIGHT / (self.center_um * 1e-6)

    @property
    def delta_omega(self) -> float:
        return bandwidth_to_omega(self.center_um, self.fwhm_um)

    @property
    def amplitude_sigma(self) -> float:
        """Standard-deviation parameter of the Gaussian amplitude, alpha ~ exp(-d^2 / 2 sigma^2)."""
        return self.delta_omega / (2.0 * np.sqrt(_LN2))

    @property
    def peak(self) -> float:
        return (4.0 * _LN2 / np.pi) ** 0.25 / np.sqrt(self.delta_omega)


def envelope(p: PumpSpec, omega):
    """Pump amplitude alpha(omega), L2-normalized over omega (units s^1/2)."""
    d = np.asarray(omega, dtype=float) - p.omega0
    alpha = p.peak * np.exp(-2.0 * _LN2 * (d / p.delta_omega) ** 2)
    return float(alpha) if alpha.ndim == 0 else alpha
