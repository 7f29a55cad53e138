"""Quasi-phase-matching mismatch, the sinc phase-matching function and loci."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dispersion import DispersionProvider, omega_to_um, um_to_omega, wavenumber

# Bisection stops once |dk| falls below this (rad/m).
DEFAULT_TOLERANCE = 1e-6
# Number of omega_i samples used to bracket sign changes of dk.
DEFAULT_BRACKET_STEPS = 400
# sinc^2(x) = 1/2 at this x.
SINC2_HALF_MAX = 1.3915573782515103


class NoPhaseMatchingError(ValueError):
    pass


@dataclass(frozen=True)
class WaveguideSpec:
    length: float  # m
    qpm_period: float  # m
    dispersion: DispersionProvider
    qpm_order: int = 1
    mode_labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError("waveguide length must be positive")
        if not self.qpm_period > 0:
            raise ValueError("QPM period must be positive")
        if int(self.qpm_order) != self.qpm_order or self.qpm_order < 1:
            raise ValueError("QPM order must be a positive integer")
        if not self.mode_labels:
            object.__setattr__(self, "mode_labels", tuple(self.dispersion.mode_labels))

    @property
    def grating_wavenumber(self) -> float:
        return 2.0 * np.pi * self.qpm_order / self.qpm_period


@dataclass(frozen=True)
class ModeTriplet:
    pump_mode: str
    signal_mode: str
    idler_mode: str
    weight: complex = 1.0

    @property
    def label(self) -> str:
        return f"{self.pump_mode}-{self.signal_mode}-{self.idler_mode}"

    def with_weight(self, weight: complex) -> "ModeTriplet":
        return ModeTriplet(self.pump_mode, self.signal_mode, self.idler_mode, weight)

    def check(self, provider: DispersionProvider) -> None:
        for mode in (self.pump_mode, self.signal_mode, self.idler_mode):
            provider.model(mode)


def _material_mismatch(provider, t: ModeTriplet, omega_s, omega_i):
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    k_p = wavenumber(provider, t.pump_mode, omega_s + omega_i)
    k_s = wavenumber(provider, t.signal_mode, omega_s)
    k_i = wavenumber(provider, t.idler_mode, omega_i)
    # grouped so that swapping signal and idler is exact
    return k_p - (k_s + k_i)


def phase_mismatch(wg: WaveguideSpec, t: ModeTriplet, omega_s, omega_i):
    """dk = k_p(ws + wi) - k_s(ws) - k_i(wi) - 2 pi M / period, in rad/m."""
    dk = _material_mismatch(wg.dispersion, t, omega_s, omega_i) - wg.grating_wavenumber
    return float(dk) if np.ndim(dk) == 0 else dk


def pm_function(delta_k, length: float):
    """sinc(dk L / 2) * exp(i dk L / 2) for a uniform grating of length L."""
    if not length > 0:
        raise ValueError("length must be positive")
    x = np.asarray(delta_k, dtype=float) * length / 2.0
    safe = np.where(x == 0.0, 1.0, x)
    sinc = np.where(x == 0.0, 1.0, np.sin(safe) / safe)
    phi = sinc * np.exp(1j * x)
    return complex(phi) if phi.ndim == 0 else phi


def qpm_period_for(
    dispersion: DispersionProvider,
    t: ModeTriplet,
    pump_um: float,
    signal_um: float,
    idler_um: float,
    order: int = 1,
) -> float:
    """Poling period (m) that phase-matches the given wavelength triple.

    The pump frequency is taken as ws + wi after checking energy conservation,
    so the result round-trips exactly through :func:`phase_mismatch`.
    """
    lhs = 1.0 / pump_um
    rhs = 1.0 / signal_um + 1.0 / idler_um
    if abs(lhs - rhs) > 1e-9 * lhs:
        raise ValueError(
            f"energy conservation violated: 1/{pump_um} != 1/{signal_um} + 1/{idler_um}"
        )
    if int(order) != order or order < 1:
        raise ValueError("QPM order must be a positive integer")
    omega_s = float(um_to_omega(signal_um))
    omega_i = float(um_to_omega(idler_um))
    denom = float(_material_mismatch(dispersion, t, omega_s, omega_i))
    if not denom > 0:
        raise NoPhaseMatchingError(
            f"k_p - k_s - k_i = {denom:.6g} rad/m; no positive poling period exists"
        )
    return 2.0 * np.pi * order / denom


@dataclass
class LocusResult:
    points: list[tuple[float, float]] = field(default_factory=list)
    omitted: list[float] = field(default_factory=list)  # omega_s samples without a root
    unconverged: list[tuple[float, float]] = field(default_factory=list)

    def as_array(self) -> np.ndarray:
        return np.array(self.points, dtype=float).reshape(-1, 2)


def _bisect(f, a, b, fa, tolerance, max_iter=200):
    best = (abs(fa), a)
    for _ in range(max_iter):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        if abs(fm) < best[0]:
            best = (abs(fm), m)
        if abs(fm) <= tolerance:
            return m, True
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    fb = f(b)
    if abs(fb) < best[0]:
        best = (abs(fb), b)
    return best[1], best[0] <= tolerance


def pm_locus(
    wg: WaveguideSpec,
    t: ModeTriplet,
    omega_s,
    omega_i_bounds: tuple[float, float],
    tolerance: float = DEFAULT_TOLERANCE,
    bracket_steps: int = DEFAULT_BRACKET_STEPS,
) -> LocusResult:
    """Points (ws, wi) where dk = 0, one bisection per bracketed sign change.

    For each ``omega_s`` sample, ``omega_i`` is scanned on ``bracket_steps + 1``
    uniform points between ``omega_i_bounds`` and every sign change is refined by
    bisection. Samples with no sign change land in ``omitted``; roots that hit
    floating-point resolution before reaching ``tolerance`` land in ``unconverged``.
    """
    result = LocusResult()
    omega_s = np.sort(np.atleast_1d(np.asarray(omega_s, dtype=float)))
    if omega_s.size == 0:
        return result
    lo, hi = omega_i_bounds
    scan = np.linspace(lo, hi, bracket_steps + 1)
    for ws in omega_s:
        dk = phase_mismatch(wg, t, np.full_like(scan, ws), scan)
        exact = np.flatnonzero(dk == 0.0)
        flips = np.flatnonzero(np.signbit(dk[:-1]) != np.signbit(dk[1:]))
        roots = [scan[j] for j in exact]
        for j in flips:
            if dk[j] == 0.0 or dk[j + 1] == 0.0:
                continue

            def f(wi, ws=ws):
                return phase_mismatch(wg, t, ws, wi)

            root, ok = _bisect(f, scan[j], scan[j + 1], dk[j], tolerance)
            if ok:
                roots.append(root)
            else:
                result.unconverged.append((float(ws), float(root)))
        if not roots:
            result.omitted.append(float(ws))
        for wi in sorted(roots):
            result.points.append((float(ws), float(wi)))
    return result


def ridge_width_nm(wg: WaveguideSpec, t: ModeTriplet, omega_s: float, omega_i: float) -> float:
    """FWHM of |Phi|^2 across the ridge at a locus point, in the (lambda_s, lambda_i) plane (nm).

    Uses a central-difference gradient of dk with respect to the two wavelengths.
    """
    lam_s = float(omega_to_um(omega_s)) * 1e3
    lam_i = float(omega_to_um(omega_i)) * 1e3
    h = 1e-3  # nm

    def dk_at(ls, li):
        return phase_mismatch(wg, t, float(um_to_omega(ls * 1e-3)), float(um_to_omega(li * 1e-3)))

    gs = (dk_at(lam_s + h, lam_i) - dk_at(lam_s - h, lam_i)) / (2 * h)
    gi = (dk_at(lam_s, lam_i + h) - dk_at(lam_s, lam_i - h)) / (2 * h)
    fwhm_dk = 4.0 * SINC2_HALF_MAX / wg.length
    return fwhm_dk / float(np.hypot(gs, gi))
