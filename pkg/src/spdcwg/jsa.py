"""Joint spectral amplitudes per mode triplet, intensities, marginals and overlap weights."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dispersion import DispersionRangeError, omega_to_um, um_to_omega
from .phasematching import ModeTriplet, WaveguideSpec, phase_mismatch, pm_function
from .pump import PumpSpec, envelope

# Rows per evaluation block. Blocks are the unit of parallel work, so the
# arithmetic is identical for any worker count.
BLOCK_ROWS = 32

# Composite Gauss-Legendre for the transverse overlap: panels x nodes per axis.
QUAD_PANELS = 8
QUAD_NODES = 16


@dataclass(frozen=True)
class GridSpec:
    """Uniform (omega_s, omega_i) sampling, bounds in rad/s."""

    omega_s_min: float
    omega_s_max: float
    n_s: int
    omega_i_min: float
    omega_i_max: float
    n_i: int

    def __post_init__(self):
        if self.n_s < 2 or self.n_i < 2:
            raise ValueError("grid needs at least 2 samples per axis")
        if not (0 < self.omega_s_min < self.omega_s_max and 0 < self.omega_i_min < self.omega_i_max):
            raise ValueError("grid bounds must be positive and ordered")

    @classmethod
    def from_wavelengths_nm(cls, signal_nm, n_s, idler_nm, n_i) -> "GridSpec":
        """Build from wavelength windows (lo, hi) in nm; the axes stay uniform in omega."""
        ws = um_to_omega(np.array(sorted(signal_nm), dtype=float) * 1e-3)
        wi = um_to_omega(np.array(sorted(idler_nm), dtype=float) * 1e-3)
        return cls(float(ws.min()), float(ws.max()), int(n_s), float(wi.min()), float(wi.max()), int(n_i))

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.linspace(self.omega_s_min, self.omega_s_max, self.n_s),
            np.linspace(self.omega_i_min, self.omega_i_max, self.n_i),
        )

    def refined(self, factor: int = 2) -> "GridSpec":
        return GridSpec(
            self.omega_s_min, self.omega_s_max, (self.n_s - 1) * factor + 1,
            self.omega_i_min, self.omega_i_max, (self.n_i - 1) * factor + 1,
        )


@dataclass
class SpectralGrid:
    omega_s: np.ndarray
    omega_i: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        self.omega_s = np.asarray(self.omega_s, dtype=float)
        self.omega_i = np.asarray(self.omega_i, dtype=float)
        self.values = np.asarray(self.values)
        if self.values.shape != (self.omega_s.size, self.omega_i.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes "
                f"({self.omega_s.size}, {self.omega_i.size})"
            )
        for name, axis in (("omega_s", self.omega_s), ("omega_i", self.omega_i)):
            _check_uniform(name, axis)

    @property
    def d_omega_s(self) -> float:
        return float(self.omega_s[1] - self.omega_s[0]) if self.omega_s.size > 1 else 0.0

    @property
    def d_omega_i(self) -> float:
        return float(self.omega_i[1] - self.omega_i[0]) if self.omega_i.size > 1 else 0.0

    @property
    def lambda_s_nm(self) -> np.ndarray:
        return omega_to_um(self.omega_s) * 1e3

    @property
    def lambda_i_nm(self) -> np.ndarray:
        return omega_to_um(self.omega_i) * 1e3

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def mass(self) -> float:
        """Trapezoid-rule integral of the values over the grid."""
        w_s, w_i = trapezoid_weights(self.omega_s.size), trapezoid_weights(self.omega_i.size)
        return float(w_s @ self.values @ w_i) * self.d_omega_s * self.d_omega_i


def trapezoid_weights(n: int) -> np.ndarray:
    w = np.ones(n)
    if n > 1:
        w[[0, -1]] = 0.5
    return w


def _check_uniform(name, axis):
    if axis.size < 2:
        return
    steps = np.diff(axis)
    if np.any(steps <= 0):
        raise ValueError(f"{name} axis must be strictly increasing")
    mean = (axis[-1] - axis[0]) / (axis.size - 1)
    # linspace rounding leaves ~1 ulp of the endpoint magnitude per step
    slack = max(1e-12 * mean, 8 * np.spacing(abs(axis[-1])))
    if np.max(np.abs(steps - mean)) > slack:
        raise ValueError(f"{name} axis is not uniformly spaced")


@dataclass(frozen=True)
class TransverseModeModel:
    """Sinusoidal mode of a rectangular core [0, W] x [0, D] (um) with hard walls.

    Label ``"pq"`` (or ``"p,q"``) gives u = 2/sqrt(WD) sin((p+1) pi x/W) sin((q+1) pi y/D).
    """

    mode_label: str
    width_um: float
    depth_um: float

    def __post_init__(self):
        if not (self.width_um > 0 and self.depth_um > 0):
            raise ValueError("core dimensions must be positive")
        self.orders  # validates the label

    @property
    def orders(self) -> tuple[int, int]:
        label = self.mode_label.strip()
        parts = label.split(",") if "," in label else list(label)
        if len(parts) != 2 or not all(p.strip().isdigit() for p in parts):
            raise ValueError(f"cannot read transverse orders from mode label {self.mode_label!r}")
        return int(parts[0]), int(parts[1])

    @property
    def geometry(self) -> tuple[float, float]:
        return (self.width_um, self.depth_um)

    def profile_x(self, x):
        p, _ = self.orders
        return np.sqrt(2.0 / self.width_um) * np.sin((p + 1) * np.pi * np.asarray(x) / self.width_um)

    def profile_y(self, y):
        _, q = self.orders
        return np.sqrt(2.0 / self.depth_um) * np.sin((q + 1) * np.pi * np.asarray(y) / self.depth_um)

    def __call__(self, x, y):
        return self.profile_x(x) * self.profile_y(y)


def _composite_gauss(lo, hi, panels=QUAD_PANELS, nodes=QUAD_NODES):
    t, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    wx = (half[:, None] * w[None, :]).ravel()
    return x, wx


def overlap_weight(
    pump: TransverseModeModel,
    signal: TransverseModeModel,
    idler: TransverseModeModel,
    pump_coupling: complex = 1.0,
) -> complex:
    """pump_coupling * integral of u_pump * conj(u_signal) * conj(u_idler) over the core (um^-1).

    The profiles are real and separable, so the 2-D integral is the product of
    two 1-D composite Gauss-Legendre integrals.
    """
    if not (pump.geometry == signal.geometry == idler.geometry):
        raise ValueError("pump, signal and idler profiles must share the core geometry")
    if pump_coupling == 0:
        return 0j
    x, wx = _composite_gauss(0.0, pump.width_um)
    y, wy = _composite_gauss(0.0, pump.depth_um)
    ix = np.sum(wx * pump.profile_x(x) * signal.profile_x(x) * idler.profile_x(x))
    iy = np.sum(wy * pump.profile_y(y) * signal.profile_y(y) * idler.profile_y(y))
    return complex(pump_coupling) * complex(ix * iy)


def _check_grid_range(wg: WaveguideSpec, t: ModeTriplet, ws, wi):
    checks = (
        (t.signal_mode, ws[[0, -1]], lambda k: (ws[[0, -1]][k], wi[0])),
        (t.idler_mode, wi[[0, -1]], lambda k: (ws[0], wi[[0, -1]][k])),
        (t.pump_mode, np.array([ws[0] + wi[0], ws[-1] + wi[-1]]),
         lambda k: (ws[[0, -1]][k], wi[[0, -1]][k])),
    )
    for mode, omegas, point in checks:
        model = wg.dispersion.model(mode)
        lo, hi = model.valid_range
        lam = omega_to_um(omegas)
        for k in range(2):
            if not lo <= lam[k] <= hi:
                w_s, w_i = point(k)
                raise DispersionRangeError(
                    f"triplet {t.label}: mode {mode} needs {lam[k]:.9g} um, outside "
                    f"[{lo}, {hi}], at grid point omega_s={w_s:.17g}, omega_i={w_i:.17g} rad/s"
                )


def _jsa_block(wg, t, p, ws_block, wi):
    S = ws_block[:, None]
    I = wi[None, :]
    dk = phase_mismatch(wg, t, S, I)
    return complex(t.weight) * envelope(p, S + I) * pm_function(dk, wg.length)


def compute_jsa(
    wg: WaveguideSpec,
    t: ModeTriplet,
    p: PumpSpec,
    grid: GridSpec,
    workers: int = 1,
) -> SpectralGrid:
    """f(ws, wi) = weight * alpha(ws + wi) * Phi(ws, wi) on ``grid``."""
    t.check(wg.dispersion)
    ws, wi = grid.axes()
    _check_grid_range(wg, t, ws, wi)
    if t.weight == 0:
        return SpectralGrid(ws, wi, np.zeros((ws.size, wi.size), dtype=complex), t.label)

    starts = range(0, ws.size, BLOCK_ROWS)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda s: _jsa_block(wg, t, p, ws[s:s + BLOCK_ROWS], wi), starts))
    else:
        blocks = [_jsa_block(wg, t, p, ws[s:s + BLOCK_ROWS], wi) for s in starts]
    return SpectralGrid(ws, wi, np.vstack(blocks), t.label)


def jsi(g: SpectralGrid) -> SpectralGrid:
    v = g.values
    values = (v.real**2 + v.imag**2) if np.iscomplexobj(v) else np.asarray(v, dtype=float) ** 2
    return SpectralGrid(g.omega_s, g.omega_i, values, g.label)


def marginals(g: SpectralGrid) -> tuple[np.ndarray, np.ndarray]:
    """Marginal spectra (signal over omega_s, idler over omega_i).

    Each marginal integrates out the other axis with the trapezoid rule, so
    integrating either marginal with the trapezoid rule gives ``g.mass()``.
    """
    if g.is_complex:
        raise ValueError("marginals need a real (intensity) grid")
    signal = g.values @ trapezoid_weights(g.omega_i.size) * g.d_omega_i
    idler = trapezoid_weights(g.omega_s.size) @ g.values * g.d_omega_s
    return signal, idler


@dataclass
class TripletComponent:
    triplet: ModeTriplet
    jsi: SpectralGrid
    mass: float


@dataclass
class TripletDecomposition:
    components: list[TripletComponent]
    total: SpectralGrid
    jsa: list[SpectralGrid] = field(default_factory=list, repr=False)

    @property
    def triplets(self) -> list[ModeTriplet]:
        return [c.triplet for c in self.components]


def decompose(
    wg: WaveguideSpec,
    triplets: list[ModeTriplet],
    p: PumpSpec,
    grid: GridSpec,
    workers: int = 1,
    keep_jsa: bool = False,
) -> TripletDecomposition:
    """Per-triplet JSIs and their incoherent sum.

    Different triplets create photons in different (orthogonal) modes, so they
    add in intensity, never in amplitude.
    """
    if not triplets:
        raise ValueError("need at least one triplet")
    components, amplitudes = [], []
    total = None
    for t in triplets:
        amp = compute_jsa(wg, t, p, grid, workers=workers)
        intensity = jsi(amp)
        components.append(TripletComponent(t, intensity, intensity.mass()))
        total = intensity.values.copy() if total is None else total + intensity.values
        if keep_jsa:
            amplitudes.append(amp)
    ws, wi = grid.axes()
    return TripletDecomposition(components, SpectralGrid(ws, wi, total, "total"), amplitudes)
