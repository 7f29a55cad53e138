"""Single-triplet isolation metric and exhaustive pump scans."""

from __future__ import annotations

from dataclasses import dataclass

from .jsa import GridSpec, TripletDecomposition, decompose
from .phasematching import ModeTriplet, WaveguideSpec
from .pump import PumpSpec

# Masses within this relative distance of the dominant one count as a tie.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class IsolationReport:
    labels: tuple[str, ...]
    masses: tuple[float, ...]
    dominant_index: int
    isolation: float
    ties: tuple[int, ...] = ()
    center_nm: float | None = None
    fwhm_nm: float | None = None

    @property
    def dominant_label(self) -> str:
        return self.labels[self.dominant_index]

    @property
    def tie(self) -> bool:
        return bool(self.ties)


def isolation(dec: TripletDecomposition) -> IsolationReport:
    """Fraction of the total pair probability carried by the heaviest triplet.

    Ties go to the earliest triplet in list order; the other tied indices are
    reported in ``ties``.
    """
    masses = tuple(float(c.mass) for c in dec.components)
    total = sum(masses)
    if not total > 0:
        raise ValueError("decomposition has zero total mass")
    best = max(range(len(masses)), key=lambda k: (masses[k], -k))
    top = masses[best]
    ties = tuple(k for k, m in enumerate(masses) if k != best and abs(m - top) <= TIE_RTOL * top)
    return IsolationReport(
        labels=tuple(c.triplet.label for c in dec.components),
        masses=masses,
        dominant_index=best,
        isolation=top / total,
        ties=ties,
    )


def scan_pump(
    wg: WaveguideSpec,
    triplets: list[ModeTriplet],
    base: PumpSpec,
    fwhm_nm: list[float],
    center_nm: list[float],
    grid: GridSpec,
    workers: int = 1,
) -> list[IsolationReport]:
    """Isolation over every (center, fwhm) pair, centers outer, fwhms inner."""
    if not fwhm_nm or not center_nm:
        raise ValueError("scan lists must be non-empty")
    reports = []
    for center in center_nm:
        for fwhm in fwhm_nm:
            pump = PumpSpec(center * 1e-3, fwhm * 1e-3, base.shape)
            rep = isolation(decompose(wg, triplets, pump, grid, workers=workers))
            reports.append(IsolationReport(
                rep.labels, rep.masses, rep.dominant_index, rep.isolation, rep.ties,
                center_nm=float(center), fwhm_nm=float(fwhm),
            ))
    return reports
