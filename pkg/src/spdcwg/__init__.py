"""Photon-pair generation in multimode quasi-phase-matched waveguides."""

from .design import IsolationReport, isolation, scan_pump
from .detection import (
    CoincidenceSpec,
    DetectorSpec,
    FilterSpec,
    RateReport,
    accidental_rate,
    filter_transmission_signal,
    filter_transmission_trigger,
    predict_rates,
    reduce_measured,
)
from .dispersion import (
    C_LIGHT,
    DispersionProvider,
    effective_index,
    load_dispersion_file,
    parse_dispersion_file,
    wavenumber,
)
from .jsa import (
    GridSpec,
    SpectralGrid,
    TransverseModeModel,
    TripletDecomposition,
    compute_jsa,
    decompose,
    jsi,
    marginals,
    overlap_weight,
)
from .phasematching import ModeTriplet, WaveguideSpec, phase_mismatch, pm_function, pm_locus, qpm_period_for
from .pump import PumpSpec, bandwidth_to_omega, envelope

__version__ = "0.1.0"
