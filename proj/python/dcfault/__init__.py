"""Single-ended fault location on an isolated HVdc line segment."""

from ._dcfault import (
    AttenuationFit,
    BreakerTimeline,
    CalibrationResult,
    CurrentProbe,
    DcfaultError,
    DischargeTrace,
    DistanceModel,
    DistanceModelKind,
    FaultScenario,
    LadderOptions,
    LineParameters,
    LocateOptions,
    LocationEstimate,
    PeakOptions,
    PeakSeries,
    SpectralEstimate,
    add_noise,
    calibrate,
    closed_form_discharge,
    damping_compensated_frequency,
    dominant_frequency,
    extract_envelope_peaks,
    fault_distance,
    fit_attenuation,
    load_trace,
    locate,
    location_error,
    resonance_frequency,
    save_trace,
    simulate_discharge,
)

__all__ = [
    "AttenuationFit",
    "BreakerTimeline",
    "CalibrationResult",
    "CurrentProbe",
    "DcfaultError",
    "DischargeTrace",
    "DistanceModel",
    "DistanceModelKind",
    "FaultScenario",
    "LadderOptions",
    "LineParameters",
    "LocateOptions",
    "LocationEstimate",
    "PeakOptions",
    "PeakSeries",
    "SpectralEstimate",
    "add_noise",
    "calibrate",
    "closed_form_discharge",
    "damping_compensated_frequency",
    "dominant_frequency",
    "extract_envelope_peaks",
    "fault_distance",
    "fit_attenuation",
    "load_trace",
    "locate",
    "location_error",
    "resonance_frequency",
    "save_trace",
    "simulate_discharge",
]
