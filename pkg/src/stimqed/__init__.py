"""Outcome statistics of stimulated emission in a 1D waveguide.

A single excited emitter (two-level atom, bosonic cavity, or a classical
intensity baseline) is hit by a single-photon pulse; the package computes
the joint direction statistics of the two outgoing photons three ways:
exact closed forms, 2D quadrature over the two-photon out-state
amplitudes, and a discretized collision-model time evolution.
"""
from .analytic import (
    MetricRecord,
    argmax_atom_p_rr,
    argmin_atom_p_rl,
    atom_probabilities,
    cavity_probabilities,
    classical_probabilities,
    classical_spectral_probabilities,
    metrics,
    probabilities,
)
from .core import (
    EmitterKind,
    LifetimeCurve,
    Method,
    NegativeLoss,
    NonPositiveAlpha,
    NonPositiveGamma,
    NotConverged,
    OutcomeProbabilities,
    QuadratureNotConverged,
    ResolutionTooCoarse,
    StimqedError,
    SystemParams,
    UnnormalizedPulse,
    params_from_beta,
    validate,
)
from .oracle import (
    DiscretizedState,
    OracleConfig,
    convergence_report,
    evolve,
    evolve_dense,
    single_photon_check,
)
from .outstate import (
    Sector,
    TwoPhotonAmplitude,
    amplitude_grid,
    phi_ee,
    phi_eo,
    reconstruct_p_rl,
    reconstruct_p_rr_ll,
    reconstruct_probabilities,
)
from .pulses import (
    Pulse,
    PulseShape,
    custom,
    evaluate,
    exponential,
    exponential_f_closed,
    half_gaussian,
    half_gaussian_f_closed,
    overlap_f,
    pulse_support,
    pulse_width,
    spontaneous_wavefunction,
    time_bin_amplitudes,
)

__version__ = "1.0.0"

__all__ = [
    "EmitterKind",
    "Method",
    "SystemParams",
    "OutcomeProbabilities",
    "LifetimeCurve",
    "StimqedError",
    "NonPositiveGamma",
    "NegativeLoss",
    "NonPositiveAlpha",
    "UnnormalizedPulse",
    "QuadratureNotConverged",
    "NotConverged",
    "ResolutionTooCoarse",
    "validate",
    "params_from_beta",
    "Pulse",
    "PulseShape",
    "exponential",
    "half_gaussian",
    "custom",
    "evaluate",
    "spontaneous_wavefunction",
    "overlap_f",
    "exponential_f_closed",
    "half_gaussian_f_closed",
    "pulse_width",
    "pulse_support",
    "time_bin_amplitudes",
    "MetricRecord",
    "atom_probabilities",
    "cavity_probabilities",
    "classical_probabilities",
    "classical_spectral_probabilities",
    "probabilities",
    "metrics",
    "argmax_atom_p_rr",
    "argmin_atom_p_rl",
    "Sector",
    "TwoPhotonAmplitude",
    "phi_ee",
    "phi_eo",
    "amplitude_grid",
    "reconstruct_probabilities",
    "reconstruct_p_rr_ll",
    "reconstruct_p_rl",
    "OracleConfig",
    "DiscretizedState",
    "evolve",
    "evolve_dense",
    "single_photon_check",
    "convergence_report",
    "__version__",
]
