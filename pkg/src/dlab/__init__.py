"""Causal two-mode transfer functions: birefringent slab between polarizers.

The library models the scalar transfer function of a birefringent slab seen
through an input polarizer and an output analyzer, where two-mode
interference produces transmission nulls, anomalous dispersion, and -- for
analyzer angles past 45 degrees -- upper-half-plane zeros that break the
minimum-phase property.  It provides:

- closed-form magnitude, phase, and group delay (:mod:`dlab.slab`);
- complex-plane zeros of the transfer function (:mod:`dlab.slab`);
- truncated Kramers-Kronig transforms and amplitude-to-phase reconstruction
  with all-pass correction (:mod:`dlab.kk`);
- pulse propagation demonstrating that superluminal and negative group
  delays coexist with strict front causality (:mod:`dlab.pulse`);
- the ``dlab`` command-line interface (:mod:`dlab.cli`).
"""

from .errors import (
    BandError,
    BandLeakageWarning,
    BandViolationError,
    ConfigError,
    ConvergenceError,
    DlabError,
    DomainError,
    EndpointProximityError,
    InsufficientDataError,
    MultipleRootWarning,
    SingularTransmissionWarning,
    ZeroTransmissionError,
)
from .kk import (
    KkBand,
    PhaseClass,
    PhaseReconstruction,
    allpass_phase,
    allpass_phase_correction,
    classify_minimum_phase,
    correction_zeros,
    fit_delay_offset,
    kk_im_from_re,
    kk_re_from_im,
    phase_from_magnitude,
)
from .numerics import (
    ComplexSeries,
    FrequencyGrid,
    RealSeries,
    make_grid,
    pv_kernel_integral,
    unwrap_phase,
    unwrap_values,
)
from .pulse import (
    CausalityReport,
    PropagationResult,
    Pulse,
    PulseSpec,
    front_causality_check,
    propagate,
    synth_pulse,
    transit_bound,
)
from .slab import (
    C_VACUUM,
    ComplexZero,
    ConstantIndex,
    HalfPlane,
    LinearIndex,
    LorentzIndex,
    SystemConfig,
    calibrated_config,
    crossed_analyzer,
    group_delay,
    half_waveplate_frequencies,
    mode_phase,
    mode_phase_slope,
    null_expansion,
    retardance,
    retardance_slope,
    transfer_function,
    transfer_phase,
    transfer_zeros,
    transmission,
    zeros_near_band,
)

__version__ = "0.1.0"

__all__ = [
    "BandError",
    "BandLeakageWarning",
    "BandViolationError",
    "C_VACUUM",
    "CausalityReport",
    "ComplexSeries",
    "ComplexZero",
    "ConfigError",
    "ConstantIndex",
    "ConvergenceError",
    "DlabError",
    "DomainError",
    "EndpointProximityError",
    "FrequencyGrid",
    "HalfPlane",
    "InsufficientDataError",
    "KkBand",
    "LinearIndex",
    "LorentzIndex",
    "MultipleRootWarning",
    "PhaseClass",
    "PhaseReconstruction",
    "PropagationResult",
    "Pulse",
    "PulseSpec",
    "RealSeries",
    "SingularTransmissionWarning",
    "SystemConfig",
    "ZeroTransmissionError",
    "allpass_phase",
    "allpass_phase_correction",
    "calibrated_config",
    "classify_minimum_phase",
    "correction_zeros",
    "crossed_analyzer",
    "fit_delay_offset",
    "front_causality_check",
    "group_delay",
    "half_waveplate_frequencies",
    "kk_im_from_re",
    "kk_re_from_im",
    "make_grid",
    "mode_phase",
    "mode_phase_slope",
    "null_expansion",
    "phase_from_magnitude",
    "propagate",
    "pv_kernel_integral",
    "retardance",
    "retardance_slope",
    "synth_pulse",
    "transfer_function",
    "transfer_phase",
    "transfer_zeros",
    "transit_bound",
    "transmission",
    "unwrap_phase",
    "unwrap_values",
    "zeros_near_band",
]
