"""Power spectral densities of NRZ pulse trains with non-uniform symbol durations."""

from ._core import (
    BlankLaw,
    DetectionFailure,
    EmptyInput,
    EvaluationError,
    GridMismatch,
    InsufficientData,
    InvalidParameter,
    Spectrum,
    TrainParams,
    Variant,
    analytic_reference,
    bin_power,
    compare,
    continuous_psd,
    discrete_lines,
    estimate_psd,
    fft_bins,
    find_clock_peak,
    gen_bits,
    interval_stats,
    measure_intervals,
    normalize_second_lobe,
    periodogram,
    psd_blank_shorten,
    sweep_delta,
    synthesize,
    theta1,
    theta2,
    theta_blank,
    uniform_grid,
)

__version__ = "0.1.0"
