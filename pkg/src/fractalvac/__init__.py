"""Spontaneous emission from a vacuum with a fractal mode spectrum.

Subpackages: spectrum (fractal measures and trace-map constants),
response (golden-rule rate as a wavelet transform), toy_model (analytic
log-periodic model: response function, Laplace transform, pole ladder),
dynamics (exact diagonalization and the Volterra memory-kernel solver),
analysis (exponent and log-period extraction), cli (file-based front end).
"""

from .analysis import (
    LogPeriodResult,
    ScalingFit,
    extract_envelope,
    extract_log_period,
    fit_power_law,
    scaling_collapse_residual,
    wigner_weisskopf_reference,
)
from .dynamics import (
    AmplitudeTrace,
    DiscreteEmitterModel,
    ExpSumKernel,
    PowerSumKernel,
    ZeroKernel,
    build_kernel_from_measure,
    exact_diagonalization_amplitude,
    exponential_kernel,
    exponential_kernel_amplitude,
    volterra_solve,
)
from .response import (
    EmitterConfig,
    RateTrace,
    SurvivalResult,
    gamma_of_t,
    sinc_kernel,
    survival_short_time,
    wavelet_transform,
)
from .spectrum import (
    CantorMeasureSpec,
    FibonacciWord,
    SpectralMeasure,
    TightBindingChain,
    TraceMapParams,
    cantor_measure,
    fibonacci_word,
    fixed_point_frequency,
    integrated_measure,
    tb_spectrum,
    trace_map_params,
)
from .toy_model import (
    PoleSet,
    PoleSumAmplitude,
    ToyModelParams,
    amplitude_branchcut_a0,
    amplitude_pole_sum,
    find_poles,
    gamma_spectral,
    memory_kernel,
    phi_laplace,
    phi_of_t,
    pole_equation,
    pole_seeds,
)

__version__ = "0.1.0"

__all__ = [
    "AmplitudeTrace",
    "CantorMeasureSpec",
    "DiscreteEmitterModel",
    "EmitterConfig",
    "ExpSumKernel",
    "FibonacciWord",
    "LogPeriodResult",
    "PoleSet",
    "PoleSumAmplitude",
    "PowerSumKernel",
    "RateTrace",
    "ScalingFit",
    "SpectralMeasure",
    "SurvivalResult",
    "TightBindingChain",
    "ToyModelParams",
    "TraceMapParams",
    "ZeroKernel",
    "amplitude_branchcut_a0",
    "amplitude_pole_sum",
    "build_kernel_from_measure",
    "cantor_measure",
    "exact_diagonalization_amplitude",
    "exponential_kernel",
    "exponential_kernel_amplitude",
    "extract_envelope",
    "extract_log_period",
    "fibonacci_word",
    "find_poles",
    "fit_power_law",
    "fixed_point_frequency",
    "gamma_of_t",
    "gamma_spectral",
    "integrated_measure",
    "memory_kernel",
    "phi_laplace",
    "phi_of_t",
    "pole_equation",
    "pole_seeds",
    "scaling_collapse_residual",
    "sinc_kernel",
    "survival_short_time",
    "tb_spectrum",
    "trace_map_params",
    "volterra_solve",
    "wavelet_transform",
    "wigner_weisskopf_reference",
]
