"""Short-time (golden-rule) emission dynamics.

The time-dependent decay rate of an emitter at omega_e in a discrete mode
measure is the sinc-wavelet transform of the measure,

    rate(t) = 2 t sum_k w_k sinc((omega_k - omega_e) t),

and the perturbative survival probability is 1 minus its running integral,
which is available in closed form per mode.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .spectrum import SpectralMeasure

# Below the breakdown threshold the perturbative survival is unreliable.
PERTURBATIVE_BREAKDOWN = 0.9

_SINC_SMALL = 1e-4


def _sinc(x: np.ndarray) -> np.ndarray:
    """sin(x)/x with a series branch near zero (sinc(0) = 1)."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SINC_SMALL
    safe = np.where(small, 1.0, x)
    out = np.sin(safe) / safe
    x2 = x * x
    return np.where(small, 1.0 - x2 / 6.0 + x2 * x2 / 120.0, out)


@dataclass(frozen=True)
class EmitterConfig:
    """Transition frequency plus a global scale on all coupling weights."""

    omega_e: float
    coupling_scale: float = 1.0

    def __post_init__(self):
        if self.coupling_scale < 0:
            raise ValueError("coupling_scale must be nonnegative")


@dataclass(frozen=True)
class RateTrace:
    """Decay rate samples and their running integral on a time grid."""

    times: np.ndarray
    rate: np.ndarray
    cumulative: np.ndarray

    def __post_init__(self):
        for name in ("times", "rate", "cumulative"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.times.shape == self.rate.shape == self.cumulative.shape):
            raise ValueError("times, rate and cumulative must have equal shapes")


def gamma_of_t(
    measure: SpectralMeasure,
    emitter: EmitterConfig,
    times: np.ndarray,
    chunk: int = 256,
) -> RateTrace:
    """Evaluate the rate and its exact running integral on a time grid.

    Direct O(modes x times) summation; the cumulative integral uses the
    closed form sum_k w_k t^2 sinc^2(delta_k t / 2), which is exact and
    cancellation-free. An empty measure yields a zero trace.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1:
        raise ValueError("times must be a 1-d array")
    if t.size and (np.any(t <= 0) or np.any(np.diff(t) <= 0)):
        raise ValueError("times must be positive and strictly ascending")
    delta = measure.frequencies - emitter.omega_e
    wts = measure.weights * emitter.coupling_scale
    rate = np.zeros_like(t)
    cum = np.zeros_like(t)
    # Chunk over times to bound the (chunk x modes) temporary.
    for lo in range(0, t.size, chunk):
        tt = t[lo : lo + chunk, None]
        phase = delta[None, :] * tt
        rate[lo : lo + chunk] = 2.0 * tt[:, 0] * (_sinc(phase) @ wts)
        half = _sinc(0.5 * phase)
        cum[lo : lo + chunk] = tt[:, 0] ** 2 * ((half * half) @ wts)
    return RateTrace(times=t, rate=rate, cumulative=cum)


class SurvivalResult(NamedTuple):
    """Perturbative survival probabilities with a validity mask."""

    survival: np.ndarray
    valid: np.ndarray


def survival_short_time(trace: RateTrace) -> SurvivalResult:
    """Perturbative survival 1 - integral of the rate.

    Values are reported raw (they may go negative deep in the breakdown
    regime); the mask is False once the estimate drops below the
    documented breakdown threshold.
    """
    survival = 1.0 - trace.cumulative
    return SurvivalResult(survival=survival, valid=survival >= PERTURBATIVE_BREAKDOWN)


def wavelet_transform(
    x: np.ndarray,
    samples: np.ndarray,
    kernel: Callable[[np.ndarray], np.ndarray],
    scale: float,
    center: float = 0.0,
) -> float:
    """S_w(a, b) = (1/a) integral s(x) w((x - b)/a) dx over the sample support.

    Trapezoid quadrature on the provided grid; the caller controls the
    resolution and the support truncation.
    """
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    x = np.asarray(x, dtype=float)
    s = np.asarray(samples, dtype=float)
    if x.ndim != 1 or x.shape != s.shape:
        raise ValueError("x and samples must be 1-d arrays of equal shape")
    values = s * kernel((x - center) / scale)
    return float(np.trapezoid(values, x) / scale)


def sinc_kernel(x: np.ndarray) -> np.ndarray:
    """The sinc probe used by the rate-as-wavelet identity."""
    return _sinc(x)
