"""Observable extraction from computed traces.

Power-law exponents from log-log least squares, log-periodic modulation
periods from a periodogram over uniform-in-ln-t resampling, discrete
scale-invariance collapse residuals, and the exponential reference decay.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .dynamics import AmplitudeTrace

# Log-log rms residual above this flags a trace as not scale-free.
POWER_LAW_RESIDUAL_MAX = 0.05
# A periodogram peak must exceed this multiple of the noise floor.
PEAK_SNR_MIN = 3.0
# Collapse residuals are measured relative to at least this magnitude.
COLLAPSE_FLOOR = 1e-30
# The probed window must contain at least this many modulation periods.
MIN_PERIODS = 1.5


@dataclass(frozen=True)
class ScalingFit:
    """Fitted decay exponent and log-periodic modulation summary."""

    gamma: float
    log_period: float | None
    modulation: float
    window: tuple[float, float]
    residual: float
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class LogPeriodResult:
    """Dominant log-period estimate from the detrended periodogram."""

    log_period: float
    detected: bool
    snr: float
    modulation: float


def _window_mask(times: np.ndarray, window) -> np.ndarray:
    t_lo, t_hi = window
    if not t_lo < t_hi:
        raise ValueError(f"invalid window {window}")
    return (times >= t_lo) & (times <= t_hi)


def fit_power_law(times, values, window=None) -> ScalingFit:
    """Least-squares slope of ln y vs ln t; gamma = -slope.

    Requires strictly positive samples on the window and at least 20 of
    them. The rms residual of the line flags non-power-law behavior.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if window is None:
        window = (t[0], t[-1])
    mask = _window_mask(t, window)
    t, y = t[mask], y[mask]
    if t.size < 20:
        raise ValueError(f"need at least 20 samples in the fit window, got {t.size}")
    if np.any(y <= 0):
        raise ValueError("power-law fit requires positive samples in the window")
    log_t, log_y = np.log(t), np.log(y)
    slope, intercept = np.polyfit(log_t, log_y, 1)
    resid = log_y - (slope * log_t + intercept)
    rms = float(np.sqrt(np.mean(resid**2)))
    detrended = y * t ** (-slope)
    modulation = float(
        0.5 * (detrended.max() - detrended.min()) / np.mean(detrended)
    )
    flags = () if rms <= POWER_LAW_RESIDUAL_MAX else ("non_power_law",)
    return ScalingFit(
        gamma=float(-slope),
        log_period=None,
        modulation=modulation,
        window=(float(window[0]), float(window[1])),
        residual=rms,
        flags=flags,
    )


def extract_log_period(
    times,
    values,
    detrend_gamma: float,
    window=None,
    n_resample: int = 2048,
    oversample: int = 8,
) -> LogPeriodResult:
    """Locate the dominant period of y t^gamma in u = ln t.

    The detrended series is resampled uniformly in u with a cubic spline,
    a best-fit line in u is removed (tolerating small detrend-exponent
    errors), and the Hann-windowed zero-padded periodogram peak above
    PEAK_SNR_MIN times the median floor gives the period. Periods longer
    than span/MIN_PERIODS are not searched. A missing peak is reported as
    detected=False, not an error.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(values, dtype=float)
    if window is None:
        window = (t[0], t[-1])
    mask = _window_mask(t, window)
    t, y = t[mask], y[mask]
    if t.size < 16:
        raise ValueError(f"need at least 16 samples in the window, got {t.size}")
    if t[-1] / t[0] < 100.0 * (1.0 - 1e-9):
        raise ValueError("log-period extraction needs a window of at least 2 decades")
    detrended = y * t**detrend_gamma
    scale = np.sqrt(np.mean(detrended**2))
    if scale == 0.0:
        return LogPeriodResult(np.nan, False, 0.0, 0.0)
    detrended = detrended / scale
    u = np.log(t)
    uu = np.linspace(u[0], u[-1], n_resample)
    resampled = CubicSpline(u, detrended)(uu)
    mean_level = float(np.mean(resampled))
    modulation = (
        0.5 * (resampled.max() - resampled.min()) / abs(mean_level)
        if mean_level != 0.0
        else np.inf
    )
    line = np.polyval(np.polyfit(uu, resampled, 1), uu)
    signal = (resampled - line) * np.hanning(n_resample)
    padded = np.zeros(n_resample * oversample)
    padded[:n_resample] = signal
    power = np.abs(np.fft.rfft(padded)) ** 2
    du = (uu[-1] - uu[0]) / (n_resample - 1)
    freqs = np.fft.rfftfreq(padded.size, d=du)
    span = uu[-1] - uu[0]
    band = freqs >= MIN_PERIODS / span
    if not np.any(band):
        return LogPeriodResult(np.nan, False, 0.0, modulation)
    band_power = power[band]
    band_freqs = freqs[band]
    floor = float(np.median(band_power))
    k = int(np.argmax(band_power))
    snr = float(band_power[k] / floor) if floor > 0 else np.inf
    if snr < PEAK_SNR_MIN:
        return LogPeriodResult(np.nan, False, snr, modulation)
    # Parabolic refinement of the peak bin in log power.
    nu = band_freqs[k]
    if 0 < k < band_power.size - 1 and band_power[k - 1] > 0 and band_power[k + 1] > 0:
        lm, l0, lp = np.log(band_power[k - 1 : k + 2])
        denom = lm - 2.0 * l0 + lp
        if denom < 0:
            nu = nu + 0.5 * (lm - lp) / denom * (band_freqs[1] - band_freqs[0])
    return LogPeriodResult(float(1.0 / nu), True, snr, modulation)


def extract_envelope(times, values):
    """Local maxima of |values|, the slow envelope of an oscillatory trace.

    Endpoint samples are kept so the envelope spans the full window; a
    trace with fewer than three interior maxima is returned unchanged
    (already its own envelope).
    """
    t = np.asarray(times, dtype=float)
    y = np.abs(np.asarray(values))
    if t.size < 3:
        return t, y
    interior = np.flatnonzero((y[1:-1] >= y[:-2]) & (y[1:-1] > y[2:])) + 1
    if interior.size < 3:
        return t, y
    idx = np.concatenate(([0], interior, [t.size - 1]))
    return t[idx], y[idx]


def scaling_collapse_residual(
    trace: AmplitudeTrace,
    beta: float,
    gamma_exponent: float,
    window=None,
) -> float:
    """max over the window of |u(beta t) - beta^{-gamma} u(t)| / max(|u(t)|, floor).

    Probes the discrete scale invariance u(beta t) = beta^{-gamma} u(t).
    Samples at beta t that land on grid points (1e-9 relative) are used
    directly; otherwise the trace is interpolated linearly in ln t.
    """
    if beta <= 1.0:
        raise ValueError(f"beta must exceed 1, got {beta}")
    t = trace.times
    u = trace.values
    if window is None:
        window = (t[0], t[-1] / beta)
    t_lo, t_hi = window
    if t_lo < t[0] * (1 - 1e-12) or t_hi * beta > t[-1] * (1 + 1e-12):
        raise ValueError(
            f"trace [{t[0]:g}, {t[-1]:g}] does not cover the probe window "
            f"[{t_lo:g}, {t_hi:g}] and its beta-image"
        )
    mask = _window_mask(t, window)
    base_t = t[mask]
    base_u = u[mask]
    target = beta * base_t
    idx = np.searchsorted(t, target)
    idx = np.clip(idx, 1, t.size - 1)
    nearest = np.where(
        np.abs(t[idx - 1] - target) < np.abs(t[idx] - target), idx - 1, idx
    )
    aligned = np.abs(t[nearest] - target) <= 1e-9 * target
    mapped = np.empty(target.size, dtype=complex)
    mapped[aligned] = u[nearest[aligned]]
    if np.any(~aligned):
        log_t = np.log(t)
        log_target = np.log(target[~aligned])
        mapped[~aligned] = np.interp(log_target, log_t, u.real) + 1j * np.interp(
            log_target, log_t, u.imag
        )
    mismatch = np.abs(mapped - beta ** (-gamma_exponent) * base_u)
    return float(np.max(mismatch / np.maximum(np.abs(base_u), COLLAPSE_FLOOR)))


def wigner_weisskopf_reference(rate: float, times) -> np.ndarray:
    """Exponential survival probability e^{-rate t} of a smooth vacuum."""
    if rate < 0:
        raise ValueError(f"decay rate must be nonnegative, got {rate}")
    return np.exp(-rate * np.asarray(times, dtype=float))
