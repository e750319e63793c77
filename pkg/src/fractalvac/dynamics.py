"""Non-perturbative amplitude dynamics, valid at all times.

Two independent routes compute the rotating-frame amplitude
u(t) = e^{i omega_e t} U_e(t):

* exact diagonalization of the (N+1)x(N+1) single-excitation Hamiltonian
  (machine-precision ground truth for discrete measures), and
* a product-integration Volterra solver for
  du/dt = -int_0^t K(t-s) u(s) ds,  u(0) = 1,
  where the memory kernel K(t) = e^{i omega_e t} Phi_e(t) may carry a weak
  t^{-alpha} singularity at the origin.

The Volterra scheme integrates the kernel exactly on every step (via its
closed-form repeated antiderivatives) against a piecewise-linear amplitude,
which is the standard second-order product-integration treatment of weakly
singular kernels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .spectrum import SpectralMeasure

UNITARITY_TOL = 1e-9


@dataclass(frozen=True)
class DiscreteEmitterModel:
    """Emitter at omega_e linearly coupled to the modes of a measure.

    Couplings follow the real nonnegative convention V_k = sqrt(weight_k).
    """

    omega_e: float
    measure: SpectralMeasure

    @property
    def couplings(self) -> np.ndarray:
        return np.sqrt(self.measure.weights)

    def hamiltonian(self) -> np.ndarray:
        """Single-excitation matrix [[omega_e, V], [V, diag(omega_k)]]."""
        n = len(self.measure)
        h = np.zeros((n + 1, n + 1))
        h[0, 0] = self.omega_e
        h[0, 1:] = self.couplings
        h[1:, 0] = self.couplings
        h[np.arange(1, n + 1), np.arange(1, n + 1)] = self.measure.frequencies
        return h


@dataclass(frozen=True)
class AmplitudeTrace:
    """Rotating-frame amplitude samples u(t) = e^{i omega_e t} U_e(t)."""

    times: np.ndarray
    values: np.ndarray
    solver: str
    valid: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "times", np.asarray(self.times, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=complex))
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have equal shapes")

    @property
    def magnitudes(self) -> np.ndarray:
        return np.abs(self.values)


def exact_diagonalization_amplitude(
    model: DiscreteEmitterModel, times: np.ndarray
) -> AmplitudeTrace:
    """Spectral amplitude u(t) = e^{i omega_e t} sum_j |<e|psi_j>|^2 e^{-i E_j t}.

    Ground-truth oracle for any discrete measure; overlap weights sum to 1
    by completeness.
    """
    t = np.asarray(times, dtype=float)
    if len(model.measure) == 0:
        return AmplitudeTrace(t, np.ones(t.size, dtype=complex), "exact_diag")
    try:
        energies, vectors = scipy.linalg.eigh(model.hamiltonian())
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError(f"dense eigensolver failed: {exc}") from exc
    overlaps = vectors[0, :] ** 2
    values = np.exp(-1j * np.outer(t, energies - model.omega_e)) @ overlaps.astype(complex)
    return AmplitudeTrace(t, values, "exact_diag")


# --- memory kernels -------------------------------------------------------
#
# The Volterra scheme needs, besides K itself, the repeated antiderivatives
#   Q(x) = int_0^x K,   R(x) = int_0^x Q,   S(x) = int_0^x R,
# all vanishing at 0. Each kernel class provides them in closed form.


class ExpSumKernel:
    """K(t) = sum_j c_j exp(z_j t) with complex rates z_j."""

    def __init__(self, coefficients, rates):
        self.coefficients = np.asarray(coefficients, dtype=complex)
        self.rates = np.asarray(rates, dtype=complex)
        if self.coefficients.shape != self.rates.shape:
            raise ValueError("coefficients and rates must have equal shapes")

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.exp(np.multiply.outer(t, self.rates)) @ self.coefficients

    def _phi(self, order: int, t):
        """sum_j c_j t^order phi_order(z_j t), phi_k(w) = (e^w - sum_{m<k} w^m/m!)/w^k."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        w = np.multiply.outer(t, self.rates)
        return (_phi_k(order, w) @ self.coefficients) * t**order

    def cumulative(self, t):
        return self._phi(1, t)

    def second_antiderivative(self, t):
        return self._phi(2, t)

    def third_antiderivative(self, t):
        return self._phi(3, t)


def _phi_k(k: int, w: np.ndarray) -> np.ndarray:
    """Exponential remainder phi_k(w) = (e^w - sum_{m<k} w^m/m!) / w^k.

    Series branch for small |w| to avoid cancellation; phi_k(0) = 1/k!.
    """
    w = np.asarray(w, dtype=complex)
    small = np.abs(w) < 0.25
    safe = np.where(small, 1.0, w)
    out = np.exp(safe)
    for m in range(k):
        out = out - safe**m / _factorial(m)
    out = out / safe**k
    series = np.zeros_like(w)
    term = np.ones_like(w) / _factorial(k)
    series = series + term
    for m in range(1, 18):
        term = term * w / (k + m)
        series = series + term
    return np.where(small, series, out)


def _factorial(n: int) -> float:
    out = 1.0
    for m in range(2, n + 1):
        out *= m
    return out


class PowerSumKernel:
    """K(t) = sum_j c_j t^{mu_j} with complex exponents, Re mu_j > -1.

    This covers the log-periodic memory kernels: a modulation
    cos((2 pi/lambda) ln t) is a pair of conjugate imaginary powers.
    """

    def __init__(self, coefficients, exponents):
        self.coefficients = np.asarray(coefficients, dtype=complex)
        self.exponents = np.asarray(exponents, dtype=complex)
        if self.coefficients.shape != self.exponents.shape:
            raise ValueError("coefficients and exponents must have equal shapes")
        if np.any(self.exponents.real <= -1):
            raise ValueError("kernel exponents must satisfy Re mu > -1 (integrable at 0)")

    def _powers(self, t, shift: int):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if np.any(t < 0):
            raise ValueError("kernel arguments must be nonnegative")
        mu = self.exponents + shift
        denom = np.ones_like(self.coefficients)
        for m in range(shift):
            denom = denom * (self.exponents + m + 1)
        coeff = self.coefficients if shift == 0 else self.coefficients / denom
        logt = np.log(np.where(t > 0, t, 1.0))
        terms = np.exp(np.multiply.outer(logt, mu))
        terms[t == 0] = 0.0 if shift > 0 else np.nan
        return terms @ coeff

    def __call__(self, t):
        return self._powers(t, 0)

    def cumulative(self, t):
        return self._powers(t, 1)

    def second_antiderivative(self, t):
        return self._powers(t, 2)

    def third_antiderivative(self, t):
        return self._powers(t, 3)


class ZeroKernel:
    """K identically zero (decoupled emitter)."""

    def __call__(self, t):
        return np.zeros_like(np.atleast_1d(np.asarray(t, dtype=float)), dtype=complex)

    cumulative = __call__
    second_antiderivative = __call__
    third_antiderivative = __call__


def exponential_kernel(gamma: float, kappa: float) -> ExpSumKernel:
    """Lorentzian-bath benchmark kernel K(t) = (gamma kappa / 2) e^{-kappa t}."""
    return ExpSumKernel([0.5 * gamma * kappa], [-kappa])


def build_kernel_from_measure(model: DiscreteEmitterModel) -> ExpSumKernel:
    """Memory kernel of a discrete measure in the rotating frame.

    K(t) = sum_k w_k e^{-i(omega_k - omega_e) t}; K(0) equals the total
    weight and |K(t)| <= K(0).
    """
    detunings = model.measure.frequencies - model.omega_e
    return ExpSumKernel(model.measure.weights.astype(complex), -1j * detunings)


def exponential_kernel_amplitude(gamma: float, kappa: float, times) -> np.ndarray:
    """Closed-form amplitude for the exponential kernel.

    Solves u'' + kappa u' + (gamma kappa / 2) u = 0 with u(0) = 1,
    u'(0) = 0; reduces to e^{-gamma t / 2} for kappa >> gamma.
    """
    t = np.asarray(times, dtype=float)
    disc = np.sqrt(complex(kappa**2 - 2.0 * gamma * kappa))
    s_plus = 0.5 * (-kappa + disc)
    s_minus = 0.5 * (-kappa - disc)
    if s_plus == s_minus:  # critically damped
        return (1.0 - s_plus * t) * np.exp(s_plus * t)
    return ((s_plus + kappa) * np.exp(s_plus * t) - (s_minus + kappa) * np.exp(s_minus * t)) / (
        s_plus - s_minus
    )


# --- Volterra product-integration solver ----------------------------------

# Gauss-Legendre nodes/weights (4 points) for the far-from-origin weights.
_GL_NODES = np.array(
    [-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526]
)
_GL_WEIGHTS = np.array(
    [0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538]
)
# Intervals with lower edge closer to the origin than this many widths use
# exact kernel moments (the singular region); farther intervals integrate
# the smooth cumulative kernel by Gauss quadrature, which avoids the
# catastrophic cancellation of differencing grown antiderivatives.
_EXACT_MOMENT_SPAN = 8.0


def _interval_weights(kernel, lower: np.ndarray, upper: np.ndarray):
    """Weights (w0, w1) of u(left node), u(right node) per interval.

    For the convolution int Q(x) * {(x - lower)/h, (upper - x)/h} dx over
    [lower, upper] in the reversed-time variable x = t_n - s, where
    Q(x) = int_0^x K. w0 multiplies the amplitude at the node farther from
    t_n (x = upper), w1 the nearer one (x = lower).
    """
    h = upper - lower
    w0 = np.empty(lower.size, dtype=complex)
    w1 = np.empty(lower.size, dtype=complex)
    exact = lower < _EXACT_MOMENT_SPAN * h
    if np.any(exact):
        lo, hi, width = lower[exact], upper[exact], h[exact]
        r_lo = np.asarray(kernel.second_antiderivative(lo))
        r_hi = np.asarray(kernel.second_antiderivative(hi))
        s_lo = np.asarray(kernel.third_antiderivative(lo))
        s_hi = np.asarray(kernel.third_antiderivative(hi))
        ds = (s_hi - s_lo) / width
        w0[exact] = r_hi - ds
        w1[exact] = ds - r_lo
    smooth = ~exact
    if np.any(smooth):
        lo, hi, width = lower[smooth], upper[smooth], h[smooth]
        mid = 0.5 * (lo + hi)
        half = 0.5 * width
        acc0 = np.zeros(lo.size, dtype=complex)
        acc1 = np.zeros(lo.size, dtype=complex)
        for node, weight in zip(_GL_NODES, _GL_WEIGHTS):
            x = mid + half * node
            q = np.asarray(kernel.cumulative(x))
            acc0 += weight * q * (x - lo)
            acc1 += weight * q * (hi - x)
        w0[smooth] = acc0 * half / width
        w1[smooth] = acc1 * half / width
    return w0, w1


def _volterra_weights_uniform(kernel, h: float, n_steps: int):
    """Convolution weight tables W0_k, W1_k on a uniform grid of step h."""
    edges = h * np.arange(n_steps + 1)
    return _interval_weights(kernel, edges[:-1], edges[1:])


def volterra_solve(kernel, times: np.ndarray) -> AmplitudeTrace:
    """Product-integration solution of du/dt = -(K * u)(t), u(0) = 1.

    Integrating once gives the second-kind equation
        u(t) = 1 - int_0^t Q(t-s) u(s) ds,   Q = int_0^. K,
    which is discretized with u piecewise linear and all kernel moments
    exact, so the weakly singular factor of K is never quadratured.
    Accepts any strictly ascending grid starting at 0; uniform grids use a
    fast convolution path.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ValueError("times must be a 1-d array with at least two entries")
    if t[0] != 0.0:
        raise ValueError("times must start at 0")
    h_all = np.diff(t)
    if np.any(h_all <= 0):
        raise ValueError("times must be strictly ascending")
    n = t.size - 1
    u = np.empty(t.size, dtype=complex)
    u[0] = 1.0

    uniform = np.allclose(h_all, h_all[0], rtol=1e-9, atol=0.0)
    if uniform:
        h = float(h_all[0])
        w0, w1 = _volterra_weights_uniform(kernel, h, n)
        if not np.all(np.isfinite(w0)) or not np.all(np.isfinite(w1)):
            raise RuntimeError("kernel moments are not finite; step size collapse")
        # Contiguous reversed copies so each step's dot avoids a re-copy:
        # w0_rev[n-k:] = [W0_k ... W0_1] pairs u_0..u_{k-1}, and
        # w1_rev[n-k:n-1] = [W1_k ... W1_2] pairs u_1..u_{k-1}; the W1_1
        # term multiplies the unknown u_k and is folded into the division.
        w0_rev = w0[::-1].copy()
        w1_rev = w1[::-1].copy()
        denom = 1.0 + w1[0]
        for k in range(1, n + 1):
            acc = np.dot(u[:k], w0_rev[n - k :])
            if k > 1:
                acc += np.dot(u[1:k], w1_rev[n - k : n - 1])
            u[k] = (1.0 - acc) / denom
        return AmplitudeTrace(t, u, "volterra")

    # General nonuniform grid: rebuild interval weights per step.
    for k in range(1, n + 1):
        upper = t[k] - t[:k]  # x at the far edge of interval m
        lower = t[k] - t[1 : k + 1]  # x at the near edge
        w0, w1 = _interval_weights(kernel, lower, upper)
        acc = np.dot(u[:k], w0) + np.dot(u[1:k], w1[:-1])
        u[k] = (1.0 - acc) / (1.0 + w1[-1])
    return AmplitudeTrace(t, u, "volterra")
