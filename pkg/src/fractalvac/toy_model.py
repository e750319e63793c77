"""Analytic log-periodic model of a fractal vacuum spectrum.

The spectral rate function

    gamma(omega) = C / (pi |omega - omega_u|^{1-alpha})
                   * [1 + A cos((2 pi/lambda) ln(|omega - omega_u|/Omega))]

has closed-form response function phi(t), Laplace transform, and a
geometric ladder of resolvent poles s_n whose residue sum gives the
long-time amplitude with exact discrete scale invariance
u(e^lambda t) = e^{-lambda(2-alpha)} u(t).

Conventions: the response function is the plain Fourier integral
phi(t) = int gamma(omega) e^{-i omega t} d omega (no 1/2pi; the coupling
strength C absorbs the normalization), and every complex power z^p uses
the principal branch exp(p Log z). The principal branch is what places the
pole ladder just below the negative imaginary axis, where the closed form
continues the Re z > 0 resolvent smoothly through the lower half-plane.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.special

from .dynamics import AmplitudeTrace, PowerSumKernel

# e^{-2 pi^2 / lambda} below this is treated as a negligible branch cut.
BRANCH_CUT_THRESHOLD = 1e-3
# |s|^{2-alpha}/C below this counts as the asymptotic (deep-pole) regime.
ASYMPTOTIC_RATIO = 0.1
# C (|sin theta0| t)^{2-alpha} above this marks the pole-sum validity regime.
VALIDITY_THRESHOLD = 10.0
# Truncation floor for pole-sum terms, relative to the running dominant term.
TERM_FLOOR = 1e-16


def principal_power(z, exponent):
    """z**exponent on the principal branch, the single branch used everywhere."""
    return np.exp(exponent * np.log(np.asarray(z, dtype=complex)))


@dataclass(frozen=True)
class ToyModelParams:
    """Parameters (C, alpha, A, Omega, lambda, omega_u, omega_e) of the model."""

    coupling: float
    alpha: float
    modulation: float
    omega_ref: float
    log_period: float
    omega_u: float = 0.0
    omega_e: float = 0.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0, 1), got {self.alpha}")
        if not 0.0 <= self.modulation <= 1.0:
            raise ValueError(f"modulation must lie in [0, 1], got {self.modulation}")
        if self.omega_ref <= 0:
            raise ValueError(f"omega_ref must be positive, got {self.omega_ref}")
        if self.log_period <= 0:
            raise ValueError(f"log_period must be positive, got {self.log_period}")
        if self.coupling <= 0:
            raise ValueError(f"coupling must be positive, got {self.coupling}")

    @property
    def delta_omega(self) -> float:
        return self.omega_e - self.omega_u

    @property
    def beta(self) -> float:
        """Frequency of the log-periodic modulation, 2 pi / lambda."""
        return 2.0 * np.pi / self.log_period

    @property
    def csc_half(self) -> float:
        return 1.0 / np.sin(0.5 * np.pi * self.alpha)

    @property
    def theta0(self) -> float:
        """Phase of the pole ladder, (lambda/2 pi) ln(|A| sin(pi alpha/2))."""
        return float(
            self.log_period / (2.0 * np.pi)
            * np.log(abs(self.modulation) * np.sin(0.5 * np.pi * self.alpha))
        )

    @property
    def in_pole_regime(self) -> bool:
        """A large enough for the pole ladder: A > csc(pi alpha/2) e^{-pi^2/lambda}."""
        return self.modulation > self.csc_half * np.exp(-np.pi**2 / self.log_period)

    @property
    def branch_cut_negligible(self) -> bool:
        return np.exp(-2.0 * np.pi**2 / self.log_period) < BRANCH_CUT_THRESHOLD

    def validity_measure(self, times) -> np.ndarray:
        """C (|sin theta0| t)^{2-alpha}, the long-time validity parameter."""
        t = np.asarray(times, dtype=float)
        return self.coupling * (abs(np.sin(self.theta0)) * t) ** (2.0 - self.alpha)


def gamma_spectral(params: ToyModelParams, omega) -> np.ndarray | float:
    """Spectral rate function; nonnegative for A <= 1, singular at omega_u."""
    w = np.asarray(omega, dtype=float)
    nu = np.abs(w - params.omega_u)
    if np.any(nu == 0.0):
        raise ValueError("gamma_spectral is not defined at omega == omega_u")
    out = (
        params.coupling
        / (np.pi * nu ** (1.0 - params.alpha))
        * (1.0 + params.modulation * np.cos(params.beta * np.log(nu / params.omega_ref)))
    )
    return out if out.ndim else float(out)


def _modulation_constant(params: ToyModelParams) -> complex:
    """cosh(pi^2/lambda + i pi alpha/2) Gamma(alpha - 2 pi i/lambda)."""
    xi = np.pi**2 / params.log_period
    return complex(
        np.cosh(xi + 0.5j * np.pi * params.alpha)
        * scipy.special.gamma(params.alpha - 1j * params.beta)
    )


def phi_of_t(params: ToyModelParams, t) -> np.ndarray | complex:
    """Vacuum response function phi(t) for t > 0, in closed form.

    phi(t) = (2C/pi) e^{-i omega_u t} t^{-alpha}
             [Gamma(alpha) cos(pi alpha/2) - A Im F(t)],
    F(t) = (Omega t)^{2 pi i/lambda} cosh(pi^2/lambda + i pi alpha/2)
           Gamma(alpha - 2 pi i/lambda).
    """
    tt = np.asarray(t, dtype=float)
    if np.any(tt <= 0):
        raise ValueError("phi_of_t requires t > 0")
    steady = scipy.special.gamma(params.alpha) * np.cos(0.5 * np.pi * params.alpha)
    mod = _modulation_constant(params)
    f_t = np.exp(1j * params.beta * np.log(params.omega_ref * tt)) * mod
    bracket = steady - params.modulation * f_t.imag
    out = (
        (2.0 * params.coupling / np.pi)
        * np.exp(-1j * params.omega_u * tt)
        * tt ** (-params.alpha)
        * bracket
    )
    return out if np.ndim(out) else complex(out)


def _reject_on_cut(z: np.ndarray) -> None:
    z = np.atleast_1d(z)
    if np.any((z.real == 0.0) & (z.imag <= 0.0)):
        raise ValueError(
            "argument lies on the branch cut (non-positive imaginary axis), "
            "where the pole ladder accumulates"
        )


def _phi_laplace_z(params: ToyModelParams, z) -> np.ndarray | complex:
    """Closed-form transform in the shifted variable z.

    (C/z^{1-alpha}) [csc(pi alpha/2) + (A/2i)(F(z) - F*(z))] with
    F(z) = (z/Omega)^{2 pi i/lambda} / sinh(pi^2/lambda - i pi alpha/2)
    and F* its conjugate-coefficient reflection evaluated at the same z.
    """
    zz = np.asarray(z, dtype=complex)
    _reject_on_cut(zz)
    xi = np.pi**2 / params.log_period
    sinh_minus = np.sinh(xi - 0.5j * np.pi * params.alpha)
    log_z_ref = np.log(zz / params.omega_ref)
    f_plus = np.exp(1j * params.beta * log_z_ref) / sinh_minus
    f_star = np.exp(-1j * params.beta * log_z_ref) / np.conj(sinh_minus)
    bracket = params.csc_half + (params.modulation / 2j) * (f_plus - f_star)
    out = params.coupling * principal_power(zz, params.alpha - 1.0) * bracket
    return out if out.ndim else complex(out)


def _phi_laplace_z_derivative(params: ToyModelParams, z) -> np.ndarray | complex:
    """d/dz of the closed-form transform (for Newton refinement and residues)."""
    zz = np.asarray(z, dtype=complex)
    _reject_on_cut(zz)
    xi = np.pi**2 / params.log_period
    sinh_minus = np.sinh(xi - 0.5j * np.pi * params.alpha)
    log_z_ref = np.log(zz / params.omega_ref)
    f_plus = np.exp(1j * params.beta * log_z_ref) / sinh_minus
    f_star = np.exp(-1j * params.beta * log_z_ref) / np.conj(sinh_minus)
    bracket = params.csc_half + (params.modulation / 2j) * (f_plus - f_star)
    bracket_slope = 0.5 * params.modulation * params.beta * (f_plus + f_star)
    out = (
        params.coupling
        * principal_power(zz, params.alpha - 2.0)
        * ((params.alpha - 1.0) * bracket + bracket_slope)
    )
    return out if out.ndim else complex(out)


def phi_laplace(params: ToyModelParams, s) -> np.ndarray | complex:
    """Laplace transform of phi_of_t: int_0^inf e^{-st} phi(t) dt.

    Analytic continuation off the non-positive imaginary axis of
    z = s + i omega_u (the transform never depends on omega_e).
    """
    return _phi_laplace_z(params, np.asarray(s, dtype=complex) + 1j * params.omega_u)


def pole_equation(params: ToyModelParams, s) -> np.ndarray | complex:
    """Resolvent denominator s + phi_laplace(s - i omega_e) at delta_omega = 0."""
    return np.asarray(s, dtype=complex) + _phi_laplace_z(params, s)


@dataclass(frozen=True)
class PoleSet:
    """Refined resolvent poles on the lower-half-plane ladder.

    Conjugate partners are implied. residuals holds |s + phi_laplace(s)|;
    converged marks poles meeting the 1e-10 |s| root contract, failed marks
    Newton breakdowns (position falls back to the seed), and asymptotic
    marks poles deep enough that the ladder formula is reliable
    (|s|^{2-alpha} < ASYMPTOTIC_RATIO * C).
    """

    indices: np.ndarray
    poles: np.ndarray
    seeds: np.ndarray
    theta0: float
    residuals: np.ndarray
    converged: np.ndarray
    failed: np.ndarray
    asymptotic: np.ndarray

    def __len__(self) -> int:
        return self.poles.size

    @property
    def usable(self) -> np.ndarray:
        return ~self.failed


def pole_seeds(params: ToyModelParams, indices) -> np.ndarray:
    """Ladder estimate s_n = -i Omega e^{lambda((3-alpha)/4 + n) + i theta0}."""
    n = np.asarray(indices)
    radius = params.omega_ref * np.exp(
        params.log_period * ((3.0 - params.alpha) / 4.0 + n)
    )
    return radius * np.exp(1j * (params.theta0 - 0.5 * np.pi))


def _refine_pole(params: ToyModelParams, seed: complex, max_iter: int):
    """Damped Newton iteration on s + phi_laplace(s); returns (s, |f|, ok)."""
    s = complex(seed)
    f = complex(pole_equation(params, s))
    best_s, best_f = s, abs(f)
    for _ in range(max_iter):
        fprime = 1.0 + complex(_phi_laplace_z_derivative(params, s))
        if fprime == 0 or not np.isfinite(fprime):
            return best_s, best_f, False
        step = f / fprime
        # Damp: halve the step until |f| decreases (or give up).
        for _ in range(60):
            candidate = s - step
            if candidate.real == 0.0 and candidate.imag <= 0.0:
                step *= 0.5  # do not land on the cut
                continue
            f_new = complex(pole_equation(params, candidate))
            if abs(f_new) < abs(f):
                break
            step *= 0.5
        else:
            return best_s, best_f, True  # stagnated at the numerical floor
        s, f = candidate, f_new
        if abs(f) < best_f:
            best_s, best_f = s, abs(f)
        if abs(step) < 1e-16 * abs(s):
            break
    return best_s, best_f, True


def find_poles(
    params: ToyModelParams,
    n_min: int,
    n_max: int,
    refine: bool = True,
    max_iter: int = 100,
) -> PoleSet:
    """Seed the pole ladder for n in [n_min, n_max] and Newton-refine it.

    Only the delta_omega = 0 case is analyzed; poles then come in exact
    conjugate pairs and the set stores the lower-half-plane members.
    """
    if params.delta_omega != 0.0:
        raise ValueError("pole analysis requires delta_omega = omega_e - omega_u = 0")
    if not params.in_pole_regime:
        raise ValueError(
            "modulation too small for the pole ladder: need "
            "A > csc(pi alpha/2) exp(-pi^2/lambda)"
        )
    if n_max < n_min:
        raise ValueError("n_max must be >= n_min")
    indices = np.arange(n_min, n_max + 1)
    seeds = pole_seeds(params, indices)
    poles = seeds.astype(complex).copy()
    residuals = np.empty(indices.size)
    converged = np.zeros(indices.size, dtype=bool)
    failed = np.zeros(indices.size, dtype=bool)
    for i, seed in enumerate(seeds):
        if refine:
            s, resid, ok = _refine_pole(params, seed, max_iter)
            # One pole per ladder rung: a root that drifted more than half
            # a rung from its seed belongs to a neighbor (or nowhere).
            if ok and abs(np.log(abs(s) / abs(seed))) > 0.5 * params.log_period:
                ok = False
        else:
            s, resid, ok = complex(seed), abs(complex(pole_equation(params, seed))), True
        poles[i] = s if ok else seed
        residuals[i] = resid
        failed[i] = not ok
        converged[i] = ok and resid < 1e-10 * abs(s)
    # Distinct seeds occasionally refine onto the same root outside the
    # asymptotic regime; keep the one that moved least.
    if refine:
        for i in range(indices.size):
            if failed[i]:
                continue
            for j in range(i + 1, indices.size):
                if failed[j]:
                    continue
                if abs(poles[i] - poles[j]) < 1e-8 * abs(poles[i]):
                    drift_i = abs(poles[i] - seeds[i])
                    drift_j = abs(poles[j] - seeds[j])
                    failed[j if drift_j >= drift_i else i] = True
        converged &= ~failed
    ratio = np.abs(poles) ** (2.0 - params.alpha) / params.coupling
    return PoleSet(
        indices=indices,
        poles=poles,
        seeds=seeds,
        theta0=params.theta0,
        residuals=residuals,
        converged=converged,
        failed=failed,
        asymptotic=ratio < ASYMPTOTIC_RATIO,
    )


@dataclass(frozen=True)
class PoleSumAmplitude:
    """Pole-sum amplitude trace plus the per-time count of retained terms."""

    trace: AmplitudeTrace
    term_count: np.ndarray


def amplitude_pole_sum(
    params: ToyModelParams,
    poles: PoleSet,
    times,
    exact_residues: bool = False,
) -> PoleSumAmplitude:
    """Long-time amplitude u(t) = -(lambda sin(pi alpha/2)/(pi C)) Im sum s_n^{2-alpha} e^{s_n t}.

    Terms are truncated at TERM_FLOOR relative to the dominant retained
    term; e^{s_n t} never overflows since Re s_n < 0. The validity mask
    marks times with C(|sin theta0| t)^{2-alpha} > VALIDITY_THRESHOLD.
    With exact_residues=True the asymptotic residue form is replaced by the
    exact residues e^{s_n t}/(1 + phi'(s_n)) as a cross-check.
    """
    t = np.asarray(times, dtype=float)
    if np.any(t <= 0):
        raise ValueError("pole-sum amplitude requires t > 0")
    keep = poles.usable
    if not np.any(keep):
        raise ValueError("no usable poles in the set")
    s = poles.poles[keep]
    if exact_residues:
        res_factor = 1.0 / (1.0 + _phi_laplace_z_derivative(params, s))
    else:
        res_factor = principal_power(s, 2.0 - params.alpha)
    # exponents (T x P); |e^{s t}| = e^{Re s t} <= 1 on the ladder
    growth = np.outer(t, s.real)
    magnitude = np.abs(res_factor)[None, :] * np.exp(growth)
    include = magnitude > TERM_FLOOR * magnitude.max(axis=1, keepdims=True)
    terms = res_factor[None, :] * np.exp(np.outer(t, s))
    terms = np.where(include, terms, 0.0)
    summed = terms.sum(axis=1)
    if exact_residues:
        values = 2.0 * summed.real
    else:
        prefactor = (
            params.log_period * np.sin(0.5 * np.pi * params.alpha) / (np.pi * params.coupling)
        )
        values = -prefactor * summed.imag
    valid = params.validity_measure(t) > VALIDITY_THRESHOLD
    trace = AmplitudeTrace(t, values.astype(complex), "pole_sum", valid=valid)
    return PoleSumAmplitude(trace=trace, term_count=include.sum(axis=1))


def amplitude_branchcut_a0(params: ToyModelParams, times) -> np.ndarray:
    """Reference long-time envelope 1/(C t^{2-alpha}) of the A = 0 model."""
    if params.modulation != 0.0:
        raise ValueError("the branch-cut envelope applies only to A = 0")
    t = np.asarray(times, dtype=float)
    if np.any(t <= 0):
        raise ValueError("envelope requires t > 0")
    return 1.0 / (params.coupling * t ** (2.0 - params.alpha))


def memory_kernel(params: ToyModelParams) -> PowerSumKernel:
    """Rotating-frame kernel K(t) = e^{i omega_e t} phi(t) at delta_omega = 0.

    The kernel is then a real combination of three complex powers
    t^{-alpha}, t^{-alpha +- 2 pi i/lambda}, exact for the product
    integration of the Volterra solver.
    """
    if params.delta_omega != 0.0:
        raise ValueError("the closed-form kernel requires delta_omega = 0")
    steady = (
        (2.0 * params.coupling / np.pi)
        * scipy.special.gamma(params.alpha)
        * np.cos(0.5 * np.pi * params.alpha)
    )
    mod = _modulation_constant(params)
    # -A Im F(t) = (i A / 2)(F - conj F) with F = (Omega t)^{i beta} mod
    c_plus = (
        1j * params.modulation * params.coupling / np.pi
        * mod
        * np.exp(1j * params.beta * np.log(params.omega_ref))
    )
    coefficients = [steady, c_plus, np.conj(c_plus)]
    exponents = [
        -params.alpha,
        -params.alpha + 1j * params.beta,
        -params.alpha - 1j * params.beta,
    ]
    return PowerSumKernel(coefficients, exponents)
