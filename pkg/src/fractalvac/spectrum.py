"""Discrete fractal spectral measures and their scaling parameters.

Builds Fibonacci tight-binding spectra and triadic Cantor measures as
weighted atom lists, and computes the golden-ratio trace-map constants
(eta, lambda, alpha) that control the local scaling of the spectrum.
Units: hbar = 1 and the tight-binding hopping = 1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

GOLDEN_RATIO = (1.0 + np.sqrt(5.0)) / 2.0

# Word generations above this overflow any sane chain size (F_32 ~ 2.2e6).
MAX_GENERATION = 32


@dataclass(frozen=True)
class FibonacciWord:
    """Letter sequence S_j over {A, B} with S_1 = 'B', S_2 = 'A'."""

    generation: int
    letters: str

    def __len__(self) -> int:
        return len(self.letters)


def fibonacci_word(generation: int) -> FibonacciWord:
    """Build S_j by the concatenation rule S_j = S_{j-2} + S_{j-1}.

    The word length is the Fibonacci number F_j (F_1 = F_2 = 1).
    Raises ValueError outside 1 <= generation <= MAX_GENERATION.
    """
    if not isinstance(generation, (int, np.integer)):
        raise ValueError(f"generation must be an integer, got {generation!r}")
    if generation < 1 or generation > MAX_GENERATION:
        raise ValueError(
            f"generation must be in [1, {MAX_GENERATION}], got {generation}"
        )
    prev, cur = "B", "A"
    if generation == 1:
        return FibonacciWord(1, prev)
    for _ in range(generation - 2):
        prev, cur = cur, prev + cur
    return FibonacciWord(generation, cur)


@dataclass(frozen=True)
class TightBindingChain:
    """Open chain with per-letter on-site energies and unit hopping.

    The defaults onsite_a = +1, onsite_b = -1 are not taken from any
    published parameter set; they give enough contrast to expose the
    fractal structure at modest chain lengths and are configurable.
    """

    word: FibonacciWord
    onsite_a: float = 1.0
    onsite_b: float = -1.0
    hopping: float = 1.0

    def diagonal(self) -> np.ndarray:
        table = {"A": self.onsite_a, "B": self.onsite_b}
        return np.array([table[c] for c in self.word.letters])


@dataclass(frozen=True)
class SpectralMeasure:
    """Weighted atoms (omega_k, |V_k|^2) with frequencies ascending.

    The discrete realization of the spectral measure mu(omega); ties in
    frequency are kept as separate entries.
    """

    frequencies: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        freq = np.asarray(self.frequencies, dtype=float)
        wts = np.asarray(self.weights, dtype=float)
        if freq.ndim != 1 or wts.ndim != 1 or freq.shape != wts.shape:
            raise ValueError("frequencies and weights must be 1-d arrays of equal length")
        if freq.size and np.any(np.diff(freq) < 0):
            raise ValueError("frequencies must be sorted ascending")
        if np.any(wts < 0):
            raise ValueError("weights must be nonnegative")
        object.__setattr__(self, "frequencies", freq)
        object.__setattr__(self, "weights", wts)

    def __len__(self) -> int:
        return self.frequencies.size

    @property
    def total_weight(self) -> float:
        return float(self.weights.sum())

    def cumulative(self, omega) -> np.ndarray | float:
        """Total weight of atoms with omega_k <= omega (right-continuous)."""
        csum = np.concatenate(([0.0], np.cumsum(self.weights)))
        idx = np.searchsorted(self.frequencies, omega, side="right")
        return csum[idx]


def integrated_measure(measure: SpectralMeasure, omega_u, omega) -> np.ndarray | float:
    """Signed mode count N_{omega_u}(omega) = mu(omega) - mu(omega_u).

    Antisymmetric under swapping the arguments; counts atoms with
    omega_u < omega_k <= omega for omega > omega_u.
    """
    return measure.cumulative(omega) - measure.cumulative(omega_u)


def tb_spectrum(chain: TightBindingChain) -> SpectralMeasure:
    """All eigenvalues of the tridiagonal chain Hamiltonian, unit weights.

    Uniform weights correspond to position-averaged coupling.
    """
    diag = chain.diagonal()
    n = diag.size
    if n == 0:
        raise ValueError("chain must contain at least one site")
    if n == 1:
        return SpectralMeasure(diag.copy(), np.ones(1))
    off = np.full(n - 1, float(chain.hopping))
    try:
        evals = scipy.linalg.eigh_tridiagonal(diag, off, eigvals_only=True)
    except scipy.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise RuntimeError(f"tridiagonal eigensolver failed: {exc}") from exc
    return SpectralMeasure(np.sort(evals), np.ones(n))


@dataclass(frozen=True)
class CantorMeasureSpec:
    """Triadic Cantor measure at finite depth on [omega_min, omega_max].

    Atoms sit at the left endpoints of the depth-level construction
    intervals; equal weights, defaulting to 2^-depth each (total 1).
    """

    depth: int
    omega_min: float = 0.0
    omega_max: float = 1.0
    atom_weight: float | None = None

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.depth > 26:
            raise ValueError(f"depth {self.depth} would generate 2^{self.depth} atoms")
        if not self.omega_min < self.omega_max:
            raise ValueError("omega_min must be strictly below omega_max")
        if self.atom_weight is not None and self.atom_weight <= 0:
            raise ValueError("atom_weight must be positive")


def cantor_measure(spec: CantorMeasureSpec) -> SpectralMeasure:
    """Atoms of the depth-level triadic Cantor construction.

    Endpoint numerators are built in exact integer arithmetic (base-3
    digits 0 and 2) and only scaled into [omega_min, omega_max] at the end,
    so the self-similar structure is exact up to one final rounding.
    """
    numerators = np.zeros(1, dtype=np.int64)
    for _ in range(spec.depth):
        numerators = np.concatenate((3 * numerators, 3 * numerators + 2))
    numerators.sort()
    span = spec.omega_max - spec.omega_min
    freqs = spec.omega_min + span * (numerators / 3.0**spec.depth)
    weight = spec.atom_weight if spec.atom_weight is not None else 0.5**spec.depth
    return SpectralMeasure(freqs, np.full(freqs.size, weight))


@dataclass(frozen=True)
class TraceMapParams:
    """Scaling constants of the 6-cycle of the Fibonacci trace map.

    eta >= 1 measures the refractive-index contrast, t_prime = |T'| is the
    linearized expansion rate at the cycle's fixed points, log_period is
    ln|T'| and alpha = ln(sigma^6)/log_period is the local spectral
    exponent (sigma the golden ratio).
    """

    n_a: float
    n_b: float
    eta: float
    t_prime: float
    log_period: float
    alpha: float
    cycle_length: int = field(default=6)


def trace_map_params(n_a: float, n_b: float, cycle_length: int = 6) -> TraceMapParams:
    """Compute (eta, |T'|, lambda, alpha) for the 6-cycle fixed points.

    |T'| = 1 + 8 eta^4 + 4 eta^2 sqrt(1 + 4 eta^4) with
    eta = (n_a/n_b + n_b/n_a)/2; alpha = ln(sigma^6) / ln|T'|.
    Only the 6-cycle is published; other cycle lengths are rejected.
    """
    if cycle_length != 6:
        raise ValueError(f"only the 6-cycle is supported, got cycle_length={cycle_length}")
    if n_a <= 0 or n_b <= 0:
        raise ValueError(f"refractive indices must be positive, got ({n_a}, {n_b})")
    eta = 0.5 * (n_a / n_b + n_b / n_a)
    t_prime = 1.0 + 8.0 * eta**4 + 4.0 * eta**2 * np.sqrt(1.0 + 4.0 * eta**4)
    log_period = float(np.log(t_prime))
    alpha = float(cycle_length * np.log(GOLDEN_RATIO) / log_period)
    return TraceMapParams(
        n_a=n_a,
        n_b=n_b,
        eta=float(eta),
        t_prime=float(t_prime),
        log_period=log_period,
        alpha=alpha,
        cycle_length=cycle_length,
    )


def fixed_point_frequency(n: int, optical_thickness: float = 1.0, light_speed: float = 1.0) -> float:
    """Fixed-point frequency of the 6-cycle for matched optical paths.

    For d_A n_A = d_B n_B = d the fixed points sit at
    omega_n d / (2 pi c) = (2n + 1)/4, n = 0, 1, ...
    """
    if n < 0:
        raise ValueError("n must be a nonnegative integer")
    return 2.0 * np.pi * light_speed * (2 * n + 1) / (4.0 * optical_thickness)
