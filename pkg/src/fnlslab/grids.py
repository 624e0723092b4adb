"""Periodic spectral grid, physical/spectral fields, and fractional operators.

The domain is x in D*[-pi, pi] sampled at N equispaced nodes. Discrete
Fourier transforms use the unnormalized forward convention, with the 1/N
factor on the inverse, so that a spectral coefficient at integer mode m
corresponds to the wavenumber k = m/D.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.fft as _fft


class GridMismatchError(ValueError):
    """Raised when a field's length or grid does not match an operation."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on x in D*[-pi, pi] with N Fourier modes.

    Attributes
    ----------
    n_modes:
        Number of nodes N. Must be a power of two, at least 8.
    half_width:
        Domain scale D > 0; the domain has length 2*pi*D.
    """

    n_modes: int
    half_width: float = 1.0

    def __post_init__(self):
        n = self.n_modes
        if n < 8 or (n & (n - 1)) != 0:
            raise ValueError(f"n_modes must be a power of two >= 8, got {n}")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")

    @cached_property
    def x(self) -> np.ndarray:
        """Node positions x_j = D*(-pi + 2*pi*j/N), j = 0..N-1."""
        n, d = self.n_modes, self.half_width
        return d * (-np.pi + 2.0 * np.pi * np.arange(n) / n)

    @cached_property
    def modes(self) -> np.ndarray:
        """Integer mode numbers m in FFT storage order: 0..N/2-1, -N/2..-1."""
        return np.fft.fftfreq(self.n_modes, 1.0 / self.n_modes)

    @cached_property
    def k(self) -> np.ndarray:
        """Signed wavenumbers k = m/D in FFT storage order."""
        return self.modes / self.half_width

    @cached_property
    def abs_k(self) -> np.ndarray:
        return np.abs(self.k)

    @property
    def dx(self) -> float:
        """Node spacing 2*pi*D/N."""
        return 2.0 * np.pi * self.half_width / self.n_modes

    @property
    def length(self) -> float:
        return 2.0 * np.pi * self.half_width

    @cached_property
    def reflection_index(self) -> np.ndarray:
        """Index map sending the sample at x_j to the one at -x_j (mod 2*pi*D)."""
        return (-np.arange(self.n_modes)) % self.n_modes


def _as_complex_vector(values, n: int) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.complex128)
    if arr.ndim != 1 or arr.shape[0] != n:
        raise GridMismatchError(
            f"field must be a length-{n} vector, got shape {arr.shape}"
        )
    return arr


@dataclass
class PhysicalField:
    """Complex samples psi(x_j) on a grid."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = _as_complex_vector(self.values, self.grid.n_modes)

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "PhysicalField":
        return cls(grid, np.asarray(fn(grid.x), dtype=np.complex128))

    def copy(self) -> "PhysicalField":
        return PhysicalField(self.grid, self.values.copy())


@dataclass
class SpectralField:
    """Discrete Fourier coefficients in FFT storage order.

    Coefficient j multiplies exp(i*m_j*x/D) / N in the inverse transform,
    where m_j is ``grid.modes[j]``.
    """

    grid: Grid
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = _as_complex_vector(self.coefficients, self.grid.n_modes)

    def copy(self) -> "SpectralField":
        return SpectralField(self.grid, self.coefficients.copy())


def to_spectral(u: PhysicalField) -> SpectralField:
    """Forward DFT (unnormalized)."""
    return SpectralField(u.grid, _fft.fft(u.values))


def to_physical(uhat: SpectralField) -> PhysicalField:
    """Inverse DFT (carries the 1/N factor)."""
    return PhysicalField(uhat.grid, _fft.ifft(uhat.coefficients))


def fractional_symbol(grid: Grid, s: float) -> np.ndarray:
    """Multiplier |k|^(2s) of the fractional Laplacian on the grid.

    The unpaired Nyquist mode is treated like every other mode; the symbol
    is real there, which is all the evolution and energy formulas use.
    """
    if not 0.0 < s <= 1.0:
        raise ValueError(f"dispersion exponent s must lie in (0, 1], got {s}")
    return grid.abs_k ** (2.0 * s)


def apply_fractional_laplacian(u: PhysicalField, s: float) -> PhysicalField:
    """Evaluate (-Delta)^s u = F^-1(|k|^(2s) F u).

    For s = 1 this is the spectral evaluation of -u''.
    """
    sym = fractional_symbol(u.grid, s)
    return PhysicalField(u.grid, _fft.ifft(sym * _fft.fft(u.values)))
