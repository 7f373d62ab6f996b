"""Periodic functions on a sampled contour: grid values and Fourier coefficients."""
import warnings
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import BandLimitWarning, DivisionError

BAND_TAIL_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SampledFunction:
    grid: object
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n,):
            raise ValueError(f"expected {self.grid.n} samples, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("sampled function has non-finite values")
        object.__setattr__(self, "values", values)

    def __add__(self, other):
        return SampledFunction(self.grid, self.values + _vals(other))

    def __sub__(self, other):
        return SampledFunction(self.grid, self.values - _vals(other))

    def __mul__(self, other):
        return SampledFunction(self.grid, self.values * _vals(other))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return SampledFunction(self.grid, -self.values)


def _vals(x):
    return x.values if isinstance(x, SampledFunction) else x


@dataclass(frozen=True, eq=False)
class FourierRep:
    """Coefficients c_n for n = -N/2 .. N/2-1 (index k holds n = k - N/2)."""
    grid: object
    coeffs: np.ndarray
    warnings: tuple = ()

    @property
    def modes(self):
        n = len(self.coeffs)
        return np.arange(-n // 2, n // 2)

    @property
    def tail_mass(self):
        n = len(self.coeffs)
        return float(np.sum(np.abs(self.coeffs[np.abs(self.modes) >= n // 4])))

    @property
    def band_limited(self):
        scale = float(np.sum(np.abs(self.coeffs)))
        return scale == 0.0 or self.tail_mass < BAND_TAIL_TOL * max(scale, 1.0)

    def coefficient(self, n):
        return self.coeffs[n + len(self.coeffs) // 2]

    @property
    def degree(self):
        """Largest |n| carrying a non-negligible coefficient."""
        mags = np.abs(self.coeffs)
        if mags.max() == 0:
            return 0
        return int(np.max(np.abs(self.modes[mags > 1e-12 * mags.max()])))


def to_fourier(f):
    values = f.values if isinstance(f, SampledFunction) else np.asarray(f, dtype=complex)
    if not np.all(np.isfinite(values)):
        raise ValueError("non-finite samples")
    grid = f.grid if isinstance(f, SampledFunction) else None
    return FourierRep(grid, np.fft.fftshift(np.fft.fft(values)) / len(values))


def from_fourier(rep):
    values = np.fft.ifft(np.fft.ifftshift(rep.coeffs)) * len(rep.coeffs)
    return SampledFunction(rep.grid, values)


def differentiate(rep):
    """Derivative in the parameter: c_n -> i n c_n, with the -N/2 mode dropped."""
    modes = rep.modes
    coeffs = 1j * modes * rep.coeffs
    coeffs[0] = 0.0
    notes = rep.warnings
    if not rep.band_limited:
        notes = notes + ("input not band-limited; derivative may be inaccurate",)
    return FourierRep(rep.grid, coeffs, notes)


def resample(rep, points):
    """Evaluate the trigonometric interpolant at parameter values ``points``."""
    points = np.asarray(points, dtype=float)
    n = len(rep.coeffs)
    modes = rep.modes
    out = np.exp(1j * np.multiply.outer(points, modes[1:])) @ rep.coeffs[1:]
    return out + rep.coeffs[0] * np.cos(n / 2 * points)


def interpolation_matrix(n, points):
    """Matrix mapping n equispaced samples to trig-interpolant values at ``points``."""
    points = np.asarray(points, dtype=float)
    modes = np.arange(-n // 2, n // 2)
    coeffs = np.fft.fftshift(np.fft.fft(np.eye(n), axis=0), axes=0) / n
    out = np.exp(1j * np.multiply.outer(points, modes[1:])) @ coeffs[1:]
    return out + np.cos(n / 2 * points)[:, None] * coeffs[0][None, :]


def differentiation_matrix(n):
    """Spectral d/dtheta on n equispaced samples (Nyquist mode zeroed)."""
    modes = np.fft.fftfreq(n, 1.0 / n)
    modes[n // 2] = 0.0
    return np.fft.ifft(1j * modes[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)


def shift_operator(shift):
    """Grid matrix W with (W f)_j = f(alpha(t_j))."""
    n = shift.grid.n
    if shift.permutation is not None:
        w = np.zeros((n, n))
        w[np.arange(n), shift.permutation] = 1.0
        return w
    return interpolation_matrix(n, shift.sigma)


def compose_shift(f, shift):
    """Samples of f(alpha(t)) at the grid nodes."""
    if f.grid is not shift.grid:
        raise ValueError("function and shift live on different grids")
    if shift.permutation is not None:
        return SampledFunction(f.grid, f.values[shift.permutation])
    rep = to_fourier(f)
    if not rep.band_limited:
        warnings.warn("composing a function that is not band-limited; interpolation "
                      "error may be significant", BandLimitWarning, stacklevel=2)
    return SampledFunction(f.grid, resample(rep, shift.sigma))


def divide(num, den, tol=None):
    """Pointwise quotient; fails when |den| drops below tol_div anywhere."""
    tol_div = DEFAULT_TOLERANCES.tol_div if tol is None else tol
    d = _vals(den)
    j = int(np.argmin(np.abs(d)))
    if abs(d[j]) < tol_div:
        raise DivisionError(f"denominator {abs(d[j]):.3e} below {tol_div:.1e} at node {j}")
    grid = num.grid if isinstance(num, SampledFunction) else den.grid
    return SampledFunction(grid, _vals(num) / d)
