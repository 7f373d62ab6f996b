"""Closed contours, their uniform parameter grids, and Carleman shifts.

Everything lives in the parameter domain [0, 2*pi).  A contour is a finite
Fourier series z(theta) = sum_n c_n exp(i n theta); a shift is stored through
its parameter map sigma, so that alpha(z(theta)) = z(sigma(theta)).
"""
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import (DegenerateParametrizationError, GeometryError, InvolutionError,
                     NonMonotoneShiftError, SelfIntersectionError, ShiftError,
                     ZeroDerivativeError)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Contour:
    """Fourier-parametrized closed curve.

    ``coeffs`` is a tuple of ``(mode, coefficient)`` pairs.  The curve is
    assumed simple and positively oriented; :func:`contour_sample` checks both
    at sampling resolution.
    """
    kind: str
    coeffs: tuple

    @classmethod
    def unit_circle(cls):
        return cls("unit_circle", ((1, 1.0 + 0j),))

    @classmethod
    def fourier(cls, coeffs):
        """Build from a ``{mode: coefficient}`` mapping."""
        items = tuple(sorted((int(n), complex(c)) for n, c in dict(coeffs).items() if c != 0))
        if not items:
            raise GeometryError("contour has no nonzero Fourier coefficients")
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for _, c in items):
            raise GeometryError("contour coefficients must be finite")
        return cls("fourier", items)

    @classmethod
    def ellipse(cls, semi_x, semi_y, center=0j):
        # semi_x cos + i semi_y sin = (sx+sy)/2 e^{i.} + (sx-sy)/2 e^{-i.}
        return cls.fourier({0: center, 1: (semi_x + semi_y) / 2, -1: (semi_x - semi_y) / 2})

    @property
    def is_unit_circle(self):
        return self.coeffs == ((1, 1.0 + 0j),)

    @property
    def degree(self):
        return max(abs(n) for n, _ in self.coeffs)

    def z(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for n, c in self.coeffs:
            out += c * np.exp(1j * n * theta)
        return out

    def dz(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for n, c in self.coeffs:
            out += 1j * n * c * np.exp(1j * n * theta)
        return out


@dataclass(frozen=True, eq=False)
class GridSampling:
    contour: Contour
    n: int
    theta: np.ndarray
    nodes: np.ndarray
    tangents: np.ndarray
    weights: np.ndarray

    @property
    def diameter(self):
        return float(np.max(np.abs(self.nodes[:, None] - self.nodes[None, :])))

    def trial_basis(self, modes):
        """Evaluation matrix E[j, k] = exp(i n_k theta_j), n_k = -modes..modes."""
        n = np.arange(-modes, modes + 1)
        return np.exp(1j * np.outer(self.theta, n))


def contour_sample(contour, n, tol=None):
    """Sample ``contour`` at ``n`` equispaced parameter values."""
    tol_geom = DEFAULT_TOLERANCES.tol_geom if tol is None else tol.tol_geom
    n = int(n)
    if n < 2 or n % 2:
        raise ValueError(f"grid size must be a positive even integer, got {n}")
    theta = TWO_PI * np.arange(n) / n
    nodes = contour.z(theta)
    tangents = contour.dz(theta)
    if np.min(np.abs(tangents)) < tol_geom:
        j = int(np.argmin(np.abs(tangents)))
        raise DegenerateParametrizationError(
            f"z'(theta) vanishes at node {j} (theta = {theta[j]:.6g})")
    dist = np.abs(nodes[:, None] - nodes[None, :])
    np.fill_diagonal(dist, np.inf)
    if np.min(dist) < tol_geom * max(1.0, np.max(np.abs(nodes))):
        j, k = np.unravel_index(np.argmin(dist), dist.shape)
        raise SelfIntersectionError(f"nodes {j} and {k} coincide")
    weights = np.full(n, TWO_PI / n)
    area = 0.5 * np.sum(np.imag(np.conj(nodes) * tangents) * weights)
    if area <= 0:
        raise GeometryError("contour must be positively oriented")
    return GridSampling(contour, n, theta, nodes, tangents, weights)


@dataclass(frozen=True, eq=False)
class ShiftMap:
    """Carleman shift sampled on a grid.

    ``sigma`` holds sigma(theta_j) reduced mod 2*pi, ``alpha`` the points
    z(sigma(theta_j)) and ``dalpha`` the complex derivative d alpha / dt at the
    nodes.  ``permutation`` is set when sigma maps the grid onto itself.
    """
    kind: str
    grid: GridSampling
    sigma: np.ndarray
    gamma: int
    alpha: np.ndarray
    dalpha: np.ndarray
    sigma_prime: np.ndarray
    permutation: object = None
    involution_error: float = 0.0
    params: dict = field(default_factory=dict)

    @property
    def fixed_point_free(self):
        return self.kind != "identity"

    def sigma_at(self, x):
        """Evaluate the (lifted) parameter map at arbitrary points."""
        return _sigma_at(self.kind, self.params, self.gamma, x)


def _sigma_at(kind, params, gamma, x):
    x = np.asarray(x, dtype=float)
    if kind == "identity":
        return x
    if kind == "antipodal":
        return x + np.pi
    if kind == "reflection":
        return params["c"] - x
    return gamma * x + _trig_eval(params["periodic_part"], x)


def _trig_eval(values, x):
    """Trigonometric interpolant of grid ``values`` at ``x``; Nyquist mode split evenly."""
    n = len(values)
    c = np.fft.fftshift(np.fft.fft(values)) / n          # modes -n/2 .. n/2-1
    modes = np.arange(-n // 2, n // 2)
    x = np.asarray(x, dtype=float)
    out = np.exp(1j * np.multiply.outer(x, modes[1:])) @ c[1:]
    out = out + c[0] * np.cos(n / 2 * x)
    if np.isrealobj(values):
        return out.real
    return out


def _trig_derivative(values):
    n = len(values)
    modes = np.fft.fftfreq(n, 1.0 / n)
    modes[n // 2] = 0.0
    out = np.fft.ifft(1j * modes * np.fft.fft(values))
    return out.real if np.isrealobj(values) else out


def _lift(sigma_samples):
    """Unwrap sigma samples and detect orientation; returns (lift, gamma)."""
    steps = np.angle(np.exp(1j * np.diff(np.append(sigma_samples, sigma_samples[0]))))
    total = np.sum(steps)
    gamma = int(np.rint(total / TWO_PI))
    if gamma not in (1, -1):
        raise NonMonotoneShiftError(
            f"sigma winds {total / TWO_PI:.3f} times around the circle; expected +1 or -1")
    if not np.all(gamma * steps > 0):
        j = int(np.argmin(gamma * steps))
        raise NonMonotoneShiftError(f"sigma is not strictly monotone near node {j}")
    lift = sigma_samples[0] + np.concatenate(([0.0], np.cumsum(steps[:-1])))
    return lift, gamma


def _grid_permutation(sigma_mod, n):
    k = sigma_mod * n / TWO_PI
    idx = np.rint(k)
    if np.max(np.abs(k - idx)) < 1e-9:
        return idx.astype(int) % n
    return None


def induce_shift(contour, kind, grid, *, c=0.0, sigma_samples=None, tol=None):
    """Build a validated :class:`ShiftMap` on ``grid``.

    ``kind`` is one of ``identity``, ``antipodal`` (sigma = theta + pi),
    ``reflection`` (sigma = c - theta) or ``custom`` (``sigma_samples`` gives
    sigma at the grid nodes).
    """
    tol = DEFAULT_TOLERANCES if tol is None else tol
    if grid.contour != contour:
        raise ShiftError("grid was sampled from a different contour")
    theta = grid.theta
    params = {}
    if kind == "identity":
        lifted = theta.copy()
    elif kind == "antipodal":
        lifted = theta + np.pi
    elif kind == "reflection":
        params["c"] = float(c)
        lifted = float(c) - theta
    elif kind == "custom":
        if sigma_samples is None:
            raise ShiftError("custom shift requires sigma samples")
        lifted = np.asarray(sigma_samples, dtype=float)
        if lifted.shape != theta.shape:
            raise ShiftError(f"expected {grid.n} sigma samples, got {lifted.size}")
        if not np.all(np.isfinite(lifted)):
            raise ShiftError("sigma samples must be finite")
    else:
        raise ShiftError(f"unknown shift kind {kind!r}")

    sigma_mod = np.mod(lifted, TWO_PI)
    lift, gamma = _lift(sigma_mod)
    if kind == "custom":
        params["periodic_part"] = lift - gamma * theta
        sigma_prime = gamma + _trig_derivative(params["periodic_part"])
    else:
        sigma_prime = np.full(grid.n, -1.0 if kind == "reflection" else 1.0)

    twice = contour.z(_sigma_at(kind, params, gamma, _sigma_at(kind, params, gamma, theta)))
    deviation = float(np.max(np.abs(twice - grid.nodes)))
    if deviation > tol.tol_shift * grid.diameter:
        raise InvolutionError(deviation, tol.tol_shift * grid.diameter)

    if np.min(np.abs(sigma_prime)) < tol.tol_geom:
        raise ZeroDerivativeError("sigma'(theta) vanishes on the grid")
    dalpha = contour.dz(sigma_mod) * sigma_prime / grid.tangents
    if np.min(np.abs(dalpha)) < tol.tol_geom:
        raise ZeroDerivativeError("alpha'(t) vanishes on the grid")

    return ShiftMap(kind, grid, sigma_mod, gamma, contour.z(sigma_mod), dalpha, sigma_prime,
                    permutation=_grid_permutation(sigma_mod, grid.n),
                    involution_error=deviation, params=params)
