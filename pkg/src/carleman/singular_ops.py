"""Discretized Cauchy singular operator, Plemelj projections and smooth integral operators.

Operators are first built as N x N "grid operators" acting on node values; an
:class:`OperatorMatrix` is a grid operator composed with the trial basis
(Laurent modes -m..m in the parameter), giving a tall N x (2m+1) matrix.
"""
from dataclasses import dataclass

import numpy as np

from .errors import KernelSingularityError, ModeMismatchError, ResolutionError, ExprError
from .exprparse import evaluate
from .funcspace import SampledFunction, differentiation_matrix


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """Trial coefficients -> collocation values.

    ``structure`` is ``"scalar"`` (N x (2m+1)) or ``"system"`` (2N x 2(2m+1),
    block order (rho_1, rho_2) on both sides).
    """
    matrix: np.ndarray
    modes: int
    grid: object
    structure: str = "scalar"

    def __post_init__(self):
        if not np.all(np.isfinite(self.matrix)):
            raise ValueError("operator matrix has non-finite entries")
        blocks = 2 if self.structure == "system" else 1
        expected = (blocks * self.grid.n, blocks * (2 * self.modes + 1))
        if self.matrix.shape != expected:
            raise ValueError(f"matrix shape {self.matrix.shape} != {expected}")

    @property
    def shape(self):
        return self.matrix.shape

    def apply(self, coeffs):
        return self.matrix @ np.asarray(coeffs, dtype=complex)

    def embedding(self):
        """Matrix of the identity in the same trial/collocation spaces."""
        e = self.grid.trial_basis(self.modes)
        if self.structure == "system":
            z = np.zeros_like(e)
            return np.block([[e, z], [z, e]])
        return e


def check_resolution(grid, modes):
    if grid.n < 4 * modes:
        raise ResolutionError(f"N = {grid.n} collocation nodes cannot resolve {modes} trial "
                              f"modes (need N >= {4 * modes})")


def default_mode(grid):
    return "spectral-circle" if grid.contour.is_unit_circle else "nystrom"


def cauchy_grid_operator(grid, mode=None):
    """N x N matrix of S on node values."""
    mode = default_mode(grid) if mode is None else mode
    n = grid.n
    if mode == "spectral-circle":
        if not grid.contour.is_unit_circle:
            raise ModeMismatchError("spectral-circle mode requires the unit circle")
        sign = np.where(np.fft.fftfreq(n, 1.0 / n) >= 0, 1.0, -1.0)
        sign[n // 2] = -1.0                       # mode -N/2
        return np.fft.ifft(sign[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)
    if mode != "nystrom":
        raise ModeMismatchError(f"unknown discretization mode {mode!r}")
    t = grid.nodes
    diff = t[None, :] - t[:, None]                # tau_k - t_j
    np.fill_diagonal(diff, 1.0)
    a = (grid.tangents * grid.weights)[None, :] / diff
    np.fill_diagonal(a, 0.0)
    # subtracted integrand; diagonal limit is f'(theta_j) * w_j
    core = a - np.diag(a.sum(axis=1)) + grid.weights[:, None] * differentiation_matrix(n)
    return np.eye(n) + core / (np.pi * 1j)


def build_S(grid, mode=None, modes=None):
    """S as an :class:`OperatorMatrix` on ``modes`` trial modes (default N/4)."""
    modes = grid.n // 4 if modes is None else modes
    check_resolution(grid, modes)
    mode = default_mode(grid) if mode is None else mode
    basis = grid.trial_basis(modes)
    if mode == "spectral-circle":
        if not grid.contour.is_unit_circle:
            raise ModeMismatchError("spectral-circle mode requires the unit circle")
        sign = np.where(np.arange(-modes, modes + 1) >= 0, 1.0, -1.0)
        return OperatorMatrix(basis * sign[None, :], modes, grid)
    return OperatorMatrix(cauchy_grid_operator(grid, mode) @ basis, modes, grid)


def cauchy_projections(phi, s):
    """Boundary values (Phi+, Phi-) of the Cauchy integral of ``phi``.

    ``s`` is either an N x N grid operator or an :class:`OperatorMatrix`, in
    which case ``phi`` is given by its trial coefficients.
    """
    if isinstance(s, OperatorMatrix):
        coeffs = np.asarray(phi, dtype=complex)
        values = s.grid.trial_basis(s.modes) @ coeffs
        s_phi = s.apply(coeffs)
        grid = s.grid
    else:
        values = phi.values
        s_phi = s @ values
        grid = phi.grid
    return (SampledFunction(grid, (values + s_phi) / 2),
            SampledFunction(grid, (s_phi - values) / 2))


def kernel_values(kernel, t, tau):
    """Evaluate a kernel expression on a grid of (t, tau) pairs."""
    try:
        vals = np.broadcast_to(evaluate(kernel, t=t, tau=tau), np.broadcast(t, tau).shape)
    except (ExprError, FloatingPointError, ZeroDivisionError) as exc:
        raise KernelSingularityError(f"kernel evaluation failed: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise KernelSingularityError("kernel is not finite at every node pair")
    return np.array(vals, dtype=complex)


def integral_grid_operator(kernel, grid, t_points=None, tau_points=None, tau_weights=None):
    """Trapezoid matrix of phi -> int K(t, tau) phi(tau) dtau on node values.

    ``t_points``/``tau_points`` substitute the arguments fed to the kernel
    (used for the shifted kernels K(alpha(t), alpha(tau))); the quadrature
    weight is always tau'_k w_k unless ``tau_weights`` is given.
    """
    t = grid.nodes if t_points is None else t_points
    tau = grid.nodes if tau_points is None else tau_points
    w = grid.tangents * grid.weights if tau_weights is None else tau_weights
    with np.errstate(all="raise"):
        k = kernel_values(kernel, t[:, None], tau[None, :])
    return k * w[None, :]


def build_integral_op(kernel, grid, modes=None):
    modes = grid.n // 4 if modes is None else modes
    check_resolution(grid, modes)
    return OperatorMatrix(integral_grid_operator(kernel, grid) @ grid.trial_basis(modes),
                          modes, grid)
