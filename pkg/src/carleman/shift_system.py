"""Coefficients, 2x2 symbol fields and operator assembly for the shift equation.

The scalar equation is

    M phi = a phi + b W phi + c S phi + d W S phi + K phi = g,

where W is composition with the shift (W f = f o alpha) and K the smooth
integral operator.  Everything else (the accompanying operator, the unions
with respect to the bilinear form int phi psi dt, and the shift-free 2x2
systems) is assembled from the same grid primitives.
"""
import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .funcspace import SampledFunction, compose_shift, shift_operator, to_fourier
from .singular_ops import (OperatorMatrix, cauchy_grid_operator, check_resolution,
                           default_mode, integral_grid_operator, kernel_values)


@dataclass(frozen=True, eq=False)
class CoefficientSet:
    grid: object
    shift: object
    a: SampledFunction
    b: SampledFunction
    c: SampledFunction
    d: SampledFunction
    g: SampledFunction
    kernel: object = None

    def __post_init__(self):
        if self.shift.grid is not self.grid:
            raise ValueError("shift sampled on a different grid")
        for name in "abcdg":
            if getattr(self, name).grid is not self.grid:
                raise ValueError(f"coefficient {name} sampled on a different grid")

    @classmethod
    def from_values(cls, grid, shift, a=0.0, b=0.0, c=0.0, d=0.0, g=0.0, kernel=None):
        def f(v):
            return SampledFunction(grid, np.broadcast_to(np.asarray(v, dtype=complex), (grid.n,)))
        return cls(grid, shift, f(a), f(b), f(c), f(d), f(g), kernel)

    @property
    def band_limited(self):
        return {k: to_fourier(getattr(self, k)).band_limited for k in "abcdg"}

    @property
    def trig_degree(self):
        """Largest Fourier mode carried by a, b, c, d."""
        return max(to_fourier(getattr(self, k)).degree for k in "abcd")


@dataclass(frozen=True, eq=False)
class DerivedCoefficients:
    a1: SampledFunction
    b1: SampledFunction
    c1: SampledFunction
    d1: SampledFunction


def derive_coefficients(coeffs):
    return DerivedCoefficients(coeffs.a + coeffs.c, coeffs.b + coeffs.d,
                               coeffs.c - coeffs.a, coeffs.d - coeffs.b)


def _det(m):
    return m[:, 0, 0] * m[:, 1, 1] - m[:, 0, 1] * m[:, 1, 0]


@dataclass(frozen=True, eq=False)
class SystemFields:
    """Per-node symbol matrices of the 2x2 system and their determinants.

    ``named`` holds ``delta1``/``delta2`` for an orientation-preserving shift
    and ``delta``/``delta_alpha`` for an orientation-reversing one.
    """
    grid: object
    shift: object
    gamma: int
    P: np.ndarray
    Q: np.ndarray
    derived: DerivedCoefficients
    named: dict

    @property
    def C(self):
        return self.P + self.Q

    @property
    def D(self):
        return self.P - self.Q

    @property
    def det_C(self):
        return _det(self.C)

    @property
    def det_D(self):
        return _det(self.D)


def build_system_fields(coeffs, shift=None):
    shift = coeffs.shift if shift is None else shift
    gamma = shift.gamma

    def at_alpha(f):
        return compose_shift(f, shift).values

    a, b, c, d = (getattr(coeffs, k).values for k in "abcd")
    a_al, b_al, c_al, d_al = (at_alpha(getattr(coeffs, k)) for k in "abcd")
    P = np.stack([np.stack([a, b], -1), np.stack([b_al, a_al], -1)], -2)
    Q = np.stack([np.stack([c, gamma * d], -1), np.stack([d_al, gamma * c_al], -1)], -2)

    der = derive_coefficients(coeffs)
    a1, b1, c1, d1 = der.a1.values, der.b1.values, der.c1.values, der.d1.values
    a1_al, b1_al, c1_al, d1_al = (at_alpha(f) for f in (der.a1, der.b1, der.c1, der.d1))
    if gamma == 1:
        named = {"delta1": c1 * c1_al - d1 * d1_al,
                 "delta2": a1 * a1_al - b1 * b1_al}
    else:
        delta = -b1 * d1_al + c1 * a1_al
        named = {"delta": delta,
                 "delta_alpha": at_alpha(SampledFunction(coeffs.grid, delta))}
    return SystemFields(coeffs.grid, shift, gamma, P, Q, der, named)


class OperatorKind(enum.Enum):
    M = "M"                              # the equation itself
    K_accomp = "K_accomp"                # accompanying equation
    M_union = "M_union"                  # union of M
    K_union = "K_union"                  # union of the accompanying operator
    L_system = "L_system"                # 2x2 system as P I + Q S + D1
    L_system_CD = "L_system_CD"          # same system as C P1 + D Q1 + T
    L_union_system = "L_union_system"    # union of the 2x2 system

    @property
    def is_system(self):
        return self.name.startswith("L_")


def _diag(v):
    return np.diag(np.asarray(v, dtype=complex))


class GridOperators:
    """Grid (node-value) matrices of every building block for one coefficient set."""

    def __init__(self, coeffs, mode=None):
        self.coeffs = coeffs
        self.grid = coeffs.grid
        self.shift = coeffs.shift
        self.gamma = coeffs.shift.gamma
        self.mode = default_mode(self.grid) if mode is None else mode
        self.n = self.grid.n
        self.eye = np.eye(self.n)

    @cached_property
    def S(self):
        return cauchy_grid_operator(self.grid, self.mode)

    @cached_property
    def W(self):
        return shift_operator(self.shift)

    @cached_property
    def WSW(self):
        """Shift-conjugated Cauchy operator: (1/pi i) int alpha'(tau) f(tau) / (alpha(tau) - alpha(t)) dtau."""
        return self.W @ self.S @ self.W

    def value(self, name):
        return getattr(self.coeffs, name).values

    def shifted(self, name):
        return compose_shift(getattr(self.coeffs, name), self.shift).values

    @property
    def dalpha(self):
        return self.shift.dalpha

    @cached_property
    def _zero(self):
        return np.zeros((self.n, self.n), dtype=complex)

    @cached_property
    def K(self):
        if self.coeffs.kernel is None:
            return self._zero
        return integral_grid_operator(self.coeffs.kernel, self.grid)

    @cached_property
    def K_transposed(self):
        """psi -> int K(tau, t) psi(tau) dtau."""
        if self.coeffs.kernel is None:
            return self._zero
        g = self.grid
        vals = kernel_values(self.coeffs.kernel, g.nodes[None, :], g.nodes[:, None])
        return vals * (g.tangents * g.weights)[None, :]

    @cached_property
    def K_alpha(self):
        """rho -> int K(alpha(t), alpha(tau)) alpha'(tau) rho(tau) dtau."""
        if self.coeffs.kernel is None:
            return self._zero
        g, s = self.grid, self.shift
        return integral_grid_operator(self.coeffs.kernel, g, s.alpha, s.alpha,
                                      s.dalpha * g.tangents * g.weights)

    @cached_property
    def K_transposed_alpha(self):
        """omega -> int K(alpha(tau), alpha(t)) omega(tau) dtau."""
        if self.coeffs.kernel is None:
            return self._zero
        g, s = self.grid, self.shift
        vals = kernel_values(self.coeffs.kernel, s.alpha[None, :], s.alpha[:, None])
        return vals * (g.tangents * g.weights)[None, :]

    # scalar operators

    def scalar_equation(self, sign=1):
        """M (sign=+1) or the accompanying K (sign=-1)."""
        a, b, c, d = (_diag(self.value(k)) for k in "abcd")
        return a + sign * b @ self.W + c @ self.S + sign * d @ self.W @ self.S + self.K

    def scalar_union(self, sign=1):
        """Union of M (sign=+1) or of the accompanying operator (sign=-1)."""
        g = self.gamma
        a, c = _diag(self.value("a")), _diag(self.value("c"))
        b_term = _diag(self.dalpha * self.shifted("b")) @ self.W
        d_term = self.S @ _diag(self.shifted("d") * self.dalpha) @ self.W
        return a + sign * g * b_term - self.S @ c - sign * g * d_term + self.K_transposed

    # 2x2 systems

    def symbol_blocks(self, m):
        """Multiplication by a per-node 2x2 matrix field as a 2N x 2N operator."""
        return np.block([[_diag(m[:, 0, 0]), _diag(m[:, 0, 1])],
                         [_diag(m[:, 1, 0]), _diag(m[:, 1, 1])]])

    @cached_property
    def fields(self):
        return build_system_fields(self.coeffs, self.shift)

    @cached_property
    def S1(self):
        z = self._zero
        return np.block([[self.S, z], [z, self.S]])

    @cached_property
    def compact_part(self):
        """D1 (= T): everything in the system beyond P I + Q S."""
        g = self.gamma
        defect = self.WSW - g * self.S
        d, c_al = _diag(self.value("d")), _diag(self.shifted("c"))
        return np.block([[self.K, d @ defect],
                         [self._zero, c_al @ defect + g * self.K_alpha]])

    def system_PQ(self):
        f = self.fields
        return self.symbol_blocks(f.P) + self.symbol_blocks(f.Q) @ self.S1 + self.compact_part

    def system_CD(self):
        f = self.fields
        eye2 = np.eye(2 * self.n)
        p1 = 0.5 * (eye2 + self.S1)
        q1 = 0.5 * (eye2 - self.S1)
        return self.symbol_blocks(f.C) @ p1 + self.symbol_blocks(f.D) @ q1 + self.compact_part

    def system_direct(self):
        """The 2x2 system written out row by row, with no P/Q bookkeeping."""
        g = self.gamma
        a, b, c, d = (_diag(self.value(k)) for k in "abcd")
        a_al, b_al, c_al, d_al = (_diag(self.shifted(k)) for k in "abcd")
        return np.block([
            [a + c @ self.S + self.K, b + d @ self.WSW],
            [b_al + d_al @ self.S, a_al + c_al @ self.WSW + g * self.K_alpha],
        ])

    def system_union(self):
        g = self.gamma
        a, b, c, d = (_diag(self.value(k)) for k in "abcd")
        a_al, b_al, c_al, d_al = (_diag(self.shifted(k)) for k in "abcd")
        ap = _diag(self.dalpha)
        # (1/pi i) int f(tau) w(tau) / (alpha(tau) - alpha(t)) dtau = gamma W S alpha' W f w
        shifted_cauchy = ap @ self.W @ self.S @ ap @ self.W
        return np.block([
            [a - self.S @ c + self.K_transposed, b_al - self.S @ d_al],
            [b - shifted_cauchy @ d, a_al - shifted_cauchy @ c_al + g * ap @ self.K_transposed_alpha],
        ])

    def grid_matrix(self, kind):
        kind = OperatorKind(kind)
        return {
            OperatorKind.M: lambda: self.scalar_equation(1),
            OperatorKind.K_accomp: lambda: self.scalar_equation(-1),
            OperatorKind.M_union: lambda: self.scalar_union(1),
            OperatorKind.K_union: lambda: self.scalar_union(-1),
            OperatorKind.L_system: self.system_PQ,
            OperatorKind.L_system_CD: self.system_CD,
            OperatorKind.L_union_system: self.system_union,
        }[kind]()

    def trial(self, modes, system=False):
        e = self.grid.trial_basis(modes)
        if not system:
            return e
        z = np.zeros_like(e)
        return np.block([[e, z], [z, e]])


def assemble_operator(coeffs, kind, modes, mode=None, ops=None):
    """Rectangular matrix of ``kind`` from trial Laurent coefficients to node values."""
    kind = OperatorKind(kind)
    check_resolution(coeffs.grid, modes)
    ops = GridOperators(coeffs, mode) if ops is None else ops
    system = kind.is_system
    matrix = ops.grid_matrix(kind) @ ops.trial(modes, system)
    return OperatorMatrix(matrix, modes, coeffs.grid, "system" if system else "scalar")
