"""Noether conditions, winding numbers, analytic index formulas and the regularizer."""
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import ParityError, ResolutionError, SingularNodeError
from .singular_ops import OperatorMatrix, cauchy_grid_operator


def winding_number(samples, margin=None, tol=None):
    """Winding number of closed-loop samples about the origin.

    Returns ``(winding, max_phase_jump)``.  Each step's phase increment is
    taken on the principal branch; a step within ``margin`` of pi makes the
    branch ambiguous and raises :class:`ResolutionError` instead of guessing.
    """
    margin = DEFAULT_TOLERANCES.phase_margin if margin is None else margin
    tol = DEFAULT_TOLERANCES.tol_det if tol is None else tol
    z = np.asarray(samples, dtype=complex)
    mags = np.abs(z)
    if mags.max() == 0 or mags.min() < tol * mags.max():
        raise ResolutionError(f"samples pass within {mags.min():.3e} of zero; "
                              "winding number undefined")
    steps = np.angle(np.roll(z, -1) / z)
    jump = float(np.max(np.abs(steps)))
    if jump >= np.pi - margin:
        raise ResolutionError(f"phase jump {jump:.3f} rad between adjacent nodes; "
                              "increase the grid size")
    total = np.sum(steps) / (2 * np.pi)
    return int(np.rint(total)), jump


def _fields_for_check(fields):
    if fields.gamma == 1:
        return {"delta1": fields.named["delta1"], "delta2": fields.named["delta2"]}
    return {"delta": fields.named["delta"]}


@dataclass
class NoetherReport:
    gamma: int
    min_abs: dict
    argmin: dict
    verdict: str
    tol_det: float
    thresholds: dict = field(default_factory=dict)

    @property
    def noetherian(self):
        return self.verdict == "noetherian"

    def violating_nodes(self, grid):
        return {k: {"index": j, "theta": float(grid.theta[j]),
                    "t": [float(grid.nodes[j].real), float(grid.nodes[j].imag)]}
                for k, j in self.argmin.items()}


def noether_check(fields, tol_det=None):
    """Test the Noether conditions on the determinant fields.

    A field counts as vanishing when its minimum modulus drops below
    ``tol_det`` times its own maximum; the decade just below that threshold is
    reported as inconclusive.
    """
    tol_det = DEFAULT_TOLERANCES.tol_det if tol_det is None else tol_det
    min_abs, argmin, thresholds = {}, {}, {}
    verdict = "noetherian"
    for name, values in _fields_for_check(fields).items():
        mags = np.abs(values)
        j = int(np.argmin(mags))
        min_abs[name] = float(mags[j])
        argmin[name] = j
        thr = tol_det * float(mags.max())
        thresholds[name] = thr
        if mags.max() == 0 or mags[j] < thr / 10:
            verdict = "violated"
        elif mags[j] < thr and verdict == "noetherian":
            verdict = "inconclusive"
    return NoetherReport(fields.gamma, min_abs, argmin, verdict, tol_det, thresholds)


@dataclass
class IndexReport:
    gamma: int
    windings: dict
    ind_L: int
    ind_M: int
    ind_K: int
    even: bool
    max_phase_jump: float
    degenerate_shift: bool = False


def index_report(fields, margin=None, tol=None):
    """Analytic indices from the determinant fields.

    Ind L is the winding of det D / det C.  For an orientation-preserving
    shift Ind M is half the winding of delta1/delta2; for a reversing shift it
    is the winding of delta.  The identity shift has fixed points everywhere,
    so M and the accompanying operator decouple into shift-free equations and
    their indices are reported separately.
    """
    jumps = []

    def wind(values):
        w, j = winding_number(values, margin, tol)
        jumps.append(j)
        return w

    named = fields.named
    windings = {"det_D": wind(fields.det_D), "det_C": wind(fields.det_C)}
    ind_L = wind(fields.det_D / fields.det_C)
    even = True
    if fields.gamma == 1:
        windings["delta1"] = wind(named["delta1"])
        windings["delta2"] = wind(named["delta2"])
        quotient = wind(named["delta1"] / named["delta2"])
        windings["delta1/delta2"] = quotient
        even = quotient % 2 == 0
        if not fields.shift.fixed_point_free:
            der = fields.derived
            ind_M = wind((der.c1.values + der.d1.values) / (der.a1.values + der.b1.values))
            ind_K = wind((der.c1.values - der.d1.values) / (der.a1.values - der.b1.values))
            return IndexReport(1, windings, ind_L, ind_M, ind_K, even, max(jumps), True)
        if not even:
            raise ParityError(f"winding of delta1/delta2 is odd ({quotient})")
        ind_M = quotient // 2
    else:
        windings["delta"] = wind(named["delta"])
        windings["delta_alpha"] = wind(named["delta_alpha"])
        ind_M = windings["delta"]
    return IndexReport(fields.gamma, windings, ind_L, ind_M, ind_M, even, max(jumps))


def _invert_field(m, name, max_cond):
    cond = np.linalg.cond(m)
    if not np.all(np.isfinite(cond)) or cond.max() > max_cond:
        j = int(np.argmax(np.where(np.isfinite(cond), cond, np.inf)))
        raise SingularNodeError(f"{name}(t) is singular at node {j} (cond = {cond[j]:.3e})")
    return np.linalg.inv(m)


def build_regularizer(fields, S=None, max_cond=1e12):
    """Grid matrix of R = C^{-1} P1 + D^{-1} Q1 on the 2x2 system (2N x 2N)."""
    grid = fields.grid
    n = grid.n
    S = cauchy_grid_operator(grid) if S is None else S
    if isinstance(S, OperatorMatrix):
        raise TypeError("pass the N x N grid operator of S")
    c_inv = _invert_field(fields.C, "C", max_cond)
    d_inv = _invert_field(fields.D, "D", max_cond)
    eye = np.eye(n)
    p1 = 0.5 * (eye + S)
    q1 = 0.5 * (eye - S)
    blocks = [[c_inv[:, i, j][:, None] * p1 + d_inv[:, i, j][:, None] * q1 for j in range(2)]
              for i in range(2)]
    return np.block(blocks)
