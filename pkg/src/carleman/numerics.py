"""Rank-revealing linear algebra on rectangular operator discretizations."""
import warnings
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import InconclusiveIndexError, UnreliableGapWarning
from .singular_ops import OperatorMatrix


def _matrix(a):
    return a.matrix if isinstance(a, OperatorMatrix) else np.asarray(a)


@dataclass
class NullspaceReport:
    dimension: int
    singular_values: np.ndarray
    gap_ratio: float
    threshold: float
    basis: np.ndarray            # columns: orthonormal null vectors (trial coefficients)
    reliable: bool

    @property
    def sigma_max(self):
        return float(self.singular_values[0]) if self.singular_values.size else 0.0


@dataclass
class _Decomposition:
    u: np.ndarray
    s: np.ndarray
    vh: np.ndarray
    threshold: float


def _svd(a, tol):
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    threshold = max(tol.abs_floor, tol.rel_factor * (s[0] if s.size else 0.0))
    return _Decomposition(u, s, vh, threshold)


def null_count(a, tol=None, warn=True):
    """Count singular values below max(abs_floor, rel_factor * sigma_max).

    The gap ratio compares the smallest retained singular value with the
    largest discarded one (the threshold stands in for a missing side).
    """
    tol = DEFAULT_TOLERANCES if tol is None else tol
    m = _matrix(a)
    rows, cols = m.shape
    if rows < cols:
        raise ValueError(f"expected a tall matrix, got {m.shape}")
    dec = _svd(m, tol)
    s = dec.s
    dim = int(np.sum(s < dec.threshold))
    above = s[s >= dec.threshold]
    below = s[s < dec.threshold]
    top = above.min() if above.size else dec.threshold
    bottom = below.max() if below.size else dec.threshold
    gap = np.inf if bottom == 0 else float(top / bottom)
    reliable = gap >= tol.gap_min
    if not reliable and warn:
        warnings.warn(f"singular value gap {gap:.3g} at the rank cut is below {tol.gap_min:g}",
                      UnreliableGapWarning, stacklevel=2)
    basis = dec.vh[cols - dim:].conj().T if dim else np.zeros((cols, 0), dtype=complex)
    return NullspaceReport(dim, s, gap, dec.threshold, basis, reliable)


def numerical_index(a_m, a_union, tol=None):
    """dim ker M - dim ker M' from two independently assembled rectangular matrices."""
    ker = null_count(a_m, tol, warn=False)
    coker = null_count(a_union, tol, warn=False)
    if not (ker.reliable and coker.reliable):
        raise InconclusiveIndexError(
            f"unreliable null counts (gaps {ker.gap_ratio:.3g}, {coker.gap_ratio:.3g})")
    return ker.dimension - coker.dimension


@dataclass
class SolveResult:
    solution: np.ndarray
    residual: float
    conditions: np.ndarray
    solvable: bool
    residual_solvable: bool
    conditions_solvable: bool

    @property
    def classifications_agree(self):
        return self.residual_solvable == self.conditions_solvable


def contour_pairing(f, g, grid):
    """Trapezoid value of the closed-contour integral of f(t) g(t) dt."""
    return np.sum(f * g * grid.tangents * grid.weights)


def solve(a, g, union_kernel=None, tol=None):
    """Minimum-norm least squares for A x = g, plus the solvability conditions.

    ``g`` holds collocation values (stacked blocks for a system).  Each union
    kernel element psi_k contributes the condition int g psi_k dt, normalized
    by the Cauchy-Schwarz bound so that its modulus lies in [0, 1].
    """
    tol = DEFAULT_TOLERANCES if tol is None else tol
    m = _matrix(a)
    g = np.asarray(g, dtype=complex)
    dec = _svd(m, tol)
    k = int(np.sum(dec.s >= dec.threshold))
    coeffs = dec.u[:, :k].conj().T @ g
    x = dec.vh[:k].conj().T @ (coeffs / dec.s[:k])
    gnorm = np.linalg.norm(g)
    residual = float(np.linalg.norm(m @ x - g) / gnorm) if gnorm else 0.0

    conditions = np.zeros(0, dtype=complex)
    if union_kernel is not None and union_kernel.dimension and isinstance(a, OperatorMatrix):
        grid = a.grid
        blocks = 2 if a.structure == "system" else 1
        n = grid.n
        psi = a.embedding() @ union_kernel.basis        # node values of each kernel element
        w = np.tile(grid.weights, blocks)
        dt = np.tile(grid.tangents, blocks)
        gscale = np.sqrt(np.sum(np.abs(g) ** 2 * w))
        vals = []
        for col in psi.T:
            raw = sum(contour_pairing(g[i * n:(i + 1) * n], col[i * n:(i + 1) * n], grid)
                      for i in range(blocks))
            scale = gscale * np.sqrt(np.sum(np.abs(col * dt) ** 2 * w))
            vals.append(raw / scale if scale else 0.0)
        conditions = np.array(vals, dtype=complex)
    residual_ok = residual < tol.tol_solve
    conditions_ok = bool(np.all(np.abs(conditions) < tol.tol_solve))
    return SolveResult(x, residual, conditions, residual_ok and conditions_ok,
                       residual_ok, conditions_ok)


@dataclass
class CompactnessReport:
    j0: dict
    singular_values: np.ndarray
    compact: bool
    growth: dict = field(default_factory=dict)
    j0_fine: dict = field(default_factory=dict)


def _j0(s, eps, floor):
    if s.size == 0:
        return 1
    hit = np.nonzero(s < max(eps * s[0], floor))[0]
    return int(hit[0]) + 1 if hit.size else len(s)


def compactness_score(a, a_fine=None, eps=(1e-4, 1e-8), tol=None):
    """Decay diagnostics: j0(eps) = first (1-based) index with sigma_j < eps sigma_max.

    Singular values under ``abs_floor`` count as zero, so a matrix that is
    zero up to round-off has j0 = 1.  With ``a_fine`` (the same operator at
    doubled resolution) the growth factor j0(fine) / j0(coarse) is reported
    as well.  A spectrum that never drops below the cut reports j0 = its
    length and is flagged non-compact.
    """
    tol = DEFAULT_TOLERANCES if tol is None else tol
    s = np.linalg.svd(_matrix(a), compute_uv=False)
    j0 = {e: _j0(s, e, tol.abs_floor) for e in eps}
    cut = max(min(eps) * s[0], tol.abs_floor) if s.size else 0.0
    compact = bool(s.size == 0 or s[-1] < cut)
    report = CompactnessReport(j0, s, compact)
    if a_fine is not None:
        sf = np.linalg.svd(_matrix(a_fine), compute_uv=False)
        report.j0_fine = {e: _j0(sf, e, tol.abs_floor) for e in eps}
        report.growth = {e: report.j0_fine[e] / j0[e] for e in eps}
    return report
