"""Numerical tolerances shared by all modules."""
from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    tol_shift: float = 1e-10      # involution check, relative to contour diameter
    tol_geom: float = 1e-12       # vanishing tangents / coincident nodes
    tol_div: float = 1e-8         # pointwise division guard
    tol_det: float = 1e-8         # determinant fields, relative to their max modulus
    rel_factor: float = 1e-8      # rank threshold relative to sigma_max
    abs_floor: float = 1e-12      # absolute rank threshold
    gap_min: float = 1e3          # required singular value gap at the rank cut
    tol_solve: float = 1e-8       # least-squares residual / solvability conditions
    phase_margin: float = 0.2     # radians below pi allowed for one phase step
    tol_class: float = 1e-6       # null-basis symmetrization residuals

    def override(self, **kw):
        known = {f.name for f in fields(self)}
        bad = set(kw) - known
        if bad:
            raise KeyError(f"unknown tolerance(s): {', '.join(sorted(bad))}")
        return replace(self, **{k: float(v) for k, v in kw.items()})

    def as_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_TOLERANCES = Tolerances()
