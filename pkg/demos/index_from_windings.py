"""Index of a shift equation: winding numbers against SVD null counts.

Run with ``python3 demos/index_from_windings.py``.
"""
import numpy as np

from carleman import assemble_operator, index_report, null_count
from carleman.corpus import load_named
from carleman.shift_system import GridOperators

# %% a coupled problem with an antipodal shift (alpha(t) = -t)
spec = load_named("antipodal_coupled_p1")
print(spec.name, spec.expressions)

co = spec.coefficients()
ops = GridOperators(co)
fields = ops.fields

# %% the two determinant fields and their windings
rep = index_report(fields)
print("windings:", rep.windings)
print("Ind M (analytic):", rep.ind_M, " Ind L:", rep.ind_L)

# %% numerical index: two tall matrices, never one square one
for m, n in [(16, 128), (32, 256)]:
    s = spec.with_resolution(m, n)
    c = s.coefficients()
    ker = null_count(assemble_operator(c, "M", m))
    coker = null_count(assemble_operator(c, "M_union", m))
    print(f"m={m:3d} N={n:4d}  dim ker M = {ker.dimension}  dim ker M' = {coker.dimension}"
          f"  gap = {min(ker.gap_ratio, coker.gap_ratio):.1e}")

# %% the singular values that decided the count
sv = null_count(assemble_operator(co, "M", spec.modes)).singular_values
print("smallest singular values of M:", np.array2string(sv[-4:], precision=3))
