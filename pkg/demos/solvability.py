"""Solvability of a shift equation with a nontrivial cokernel.

Run with ``python3 demos/solvability.py``.
"""
import numpy as np

from carleman import assemble_operator, null_count, solve
from carleman.corpus import load_named

# orientation-reversing shift alpha(t) = 1/t; Ind M = -1, so one condition on g
spec = load_named("reflection_m1")
co = spec.coefficients()
M = assemble_operator(co, "M", spec.modes)
union = null_count(assemble_operator(co, "M_union", spec.modes))
print("dim ker M' =", union.dimension)

rng = np.random.default_rng(0)
candidates = {
    "g = 1": co.g.values,
    "g = t^2": co.grid.nodes ** 2,
    "g in range": M.apply(rng.standard_normal(2 * spec.modes + 1)),
}
for label, g in candidates.items():
    res = solve(M, g, union)
    print(f"{label:12s} residual {res.residual:.1e}  |condition| "
          f"{np.abs(res.conditions).max():.1e}  solvable: {res.solvable}")
