"""Kernel of the shift-free 2x2 system splits into kernels of M and the accompanying operator.

Run with ``python3 demos/kernel_structure.py``.
"""
import numpy as np

from carleman.corpus import load_named
from carleman.verify import Workspace, run_suite

spec = load_named("antipodal_balanced")
ws = Workspace(spec)
n = ws.n
W = ws.ops.W

# null vectors of the system, as node values (rho1, rho2)
basis = ws.nullspace("L_system").basis
rho = ws.ops.trial(ws.m, system=True) @ basis
print("dim ker L =", basis.shape[1])

# symmetric part: rho2 = rho1 o alpha; anti-symmetric part: rho2 = -rho1 o alpha
sym = (rho + np.vstack([W @ rho[n:], W @ rho[:n]])) / 2
anti = rho - sym
M, K = ws.ops.scalar_equation(1), ws.ops.scalar_equation(-1)
for j in range(rho.shape[1]):
    print(f"vector {j}: |sym| = {np.linalg.norm(sym[:, j]):.3f}, |M sym_1| = "
          f"{np.linalg.norm(M @ sym[:n, j]):.1e}; |anti| = {np.linalg.norm(anti[:, j]):.3f}, "
          f"|K anti_1| = {np.linalg.norm(K @ anti[:n, j]):.1e}")

rep = run_suite(spec, "lemma1")
for c in rep.checks:
    print(f"{c.name:32s} {c.lhs} vs {c.rhs} -> {'ok' if c.passed else 'FAILED'}")
