import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from carleman import (CoefficientSet, Contour, GridOperators, assemble_operator, build_regularizer,
                      build_system_fields, contour_sample, index_report, induce_shift,
                      noether_check, null_count, winding_number)
from carleman.errors import ParityError, ResolutionError, SingularNodeError
from carleman.shift_system import SystemFields


def circle(n):
    return contour_sample(Contour.unit_circle(), n)


def problem(n, kind, **coeffs):
    g = circle(n)
    s = induce_shift(g.contour, kind, g)
    t = g.nodes
    vals = {k: v(t) if callable(v) else v for k, v in coeffs.items()}
    return CoefficientSet.from_values(g, s, **vals)


@pytest.mark.parametrize("k", [-3, -1, 0, 2, 5])
def test_winding_of_monomials(k):
    t = circle(64).nodes
    w, jump = winding_number(t ** float(k))
    assert w == k
    assert jump == pytest.approx(2 * np.pi * abs(k) / 64)


def test_winding_rejects_zero():
    t = circle(64).nodes
    with pytest.raises(ResolutionError):
        winding_number(t - 1)


def test_winding_rejects_coarse_sampling():
    t = circle(8).nodes
    with pytest.raises(ResolutionError):
        winding_number(t ** 4.0)


points = st.one_of(
    st.tuples(st.floats(0.0, 0.6), st.floats(0, 2 * np.pi)),
    st.tuples(st.floats(1.6, 3.0), st.floats(0, 2 * np.pi)),
)


def rational(t, zeros, poles):
    out = np.ones_like(t)
    for r, a in zeros:
        out = out * (t - r * np.exp(1j * a))
    for r, a in poles:
        out = out / (t - r * np.exp(1j * a))
    return out


@settings(max_examples=60, deadline=None)
@given(st.lists(points, max_size=4), st.lists(points, max_size=4),
       st.lists(points, max_size=3), st.lists(points, max_size=3))
def test_winding_matches_argument_principle(z1, p1, z2, p2):
    t = circle(512).nodes
    f, g = rational(t, z1, p1), rational(t, z2, p2)

    def inside(pts):
        return sum(1 for r, _ in pts if r < 1)

    try:
        wf, _ = winding_number(f)
        wg, _ = winding_number(g)
        wfg, _ = winding_number(f * g)
    except ResolutionError:
        assume(False)
    assert wf == inside(z1) - inside(p1)
    assert wg == inside(z2) - inside(p2)
    assert wfg == wf + wg


def test_noether_trivial():
    rep = noether_check(build_system_fields(problem(64, "antipodal", a=1)))
    assert rep.noetherian
    assert rep.min_abs == {"delta1": 1.0, "delta2": 1.0}


def test_noether_violated_names_node():
    co = problem(64, "antipodal", a=lambda t: t - 1)
    rep = noether_check(build_system_fields(co))
    assert rep.verdict == "violated"
    nodes = rep.violating_nodes(co.grid)
    assert nodes["delta1"]["theta"] == 0.0


def test_noether_inconclusive_band():
    co = problem(64, "antipodal", a=lambda t: t - (1 + 5e-9))
    assert noether_check(build_system_fields(co)).verdict == "inconclusive"


def test_noether_reflection_uses_delta():
    co = problem(64, "reflection", a=lambda t: (t - 1) / 2, c=lambda t: (t + 1) / 2)
    rep = noether_check(build_system_fields(co))
    assert rep.noetherian and set(rep.min_abs) == {"delta"}


def test_index_negative_quotient():
    co = problem(128, "antipodal", a=lambda t: (1 + 1 / t) / 2, c=lambda t: (1 - 1 / t) / 2)
    rep = index_report(build_system_fields(co))
    assert rep.windings["delta1/delta2"] == -2
    assert (rep.ind_M, rep.ind_L, rep.gamma) == (-1, -2, 1)


def test_index_reflection():
    co = problem(128, "reflection", a=lambda t: (t - 1) / 2, c=lambda t: (t + 1) / 2)
    rep = index_report(build_system_fields(co))
    assert (rep.ind_M, rep.ind_L, rep.gamma) == (-1, -2, -1)


def test_index_parity_error():
    g = circle(64)
    s = induce_shift(g.contour, "antipodal", g)
    base = build_system_fields(CoefficientSet.from_values(g, s, a=1))
    odd = SystemFields(g, s, 1, base.P, base.Q, base.derived,
                       {"delta1": g.nodes, "delta2": np.ones(64, complex)})
    with pytest.raises(ParityError):
        index_report(odd)


def test_index_resolution_error_on_coarse_grid():
    co = problem(8, "antipodal", a=lambda t: (1 + t ** 2) / 2, c=lambda t: (1 - t ** 2) / 2)
    with pytest.raises(ResolutionError):
        index_report(build_system_fields(co))


def test_identity_shift_decouples():
    co = problem(128, "identity", a=lambda t: (1 + t) / 2, c=lambda t: (1 - t) / 2,
                 b=0.1, d=lambda t: 0.1 * t)
    rep = index_report(build_system_fields(co))
    assert rep.degenerate_shift
    t = co.grid.nodes
    # with W = I the equation is (a + b) + (c + d) S, a Riemann problem for ((a+b)-(c+d))/((a+b)+(c+d))
    kappa, _ = winding_number(((co.a.values + co.b.values) - (co.c.values + co.d.values))
                              / ((co.a.values + co.b.values) + (co.c.values + co.d.values)))
    assert rep.ind_M == kappa
    num = (null_count(assemble_operator(co, "M", 16)).dimension
           - null_count(assemble_operator(co, "M_union", 16)).dimension)
    assert num == rep.ind_M
    num_k = (null_count(assemble_operator(co, "K_accomp", 16)).dimension
             - null_count(assemble_operator(co, "K_union", 16)).dimension)
    assert num_k == rep.ind_K


def test_regularizer_inverts_characteristic_part():
    co = problem(64, "antipodal", a=lambda t: (3 + t ** 2) / 4, b=lambda t: (1 - t ** 2) / 4,
                 c=lambda t: (1 - t ** 2) / 4, d=lambda t: (t ** 2 - 1) / 4)
    ops = GridOperators(co)
    R = build_regularizer(ops.fields, ops.S)
    assert R.shape == (128, 128)
    E2 = ops.trial(8, system=True)
    s = np.linalg.svd((R @ ops.system_CD() - np.eye(128)) @ E2, compute_uv=False)
    assert np.sum(s > 1e-8 * max(1.0, s[0])) <= 10


def test_regularizer_singular_symbol():
    co = problem(64, "antipodal", a=lambda t: t - 1)
    with pytest.raises(SingularNodeError):
        build_regularizer(build_system_fields(co))
