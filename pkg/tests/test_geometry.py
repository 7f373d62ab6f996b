import numpy as np
import pytest

from carleman import Contour, SampledFunction, compose_shift, contour_sample, induce_shift
from carleman.errors import DegenerateParametrizationError, InvolutionError, SelfIntersectionError


def test_unit_circle_four_nodes():
    g = contour_sample(Contour.unit_circle(), 4)
    assert np.allclose(g.nodes, [1, 1j, -1, -1j], atol=1e-15)
    assert np.allclose(g.tangents, [1j, -1, -1j, 1], atol=1e-15)
    assert np.allclose(g.weights, np.pi / 2)


def test_ellipse_first_node():
    g = contour_sample(Contour.ellipse(2.0, 1.0), 8)
    assert g.nodes[0] == pytest.approx(2.0)
    assert g.tangents[0] == pytest.approx(1j)


def test_weights_sum_to_two_pi():
    g = contour_sample(Contour.ellipse(1.5, 0.7, 0.2 + 0.1j), 48)
    assert np.sum(g.weights) == pytest.approx(2 * np.pi)
    assert np.all(np.abs(g.tangents) > 0)


def test_degenerate_slit_rejected():
    with pytest.raises(DegenerateParametrizationError):
        contour_sample(Contour.fourier({1: 1.0, -1: 1.0}), 8)


def test_doubly_traced_circle_rejected():
    # z = exp(2 i theta) visits every node twice
    with pytest.raises(SelfIntersectionError):
        contour_sample(Contour.fourier({2: 1.0}), 16)


def test_odd_grid_rejected():
    with pytest.raises(ValueError):
        contour_sample(Contour.unit_circle(), 7)


def test_antipodal_on_circle(circle64, antipodal64):
    s = antipodal64
    assert s.gamma == 1
    assert np.allclose(s.alpha, -circle64.nodes, atol=1e-14)
    assert np.allclose(s.dalpha, -1, atol=1e-14)
    assert s.fixed_point_free


def test_reflection_on_circle(circle64, reflection64):
    s, t = reflection64, circle64.nodes
    assert s.gamma == -1
    assert np.allclose(s.alpha, 1 / t, atol=1e-14)
    assert np.allclose(s.dalpha, -t ** -2.0, atol=1e-13)


def test_identity_shift(circle64):
    s = induce_shift(circle64.contour, "identity", circle64)
    assert s.gamma == 1
    assert np.allclose(s.alpha, circle64.nodes)
    assert not s.fixed_point_free


def test_non_involution_custom_rejected(circle64):
    with pytest.raises(InvolutionError) as info:
        induce_shift(circle64.contour, "custom", circle64,
                     sigma_samples=circle64.theta + np.pi / 3)
    assert info.value.max_deviation > 1.0


def test_custom_matches_builtin(circle64):
    s = induce_shift(circle64.contour, "custom", circle64, sigma_samples=-circle64.theta)
    assert s.gamma == -1
    assert np.allclose(s.alpha, 1 / circle64.nodes, atol=1e-12)


@pytest.mark.filterwarnings("ignore::carleman.errors.BandLimitWarning")
@pytest.mark.parametrize("kind,c", [("antipodal", 0.0), ("reflection", 0.0), ("reflection", 0.4)])
def test_involution_and_orientation_on_ellipse(kind, c):
    contour = Contour.ellipse(2.0, 1.0)
    g = contour_sample(contour, 64)
    s = induce_shift(contour, kind, g, c=c)
    back = contour.z(s.sigma_at(s.sigma))
    assert np.max(np.abs(back - g.nodes)) <= 1e-10 * g.diameter
    assert s.gamma == (1 if kind == "antipodal" else -1)
    # chain rule on alpha(alpha(t)) = t: alpha'(t) alpha'(alpha(t)) = 1
    d_at_alpha = compose_shift(SampledFunction(g, s.dalpha), s).values
    assert np.max(np.abs(s.dalpha * d_at_alpha - 1)) < 1e-6


@pytest.mark.parametrize("kind,c", [("antipodal", 0.0), ("reflection", 0.3)])
def test_refinement_stability(kind, c):
    contour = Contour.ellipse(1.7, 1.1)
    coarse = induce_shift(contour, kind, contour_sample(contour, 32), c=c)
    fine = induce_shift(contour, kind, contour_sample(contour, 64), c=c)
    assert np.max(np.abs(fine.dalpha[::2] - coarse.dalpha)) < 1e-12
