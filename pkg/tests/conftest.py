import numpy as np
import pytest

from carleman import Contour, contour_sample, induce_shift
from carleman.corpus import load_corpus


def trig_poly(theta, degree, rng, scale=1.0):
    """Random complex trigonometric polynomial sampled at ``theta``."""
    n = np.arange(-degree, degree + 1)
    c = (rng.standard_normal(n.size) + 1j * rng.standard_normal(n.size)) * scale
    return np.exp(1j * np.outer(theta, n)) @ c


@pytest.fixture(scope="session")
def corpus():
    return load_corpus()


@pytest.fixture
def circle64():
    return contour_sample(Contour.unit_circle(), 64)


@pytest.fixture
def antipodal64(circle64):
    return induce_shift(circle64.contour, "antipodal", circle64)


@pytest.fixture
def reflection64(circle64):
    return induce_shift(circle64.contour, "reflection", circle64)


def random_coefficients(grid, shift, rng, degree=3, kernel=None):
    from carleman import CoefficientSet
    vals = {k: trig_poly(grid.theta, degree, rng, 0.5) for k in "abcdg"}
    return CoefficientSet.from_values(grid, shift, kernel=kernel, **vals)


def random_setup(seed, kind, contour=None, n=64, c=0.0, kernel=None):
    from carleman import Contour, contour_sample, induce_shift
    contour = Contour.unit_circle() if contour is None else contour
    grid = contour_sample(contour, n)
    shift = induce_shift(contour, kind, grid, c=c)
    return random_coefficients(grid, shift, np.random.default_rng(seed), kernel=kernel)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
