import math

import numpy as np
import pytest

from crystal1d.errors import QuadratureNonconvergence
from crystal1d.quadrature import gk15, integrate


def test_gk15_is_exact_for_degree_22():
    # a 15-point Kronrod rule integrates polynomials up to degree 22 exactly
    k, _ = gk15(lambda x: x ** 22, -1.0, 1.0)
    assert k == pytest.approx(2.0 / 23.0, rel=1e-14)


@pytest.mark.parametrize("f, a, b, exact", [
    (np.exp, 0.0, 1.0, math.e - 1.0),
    (np.sin, 0.0, math.pi, 2.0),
    (np.sqrt, 0.0, 1.0, 2.0 / 3.0),
    (lambda x: 1.0 / (1.0 + x * x), -5.0, 5.0, 2.0 * math.atan(5.0)),
])
def test_smooth_and_endpoint_singular(f, a, b, exact):
    assert integrate(f, a, b, tol=1e-12) == pytest.approx(exact, abs=1e-10)


def test_reversed_limits_change_sign():
    assert integrate(np.exp, 1.0, 0.0) == pytest.approx(1.0 - math.e, abs=1e-12)


def test_jump_is_handled_by_cut_points():
    step = lambda x: np.where(x >= 0.3, 1.0, 0.0)
    assert integrate(step, 0.0, 1.0, points=[0.3]) == pytest.approx(0.7, abs=1e-14)


def test_depth_limit_raises():
    with pytest.raises(QuadratureNonconvergence):
        integrate(lambda x: np.sin(1.0 / np.maximum(np.abs(x), 1e-300)), 0.0, 1.0, tol=1e-15, max_depth=4)
