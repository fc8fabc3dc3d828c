import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pwcycle.errors import DegenerateError, NoIntersection
from pwcycle.model import RaySaddle, SaddleSpec
from pwcycle.saddle_geometry import (analyze_saddle, separatrices_cross_axis_opposite,
                                     separatrix_ray_intersections)

# equilibria and axis hits solved exactly with sympy, frozen here
_FROZEN = [
    ((-1, 1, 2, 3, 0), 2.0, -1.0, (-1.7320508075688772935, 1.7320508075688772935)),
    ((1, -1, -2, -3, -1), 7 / 3, -2 / 3, (-1.5207259421636901758, 2.5207259421636901758)),
    ((0.5, 2, -3, 1, 2.5), 4 / 11, -13 / 22, (-1.1176009551408139124, -0.54906571152585275427)),
]


@pytest.mark.parametrize("params,x0,y0,hits", _FROZEN)
def test_matches_exact_solution(params, x0, y0, hits):
    g = analyze_saddle(SaddleSpec(*params))
    assert g.x0 == pytest.approx(x0, abs=1e-12)
    assert g.y0 == pytest.approx(y0, abs=1e-12)
    assert sorted((g.A, g.B)) == pytest.approx(sorted(hits), abs=1e-12)


def test_reference_saddle():
    g = analyze_saddle(SaddleSpec(-1, 1, 2, 3, 0))
    assert (g.x0, g.y0) == pytest.approx((2.0, -1.0), abs=1e-12)
    assert g.A == pytest.approx(math.sqrt(3), abs=1e-12)
    assert g.B == pytest.approx(-math.sqrt(3), abs=1e-12)
    assert g.ordered
    assert separatrices_cross_axis_opposite(SaddleSpec(-1, 1, 2, 3, 0))


_coef = st.floats(-4, 4, allow_nan=False)


@settings(max_examples=150, deadline=None)
@given(_coef, _coef, _coef, _coef, _coef)
def test_separatrices_are_eigenlines(al, be, de, ga, mu):
    if al * de - be * be > -1e-2 or abs(de) < 1e-2:
        return
    s = SaddleSpec(al, be, de, ga, mu)
    g = analyze_saddle(s)
    M = np.array(s.as_affine().matrix)
    assert np.allclose(M @ np.array([g.x0, g.y0]) + np.array([s.mu, s.gamma]), 0, atol=1e-9 * (1 + abs(g.x0) + abs(g.y0)))
    # each axis hit lies on a line through the equilibrium along an eigenvector
    _, vec = np.linalg.eig(M)
    for hit in (g.A, g.B):
        d = np.array([0.0 - g.x0, hit - g.y0])
        if np.linalg.norm(d) < 1e-9:
            continue
        cross = [abs(d[0] * v[1] - d[1] * v[0]) / np.linalg.norm(d) for v in vec.T.real]
        assert min(cross) < 1e-7
    # and the Hamiltonian takes the separatrix level there
    h0 = s.integral(g.x0, g.y0)
    for hit in (g.A, g.B):
        assert s.integral(0.0, hit) == pytest.approx(h0, abs=1e-7 * (1 + abs(h0) + hit * hit))


def test_vertical_separatrix_without_delta():
    g = analyze_saddle(SaddleSpec(1, 1, 0, 1, 1))
    assert g.vertical and not g.complete
    assert g.A is None and g.B is None
    with pytest.raises(DegenerateError):
        separatrices_cross_axis_opposite(SaddleSpec(1, 1, 0, 1, 1))


def test_degenerate_saddle_rejected():
    with pytest.raises(DegenerateError):
        analyze_saddle(SaddleSpec(-1, -1, -1, -1, 0, allow_degenerate=True))


def test_ray_intersections_right_angle():
    r = separatrix_ray_intersections(RaySaddle(-0.5, 1, 0), math.pi / 2)
    assert r.unstable == pytest.approx((0.0, 1.0), abs=1e-15)
    assert r.stable == pytest.approx((0.0, -1.0), abs=1e-15)


def test_ray_intersections_general_angle():
    phi = math.pi / 3
    s = RaySaddle(-0.5, 2, 0.5)
    r = separatrix_ray_intersections(s, phi)
    for p, slope, ang in ((r.unstable, -1, phi), (r.stable, 1, -phi)):
        assert math.atan2(p[1], p[0]) == pytest.approx(ang)
        assert p[1] - s.beta == pytest.approx(slope * (p[0] - s.alpha))


def test_ray_intersections_missing():
    with pytest.raises(NoIntersection):
        separatrix_ray_intersections(RaySaddle(-0.5, -3, 0), math.pi / 2)
    with pytest.raises(ValueError):
        separatrix_ray_intersections(RaySaddle(-0.5, 1, 0), 2.0)
