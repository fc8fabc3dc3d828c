import math

import pytest
from hypothesis import given, settings, strategies as st

from pwcycle import arcs
from pwcycle.integrate import Forward, run
from pwcycle.model import CenterSpec, FrozenRadial, RaySaddle, SaddleSpec, ray_system, two_zone

_ANNULUS_SADDLE = SaddleSpec(-1, -1, -1, -1, 0, allow_degenerate=True)


@pytest.mark.parametrize("center", [CenterSpec("F1"), CenterSpec("F2"), CenterSpec("F3", 1),
                                    CenterSpec("F4", 1), CenterSpec("F5", 1, 1)])
@pytest.mark.parametrize("y", [0.2, 0.9, 2.5])
def test_center_transit_agrees_with_integrator(center, y):
    sys_ = two_zone(center, _ANNULUS_SADDLE)
    arc = arcs.zone_transit(sys_, "left", (0.0, -y))
    tr = run(sys_, (0.0, -y), Forward, max_events=1, start_zone="left", record=False)
    assert arc.ok and tr.completed
    assert arc.exit[1] == pytest.approx(tr.events[0].point[1], abs=1e-8)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.05, 3.0))
def test_saddle_transit_agrees_with_integrator(y):
    sys_ = two_zone(CenterSpec("I2"), SaddleSpec(-1, 1, 2, 3, 0))
    arc = arcs.zone_transit(sys_, "right", (0.0, -y))
    tr = run(sys_, (0.0, -y), Forward, max_events=1, start_zone="right", record=False)
    if arc.ok:
        assert tr.completed
        assert arc.exit[1] == pytest.approx(tr.events[0].point[1], abs=1e-7)
    else:
        assert not (tr.completed and tr.events)


def test_saddle_transit_symmetric_about_equilibrium_level():
    # mu = 0: the right arc maps y to -y (H(0, y) is even in y)
    sys_ = two_zone(CenterSpec("I2"), SaddleSpec(-1, 1, 2, 3, 0))
    arc = arcs.zone_transit(sys_, "right", (0.0, -1.0))
    assert arc.ok and arc.exit[1] == pytest.approx(1.0, abs=1e-12)


def test_affine_flow_matches_closed_form():
    s = SaddleSpec(-1, 1, 2, 3, 0)
    from pwcycle.integrate import flow_linear_saddle_exact
    p = arcs.affine_flow(s.as_affine(), (0.3, -0.4), 0.8)
    assert p == pytest.approx(flow_linear_saddle_exact(s, (0.3, -0.4), 0.8), abs=1e-13)


def test_polar_radius_orbits():
    i2 = CenterSpec("I2")
    r = arcs.polar_radius(i2, (0.0, 1.3))
    # ln r - cos^2 t is constant on I2 orbits
    for th in (0.3, 1.0, 2.2):
        assert math.log(r(th)) - math.cos(th) ** 2 == pytest.approx(math.log(1.3), abs=1e-12)
    assert arcs.polar_radius(i2, (0.0, 0.0)) is None
    i1 = arcs.polar_radius(CenterSpec("I1"), (0.0, 1.0))
    assert i1(0.7) == pytest.approx(1.0)


def test_i1_orbits_escape_above_threshold():
    sys_ = two_zone(CenterSpec("I1"), SaddleSpec(-1, 1, 2, 3, 0))
    thr = 1 / math.sqrt(1 - math.exp(-math.pi / 2))
    assert arcs.zone_transit(sys_, "left", (0.0, thr - 1e-3)).ok
    assert arcs.zone_transit(sys_, "left", (0.0, 0.5)).ok
    assert arcs.zone_transit(sys_, "left", (0.0, thr + 1e-3)).kind == arcs.ESCAPE


def test_frozen_radial_transit_is_a_mirror():
    sys_ = ray_system(RaySaddle(-0.5, 1, 0), FrozenRadial(1))
    arc = arcs.zone_transit(sys_, "outer", (0.0, 1.0))
    assert arc.ok and arc.exit == pytest.approx((0.0, -1.0), abs=1e-12)


def test_exact_first_return_closes_on_annulus():
    sys_ = two_zone(CenterSpec("F2"), _ANNULUS_SADDLE)
    tr = arcs.exact_first_return(sys_, "x=0", 1.5)
    assert tr.value == pytest.approx(1.5, abs=1e-9)
    assert len(tr.crossings) == 2


def test_exact_first_return_reports_sliding():
    sys_ = two_zone(CenterSpec("F2"), SaddleSpec(-1, 1, 2, 3, 0))
    tr = arcs.exact_first_return(sys_, "x=0", 1.0)
    assert tr.value is None and "transversal" in tr.reason
