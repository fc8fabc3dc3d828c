import math

import numpy as np
import pytest

from pwcycle.closing import (CrossingCandidate, close_ray_system, close_three_zone_nilpotent,
                             close_two_zone_degenerate, RayKind)
from pwcycle.errors import EmptyDomain
from pwcycle.model import CenterSpec, SaddleSpec, two_zone
from pwcycle.verify import (Monotonicity, half_map, return_map, scan_fixed_points, scan_return_map,
                            verify_annulus, verify_candidate, verify_report, verify_separatrix_cycle)

_ANNULUS = two_zone(CenterSpec("F2"), SaddleSpec(-1, -1, -1, -1, 0, allow_degenerate=True))
_I2 = two_zone(CenterSpec("I2"), SaddleSpec(-1, 1, 2, 3, 0))


def test_half_maps_of_an_even_center():
    ys = np.linspace(-2, -0.1, 12)
    left = half_map(_ANNULUS, "left", ys)
    for y, v in left.samples:
        assert v == pytest.approx(-y, abs=1e-9)
    assert left.monotonicity is Monotonicity.DECREASING
    assert left.domain == pytest.approx((-2, -0.1))


def test_half_map_forward_gaps():
    # forward time: the left zone is entered only at y < 0
    hm = half_map(_ANNULUS, "left", [-1.0, 1.0], direction="forward")
    assert [y for y, _ in hm.samples] == [-1.0]
    assert hm.gaps and hm.gaps[0][0] == 1.0


def test_empty_half_map():
    with pytest.raises(EmptyDomain):
        half_map(two_zone(CenterSpec("F2"), SaddleSpec(-1, 1, 2, 3, 0)), "left", [0.5, 1.0], direction="forward")


def test_annulus_scan_is_a_continuum():
    ys = np.linspace(-2, -0.1, 5)
    left, right = half_map(_ANNULUS, "left", ys), half_map(_ANNULUS, "right", -ys)
    scan = scan_fixed_points(left, right, 1e-2, (-2, -0.1))
    assert scan.count == 0
    assert scan.continuum and scan.continuum[0][0] == pytest.approx(-2)


def test_return_map_and_annulus_verdict():
    v, tr = return_map(_ANNULUS, "x=0", 1.3, record=True)
    assert v == pytest.approx(1.3, abs=1e-8)
    assert len(tr.events) == 2
    verdict = verify_annulus(_ANNULUS, "x=0", [0.2, 0.9, 2.0])
    assert verdict.confirmed and verdict.closure_error <= 1e-8


def test_scan_return_map_finds_isolated_zero():
    # frozen-radial ray system: the separatrix cycle at radius 1 is the only fixed point
    rep = close_ray_system(RayKind.FROZEN_RADIAL, (-0.5, 1, 0))
    scan = scan_return_map(rep.system, "ray+", 0.05, 3.0, 1e-2)
    assert scan.count == 1
    assert scan.zeros[0].y == pytest.approx(1.0, abs=1e-6)


def test_candidate_verification():
    s1 = [0.9759833808797085, 1.1189386238440155, -2.7421127602595465, 0.4176893839592619, 2.53145151832412]
    s2 = [0.11028917189679355, -0.6895491931078452, -2.424013318880711, -2.9866052347935814, -2.986294288613644]
    rep = close_three_zone_nilpotent(CenterSpec("F2"), SaddleSpec(*s1), SaddleSpec(*s2))
    verdict = verify_candidate(rep.system, rep.candidates[0])
    assert verdict.confirmed and verdict.closure_error <= 1e-6
    assert len(verdict.crossings) == 4
    # a perturbed candidate no longer closes
    bad = CrossingCandidate(tuple((s, v + 0.05) for s, v in rep.candidates[0].points))
    assert not verify_candidate(rep.system, bad).confirmed
    with pytest.raises(ValueError):
        verify_candidate(rep.system, CrossingCandidate(bad.points, residuals=(1.0,)))


def test_separatrix_cycle_verdicts():
    rep = close_two_zone_degenerate(CenterSpec("I2"), SaddleSpec(-1, 1, 2, 3, 0))
    v = verify_separatrix_cycle(rep.system, rep.separatrix_cycle)
    assert v.confirmed and max(v.landing_error, v.stable_gap, v.unstable_gap) <= 1e-6
    r3 = math.sqrt(3)
    off = CrossingCandidate((("x=0", r3 + 0.1), ("x=0", -r3 - 0.1)))
    assert not verify_separatrix_cycle(rep.system, off).confirmed


def test_verify_report_bundle():
    rep = close_two_zone_degenerate(CenterSpec("I2"), SaddleSpec(-1, 1, 2, 3, 0))
    out = verify_report(rep, annulus_samples=4, scan_resolution=0.05, scan_range=(-2, 2))
    assert out["annulus"].confirmed
    assert out["separatrix"].confirmed
    assert out["scan"].continuum
