import math

import pytest

from pwcycle import analysis, catalog, portrait


def _svg(name, **kw):
    sys_ = catalog.get(name).system
    rep = analysis.solve(sys_) if catalog.get(name).analyzable else None
    return portrait.render(sys_, (-3, -3, 3, 3), "svg", report=rep, **kw)


def test_svg_is_deterministic():
    a = _svg("i2-saddle", orbits=4)
    b = _svg("i2-saddle", orbits=4)
    assert a == b
    assert a.startswith('<?xml version="1.0"')
    assert 'viewBox="-3 -3 6 6"' in a and 'scale(1,-1)' in a


def test_separatrix_passes_through_axis_hits():
    svg = _svg("i1-saddle", orbits=2)
    r3 = math.sqrt(3)
    for target in ((0.0, r3), (0.0, -r3)):
        best = min(math.hypot(x - target[0], y - target[1]) for line in portrait.polylines(svg) for x, y in line)
        assert best <= 2e-6


def test_zero_orbits_draws_only_the_frame():
    svg = _svg("i2-saddle", orbits=0)
    assert portrait.polylines(svg) == []
    assert svg.count("<line ") == 1
    assert svg.count("<circle ") == 2  # center and saddle


def test_csv_header_and_rows():
    csv = portrait.render(catalog.get("annulus-f2").system, (-2, -2, 2, 2), "csv", orbits=3)
    lines = csv.splitlines()
    assert lines[0] == "t,x,y,zone,curve,role"
    assert len(lines) > 10
    t, x, y, zone, curve, role = lines[1].split(",")
    float(t), float(x), float(y)
    assert role in ("orbit", "separatrix", "cycle")


def test_ray_portrait_has_two_rays():
    svg = _svg("ray-frozen", orbits=2)
    assert svg.count("<line ") == 2
    assert 'class="cycle"' in svg


def test_bad_box_and_format():
    sys_ = catalog.get("annulus-f1").system
    with pytest.raises(ValueError):
        portrait.render(sys_, (1, 0, 0, 1))
    with pytest.raises(ValueError):
        portrait.render(sys_, (-1, -1, 1, 1), "png", orbits=0)


def test_clip_segment():
    assert portrait._clip_segment((-5, 0), (5, 0), (-1, -1, 1, 1)) == ((-1, 0), (1, 0))
    assert portrait._clip_segment((-5, 3), (5, 3), (-1, -1, 1, 1)) is None
