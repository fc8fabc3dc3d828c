import math

import numpy as np
import pytest
from hypothesis import example, given, settings, strategies as st

from pwcycle import gtrig
from pwcycle.errors import DomainError
from pwcycle.gtrig import PolarKind
from pwcycle.integrate import IntegratorConfig, integrate_field
from pwcycle.model import CenterSpec

# 30-digit mpmath quadrature of 4 sqrt(n) int_0^1 (1 - x^(2n))^(-1/2) dx
_PERIODS = {1: 6.283185307179586437, 2: 7.4162987092054876235, 3: 8.4130926319527255168,
            4: 9.3087405697461549625}
# mpmath quadrature of 4 int_0^1 Sn^(p-1) Cs^q dCs with Sn = sqrt((1 - Cs^(2n))/n)
_MOMENTS = {
    (1, 2, 2): 0.78539816339744830962, (1, 4, 4): 0.14726215563702155805,
    (2, 0, 2): 3.3888523391759162962, (2, 2, 0): 2.4720995697351625579, (2, 2, 2): 0.67777046783518326929,
    (2, 4, 2): 0.2259234892783944231, (2, 4, 4): 0.096315567652019320438,
    (3, 2, 4): 0.32338869490372381687, (3, 4, 0): 0.63098194739645441753, (3, 4, 4): 0.069297577479369389329,
}


@pytest.mark.parametrize("n,T", sorted(_PERIODS.items()))
def test_period_closed_form(n, T):
    assert gtrig.period(n) == pytest.approx(T, rel=1e-14)


@pytest.mark.parametrize("key,val", sorted(_MOMENTS.items()))
def test_moment_closed_form(key, val):
    assert gtrig.moment(*key) == pytest.approx(val, rel=1e-13)


def test_odd_moments_vanish_and_validation():
    assert gtrig.moment(2, 1, 2) == 0.0
    assert gtrig.moment(2, 2, 3) == 0.0
    with pytest.raises(ValueError):
        gtrig.moment(2, -2, 0)
    with pytest.raises(ValueError):
        gtrig.period(0)


def test_n1_is_ordinary_trigonometry():
    ctx = gtrig.context(1)
    for th in np.linspace(0, 7, 23):
        c, s = gtrig.cs_sn(ctx, th)
        assert (c, s) == pytest.approx((math.cos(th), math.sin(th)), abs=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_identity_and_derivatives(n):
    ctx = gtrig.context(n)
    h = 1e-5
    for th in np.linspace(0.1, ctx.T - 0.1, 9):
        assert gtrig.identity_residual(ctx, th) <= 1e-12
        c0, s0 = gtrig.cs_sn(ctx, th - h)
        c1, s1 = gtrig.cs_sn(ctx, th + h)
        c, s = gtrig.cs_sn(ctx, th)
        assert (c1 - c0) / (2 * h) == pytest.approx(-s, abs=1e-8)
        assert (s1 - s0) / (2 * h) == pytest.approx(c ** (2 * n - 1), abs=1e-8)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_quarter_period_values(n):
    ctx = gtrig.context(n)
    c, s = gtrig.cs_sn(ctx, ctx.T / 4)
    assert c == pytest.approx(0.0, abs=1e-12)
    assert s == pytest.approx(1 / math.sqrt(n), abs=1e-12)
    assert gtrig.cs_sn(ctx, ctx.T / 2) == pytest.approx((-1.0, 0.0), abs=1e-12)
    assert gtrig.cs_sn(ctx, 3.0 + ctx.T) == pytest.approx(gtrig.cs_sn(ctx, 3.0), abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.floats(0.2, 3.0), st.floats(-3.0, 3.0))
@example(1, 1.0, -5.960464477539063e-08)  # near Cs = 1
def test_polar_round_trip(n, R, th):
    ctx = gtrig.context(n)
    x, y = gtrig.from_polar(ctx, R, th)
    R2, th2 = gtrig.to_polar(ctx, x, y)
    assert R2 == pytest.approx(R, rel=1e-10)
    assert gtrig.from_polar(ctx, R2, th2) == pytest.approx((x, y), abs=1e-9 * max(1.0, R**n))


@pytest.mark.parametrize("n", [2, 3])
def test_ode_period_and_radius(n):
    assert gtrig.ode_period(n) == pytest.approx(gtrig.period(n), abs=1e-9)
    assert gtrig.radius_drift(n, revolutions=3, R0=1.5) <= 1e-9


def test_moment_quadrature():
    for n in (1, 2, 3):
        ctx = gtrig.context(n)
        for p in (0, 2, 4):
            for q in (0, 2, 4):
                assert gtrig.moment_quadrature(ctx, p, q, 1024) == pytest.approx(gtrig.moment(n, p, q), abs=1e-9)


@pytest.mark.parametrize("kind,center,p0", [(PolarKind.I1, "I1", (0.0, 1.05)), (PolarKind.I1, "I1", (0.0, 0.6)),
                                            (PolarKind.I2, "I2", (0.0, 1.4))])
def test_polar_integral_along_orbits(kind, center, p0):
    cfg = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)
    _, _, _, pts = integrate_field(CenterSpec(center), p0, 1.0, cfg)
    assert gtrig.polar_integral_residual(kind, [(x, y) for _, x, y in pts]) <= 1e-9


def test_polar_rhs_matches_field():
    for kind, name in ((PolarKind.I1, "I1"), (PolarKind.I2, "I2")):
        c = CenterSpec(name)
        r, th = 1.3, 0.7
        x, y = r * math.cos(th), r * math.sin(th)
        fx, fy = c.field(x, y)
        rdot = (x * fx + y * fy) / r
        thdot = (x * fy - y * fx) / (r * r)
        assert gtrig.polar_rhs(kind, r, th) == pytest.approx(rdot / thdot, rel=1e-12)
    with pytest.raises(DomainError):
        gtrig.polar_first_integral(PolarKind.I2, 0.0, 0.0)
