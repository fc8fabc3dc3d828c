"""Generalized trigonometric functions and polar first integrals.

Cs, Sn solve (Cs', Sn') = (-Sn, Cs^(2n-1)) with Cs(0) = 1, Sn(0) = 0, so
Cs^(2n) + n Sn^2 = 1.  They are tabulated once per n by the package's
Runge-Kutta kernel and evaluated by quintic Hermite interpolation, using
the ODE itself for the first and second derivatives at the nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .integrate import IntegratorConfig, Status, Trajectory, integrate_field
from .model import K_POWER

_TABLE_CFG = IntegratorConfig(rel_tol=1e-14, abs_tol=1e-16, event_tol=1e-15)


def period(n: int) -> float:
    """Fundamental period 2 sqrt(pi/n) Gamma(1/(2n)) / Gamma((n+1)/(2n))."""
    n = _check_n(n)
    return 2 * math.sqrt(math.pi / n) * math.gamma(1 / (2 * n)) / math.gamma((n + 1) / (2 * n))


def moment(n: int, p: int, q: int) -> float:
    """Integral of Sn^p Cs^q over one period."""
    n = _check_n(n)
    if p < 0 or q < 0 or int(p) != p or int(q) != q:
        raise ValueError("p and q must be nonnegative integers")
    if p % 2 or q % 2:
        return 0.0
    a, b = (p + 1) / 2, (q + 1) / (2 * n)
    return 2 / math.sqrt(n ** (p + 1)) * math.gamma(a) * math.gamma(b) / math.gamma(a + b)


def _check_n(n) -> int:
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    return int(n)


class _PowerCenter:
    """(x', y') = (-y, x^(2n-1)), the kernel's power-center field."""

    def __init__(self, n: int):
        self.n = n

    def field(self, x, y):
        return -y, x ** (2 * self.n - 1)

    def kernel_spec(self):
        return K_POWER, (float(self.n),)


@dataclass(frozen=True)
class GTrigContext:
    n: int
    T: float
    nodes: int = 2048
    tables: Tuple[np.ndarray, np.ndarray, np.ndarray] = field(default=None, repr=False, compare=False)

    @classmethod
    def build(cls, n: int, nodes: int = 2048) -> "GTrigContext":
        n = _check_n(n)
        T = period(n)
        th = np.linspace(0.0, T, nodes + 1)
        cs = np.empty(nodes + 1)
        sn = np.empty(nodes + 1)
        cs[0], sn[0] = 1.0, 0.0
        fld = _PowerCenter(n)
        x, y = 1.0, 0.0
        h = T / nodes
        for k in range(nodes):
            st, _, (x, y), _ = integrate_field(fld, (x, y), h, _TABLE_CFG, record=False)
            if st is not Status.TIME_LIMIT:
                raise RuntimeError(f"table integration stopped early: {st.value}")
            cs[k + 1], sn[k + 1] = x, y
        return cls(n, T, nodes, (th, cs, sn))


@lru_cache(maxsize=16)
def context(n: int) -> GTrigContext:
    return GTrigContext.build(n)


def _hermite5(h, t, f0, d0, s0, f1, d1, s1):
    # quintic Hermite on [0, h] with values, first and second derivatives at both ends
    u = t / h
    u2, u3 = u * u, u * u * u
    u4, u5 = u3 * u, u3 * u2
    h00 = 1 - 10 * u3 + 15 * u4 - 6 * u5
    h10 = u - 6 * u3 + 8 * u4 - 3 * u5
    h20 = 0.5 * (u2 - 3 * u3 + 3 * u4 - u5)
    h01 = 10 * u3 - 15 * u4 + 6 * u5
    h11 = -4 * u3 + 7 * u4 - 3 * u5
    h21 = 0.5 * (u3 - 2 * u4 + u5)
    return h00 * f0 + h * h10 * d0 + h * h * h20 * s0 + h01 * f1 + h * h11 * d1 + h * h * h21 * s1


def cs_sn(ctx: GTrigContext, theta: float) -> Tuple[float, float]:
    """(Cs(theta), Sn(theta)); theta is reduced modulo the period."""
    th, cs, sn = ctx.tables
    t = math.fmod(float(theta), ctx.T)
    if t < 0:
        t += ctx.T
    h = ctx.T / ctx.nodes
    k = min(int(t / h), ctx.nodes - 1)
    m = 2 * ctx.n - 1
    c0, c1, s0, s1 = cs[k], cs[k + 1], sn[k], sn[k + 1]
    # Cs' = -Sn, Cs'' = -Cs^(2n-1); Sn' = Cs^(2n-1), Sn'' = -(2n-1) Cs^(2n-2) Sn
    dc0, dc1 = -s0, -s1
    ddc0, ddc1 = -c0**m, -c1**m
    ds0, ds1 = c0**m, c1**m
    dds0 = -m * c0 ** (m - 1) * s0
    dds1 = -m * c1 ** (m - 1) * s1
    dt = t - th[k]
    return (float(_hermite5(h, dt, c0, dc0, ddc0, c1, dc1, ddc1)),
            float(_hermite5(h, dt, s0, ds0, dds0, s1, ds1, dds1)))


def identity_residual(ctx: GTrigContext, theta: float) -> float:
    c, s = cs_sn(ctx, theta)
    return abs(c ** (2 * ctx.n) + ctx.n * s * s - 1)


def to_polar(ctx: GTrigContext, x: float, y: float) -> Tuple[float, float]:
    """Generalized polar coordinates (R, theta) with x = R Cs(theta), y = R^n Sn(theta)."""
    n = ctx.n
    R = (x ** (2 * n) + n * y * y) ** (1 / (2 * n))
    if R == 0:
        return 0.0, 0.0
    c = max(-1.0, min(1.0, x / R))
    T = ctx.T
    if abs(c) <= 0.5:
        # Cs decreases from 1 to -1 on [0, T/2] (Sn >= 0) and increases on [T/2, T]
        lo, hi = (0.0, T / 2) if y >= 0 else (T / 2, T)
        k, target = 0, c
    else:
        # near Cs = +-1 invert Sn instead: increasing on [-T/4, T/4], decreasing on [T/4, 3T/4]
        lo, hi = (-T / 4, T / 4) if c > 0 else (T / 4, 3 * T / 4)
        k, target = 1, y / R ** n

    def f(t):
        return cs_sn(ctx, t)[k] - target

    flo, fhi = f(lo), f(hi)
    if flo == 0:
        th = lo
    elif fhi == 0 or flo * fhi > 0:
        th = lo if abs(flo) < abs(fhi) else hi
    else:
        th = brentq(f, lo, hi, xtol=1e-15)
    return R, th % T


def from_polar(ctx: GTrigContext, R: float, theta: float) -> Tuple[float, float]:
    c, s = cs_sn(ctx, theta)
    return R * c, R**ctx.n * s


# ------------------------------------------------------------- polar integrals

class PolarKind(str, Enum):
    I1 = "I1_polar"
    I2 = "I2_polar"


def _g(theta: float) -> float:
    c2 = math.cos(theta) ** 2
    return math.sqrt(c2 * c2 + (1 - c2) ** 2) * math.exp(math.pi / 4 + math.atan(2 * c2 - 1))


def polar_rhs(kind: PolarKind, r: float, theta: float) -> float:
    """dr/dtheta along orbits of the degenerate centers."""
    kind = PolarKind(kind)
    c, s = math.cos(theta), math.sin(theta)
    if kind == PolarKind.I1:
        return -2 * r * (r * r - 1) * c**3 * s / (c**4 + s**4)
    return -r * math.sin(2 * theta)


def polar_first_integral(kind: PolarKind, x: float, y: float) -> float:
    """Closed-form polar first integral: ((r^2 - 1)/r^2)/g(theta) for I1, ln r - cos^2 theta for I2."""
    kind = PolarKind(kind)
    r2 = x * x + y * y
    th = math.atan2(y, x)
    if r2 == 0:
        raise DomainError("polar integrals are singular at the origin")
    if kind == PolarKind.I1:
        return (r2 - 1) / r2 / _g(th)
    return 0.5 * math.log(r2) - math.cos(th) ** 2


Points = Union[Trajectory, Sequence[Tuple[float, float]]]


def polar_integral_residual(kind: PolarKind, trajectory: Points) -> float:
    """Maximum drift of the polar first integral along a trajectory."""
    pts = trajectory.points() if isinstance(trajectory, Trajectory) else list(trajectory)
    if not pts:
        return 0.0
    vals = [polar_first_integral(kind, x, y) for x, y in pts]
    v0 = vals[0]
    return max(abs(v - v0) for v in vals)


def radius_drift(n: int, revolutions: float = 1.0, R0: float = 1.0,
                 cfg: IntegratorConfig = IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)) -> float:
    """|R(end) - R(0)| after integrating (-y, x^(2n-1)) for the given number of revolutions."""
    n = _check_n(n)
    # the angle advances at rate R^(n-1), so one revolution takes T / R^(n-1)
    t_end = revolutions * period(n) / R0 ** (n - 1)
    st, _, (x, y), _ = integrate_field(_PowerCenter(n), (R0, 0.0), t_end, cfg, record=False)
    return abs((x ** (2 * n) + n * y * y) ** (1 / (2 * n)) - R0)


def ode_period(n: int, cfg: IntegratorConfig = _TABLE_CFG) -> float:
    """Four times the time from (1, 0) to the first zero of x along (-y, x^(2n-1))."""
    n = _check_n(n)
    st, t, _, _ = integrate_field(_PowerCenter(n), (1.0, 0.0), 10.0 * period(n), cfg,
                                  constraints=((1.0, 0.0, 0.0),), record=False)
    if st is not Status.COMPLETED:
        raise RuntimeError(f"quarter-period integration failed: {st.value}")
    return 4 * t


def moment_quadrature(ctx: GTrigContext, p: int, q: int, samples: int = 4096) -> float:
    """Trapezoid rule for the periodic integrand Sn^p Cs^q (spectrally accurate)."""
    h = ctx.T / samples
    total = 0.0
    for k in range(samples):
        c, s = cs_sn(ctx, k * h)
        total += s**p * c**q
    return total * h
