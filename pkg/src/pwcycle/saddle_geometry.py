"""Equilibrium, separatrix lines and their axis/ray intersections for saddles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import DegenerateError, NoIntersection
from .model import RaySaddle, SaddleSpec

Point = Tuple[float, float]


@dataclass(frozen=True)
class SaddleGeometry:
    x0: float
    y0: float
    A: Optional[float]
    B: Optional[float]
    slopes: Tuple[Optional[float], Optional[float]]
    vertical: bool = False
    complete: bool = True

    @property
    def equilibrium(self) -> Point:
        return self.x0, self.y0

    @property
    def ordered(self) -> bool:
        return self.complete and self.A >= self.B


def analyze_saddle(s: SaddleSpec) -> SaddleGeometry:
    """Equilibrium of the saddle and the y-axis intersections (0, A), (0, B).

    The separatrices are the lines through (x0, y0) with slopes
    -(beta +- sqrt(-D))/delta; their y-intercepts are
    A = y0 + (beta + sqrt(-D))/delta * x0 and B = y0 + (beta - sqrt(-D))/delta * x0.
    With delta = 0 one separatrix is vertical and A, B are not reported.
    """
    disc = s.discriminant
    if disc >= 0:
        raise DegenerateError(f"saddle requires a negative discriminant, got {disc:g}")
    x0 = -s.u / disc
    y0 = s.v / disc
    w = math.sqrt(-disc)
    if s.delta == 0:
        # null directions of H: w1 = 0 (vertical) and alpha w1 + 2 beta w2 = 0
        slope = -s.alpha / (2 * s.beta)
        return SaddleGeometry(x0, y0, None, None, (None, slope), vertical=True, complete=False)
    ka = (s.beta + w) / s.delta
    kb = (s.beta - w) / s.delta
    return SaddleGeometry(x0, y0, y0 + ka * x0, y0 + kb * x0, (-ka, -kb))


def separatrices_cross_axis_opposite(s: SaddleSpec) -> bool:
    g = analyze_saddle(s)
    if not g.complete:
        raise DegenerateError("delta = 0: axis intersections are not available")
    return g.A * g.B < 0


@dataclass(frozen=True)
class RayIntersections:
    stable: Point  # where the stable separatrix leaves the lower ray (theta = -phi)
    unstable: Point  # where the unstable separatrix meets the upper ray (theta = +phi)


def separatrix_ray_intersections(s: RaySaddle, phi: float) -> RayIntersections:
    """Separatrix/ray intersections for the sector saddle.

    The stable separatrix y - beta = x - alpha is paired with the ray
    theta = -phi (where sector orbits enter), and the unstable separatrix
    y - beta = -(x - alpha) with theta = +phi (where they leave).
    """
    if not 0 < phi <= math.pi / 2:
        raise ValueError("phi must lie in (0, pi/2]")
    c, sn = math.cos(phi), math.sin(phi)
    if phi == math.pi / 2:
        c = 0.0
    al, be = s.alpha, s.beta
    stable = _line_ray((1.0, -1.0, be - al), (c, -sn))
    unstable = _line_ray((1.0, 1.0, -(al + be)), (c, sn))
    return RayIntersections(stable, unstable)


def _line_ray(line, direction) -> Point:
    # line: p * x + q * y + r = 0 ; ray: t * direction, t > 0
    p, q, r = line
    dx, dy = direction
    den = p * dx + q * dy
    if abs(den) <= 1e-15:
        raise NoIntersection("separatrix is parallel to the ray")
    t = -r / den
    if t <= 0:
        raise NoIntersection("separatrix meets the ray line outside the sector")
    return (t * dx, t * dy)
