"""System families: centers, saddles, switching geometries and piecewise systems.

Every zone field knows how to evaluate its vector field, its first integral
(when it has one) and the analytic gradient of that integral.  Fields also
export a compact ``(kind, params)`` encoding consumed by the integration
kernels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Optional, Tuple, Union

from .errors import DegenerateError, DomainError

Point = Tuple[float, float]

# kernel field codes (shared with _pycore / _core)
K_F1, K_F2, K_F3, K_F4, K_F5 = 0, 1, 2, 3, 4
K_I1, K_I2 = 5, 6
K_AFFINE = 7
K_FROZEN = 8
K_POWER = 9

BOUNDARY = "boundary"


class CenterKind(str, Enum):
    F1 = "F1"
    F2 = "F2"
    F3 = "F3"
    F4 = "F4"
    F5 = "F5"
    I1 = "I1"
    I2 = "I2"


NILPOTENT = (CenterKind.F1, CenterKind.F2, CenterKind.F3, CenterKind.F4, CenterKind.F5)
DEGENERATE = (CenterKind.I1, CenterKind.I2)


@dataclass(frozen=True)
class CenterSpec:
    """Nilpotent center F1..F5 (parameters a, b) or degenerate center I1/I2."""

    kind: CenterKind
    a: float = 0.0
    b: float = 0.0
    canonical: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", CenterKind(self.kind))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("center parameters must be finite")
        if self.canonical:
            self._check_canonical()

    def _check_canonical(self):
        a, b = self.a, self.b
        if self.kind == CenterKind.F3 and a < 0:
            raise ValueError("canonical F3 requires a >= 0")
        if self.kind == CenterKind.F4 and a < 1:
            raise ValueError("canonical F4 requires a >= 1")
        if self.kind == CenterKind.F5:
            ok = b > 0 and (a >= 1 or 4 * (a - 1) ** 2 * (a**3 - a**2 - a * b - 8 * a) - 27 * b**2 > 0)
            if not ok:
                raise ValueError("canonical F5 requires b > 0 and the global-center condition")

    @property
    def is_nilpotent(self) -> bool:
        return self.kind in NILPOTENT

    @property
    def k(self) -> float:
        """Coefficient of y^4/4 in F(0, y)."""
        return {
            CenterKind.F1: 0.0,
            CenterKind.F2: 1.0,
            CenterKind.F3: self.a,
            CenterKind.F4: self.a,
            CenterKind.F5: self.b,
        }[self._nilpotent_kind()]

    def _nilpotent_kind(self):
        if not self.is_nilpotent:
            raise ValueError(f"{self.kind.value} is not a nilpotent center")
        return self.kind

    def level_coefficients(self):
        """Return (B-poly, C) with F(x, y) = x^4/4 + B(x) y^2 + C y^4.

        B is given as coefficients (b2, b1, b0) of b2 x^2 + b1 x + b0.
        """
        kind = self._nilpotent_kind()
        a, b = self.a, self.b
        if kind == CenterKind.F1:
            return (0.0, 0.0, 0.5), 0.0
        if kind == CenterKind.F2:
            return (0.0, 0.0, 0.5), 0.25
        if kind == CenterKind.F3:
            return (0.5, 0.0, 0.5), a / 4
        if kind == CenterKind.F4:
            return (-0.5, 0.0, 0.5), a / 4
        return (a / 2, 1.0, 0.5), b / 4

    def field(self, x: float, y: float) -> Point:
        kind, a, b = self.kind, self.a, self.b
        if kind == CenterKind.F1:
            return y, -x**3
        if kind == CenterKind.F2:
            return y + y**3, -x**3
        if kind == CenterKind.F3:
            return y + x * x * y + a * y**3, -x**3 - x * y * y
        if kind == CenterKind.F4:
            return y - x * x * y + a * y**3, -x**3 + x * y * y
        if kind == CenterKind.F5:
            return (y + 2 * x * y + a * x * x * y + b * y**3, -x**3 - y * y - a * x * y * y)
        if kind == CenterKind.I1:
            return (y * (x * x - y * y) - 2 * x**4 * y, x * (x * x + y * y) - 2 * x**3 * y * y)
        return -y * (3 * x * x + y * y), x * (x * x - y * y)

    def integral(self, x: float, y: float) -> float:
        if self.is_nilpotent:
            (b2, b1, b0), c = self.level_coefficients()
            yy = y * y
            return x**4 / 4 + (b2 * x * x + b1 * x + b0) * yy + c * yy * yy
        r2 = x * x + y * y
        if self.kind == CenterKind.I1:
            if r2 <= 1 or y == 0:
                raise DomainError("I1 requires x^2 + y^2 > 1 and y != 0")
            return math.log(r2 - 1) - 0.5 * math.log(x**4 + y**4) - math.atan(x * x / (y * y))
        if r2 == 0:
            raise DomainError("I2 is undefined at the origin")
        return 0.5 * math.log(r2) - x * x / r2

    def grad(self, x: float, y: float) -> Point:
        if self.is_nilpotent:
            (b2, b1, b0), c = self.level_coefficients()
            yy = y * y
            bx = b2 * x * x + b1 * x + b0
            return x**3 + (2 * b2 * x + b1) * yy, 2 * bx * y + 4 * c * yy * y
        r2 = x * x + y * y
        if self.kind == CenterKind.I1:
            if r2 <= 1 or y == 0:
                raise DomainError("I1 requires x^2 + y^2 > 1 and y != 0")
            q = x**4 + y**4
            gx = 2 * x / (r2 - 1) - 2 * x**3 / q - 2 * x * y * y / q
            gy = 2 * y / (r2 - 1) - 2 * y**3 / q + 2 * x * x * y / q
            return gx, gy
        if r2 == 0:
            raise DomainError("I2 is undefined at the origin")
        r4 = r2 * r2
        return x / r2 - 2 * x * y * y / r4, y / r2 + 2 * x * x * y / r4

    @property
    def hamiltonian(self) -> bool:
        return self.is_nilpotent

    def kernel_spec(self):
        code = {
            CenterKind.F1: K_F1,
            CenterKind.F2: K_F2,
            CenterKind.F3: K_F3,
            CenterKind.F4: K_F4,
            CenterKind.F5: K_F5,
            CenterKind.I1: K_I1,
            CenterKind.I2: K_I2,
        }[self.kind]
        return code, (self.a, self.b)

    def describe(self) -> str:
        if self.kind in (CenterKind.F3, CenterKind.F4):
            return f"{self.kind.value}(a={self.a:g})"
        if self.kind == CenterKind.F5:
            return f"F5(a={self.a:g}, b={self.b:g})"
        return self.kind.value


@dataclass(frozen=True)
class AffineField:
    """General affine field (m11 x + m12 y + c1, m21 x + m22 y + c2)."""

    m11: float
    m12: float
    m21: float
    m22: float
    c1: float
    c2: float

    def __post_init__(self):
        for f in fields(self):
            v = float(getattr(self, f.name))
            if not math.isfinite(v):
                raise ValueError(f"{f.name} must be finite")
            object.__setattr__(self, f.name, v)

    @property
    def matrix(self):
        return ((self.m11, self.m12), (self.m21, self.m22))

    @property
    def trace(self) -> float:
        return self.m11 + self.m22

    @property
    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    @property
    def hamiltonian(self) -> bool:
        return self.trace == 0

    def field(self, x: float, y: float) -> Point:
        return (self.m11 * x + self.m12 * y + self.c1, self.m21 * x + self.m22 * y + self.c2)

    def integral(self, x: float, y: float) -> float:
        if not self.hamiltonian:
            raise DomainError("affine field with nonzero divergence has no polynomial integral")
        return (-self.m21 * x * x / 2 + self.m12 * y * y / 2 + self.m11 * x * y - self.c2 * x + self.c1 * y)

    def grad(self, x: float, y: float) -> Point:
        if not self.hamiltonian:
            raise DomainError("affine field with nonzero divergence has no polynomial integral")
        return (-self.m21 * x + self.m11 * y - self.c2, self.m12 * y + self.m11 * x + self.c1)

    def equilibrium(self) -> Point:
        d = self.det
        if d == 0:
            raise DegenerateError("singular affine field has no isolated equilibrium")
        x = (-self.c1 * self.m22 + self.c2 * self.m12) / d
        y = (-self.m11 * self.c2 + self.m21 * self.c1) / d
        return x, y

    def kernel_spec(self):
        return K_AFFINE, (self.m11, self.m12, self.m21, self.m22, self.c1, self.c2)

    def as_affine(self) -> "AffineField":
        return self

    def describe(self) -> str:
        return (f"({_lin(self.m11, self.m12, self.c1)}, {_lin(self.m21, self.m22, self.c2)})")


def _lin(cx, cy, c0) -> str:
    parts = []
    for coef, name in ((cx, "x"), (cy, "y"), (c0, "")):
        if coef == 0:
            continue
        mag = abs(coef)
        body = name if (mag == 1 and name) else (f"{mag:g}{name}")
        parts.append(("-" if coef < 0 else "+") + body)
    if not parts:
        return "0"
    s = "".join(parts)
    return s[1:] if s[0] == "+" else s


@dataclass(frozen=True)
class SaddleSpec:
    """Linear Hamiltonian saddle (-b x - d y + m, a x + b y + g).

    Its Hamiltonian is H = -a x^2/2 - d y^2/2 - b x y - g x + m y with
    (a, b, d, g, m) = (alpha, beta, delta, gamma, mu).
    """

    alpha: float
    beta: float
    delta: float
    gamma: float
    mu: float
    canonical: bool = False
    allow_degenerate: bool = False

    def __post_init__(self):
        for name in ("alpha", "beta", "delta", "gamma", "mu"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if self.discriminant >= 0 and not (self.allow_degenerate and self.discriminant == 0):
            raise DegenerateError(f"saddle requires alpha*delta - beta^2 < 0, got {self.discriminant:g}")
        if self.canonical:
            if self.alpha == 0 and not (self.gamma == 0 and self.beta != 0):
                raise ValueError("canonical saddle with alpha = 0 needs gamma = 0 and beta != 0")
            if self.alpha == 1 and not self.delta < self.beta**2:
                raise ValueError("canonical saddle with alpha = 1 needs delta < beta^2")

    @property
    def discriminant(self) -> float:
        return self.alpha * self.delta - self.beta**2

    @property
    def u(self) -> float:
        return self.beta * self.mu + self.delta * self.gamma

    @property
    def v(self) -> float:
        return self.alpha * self.mu + self.beta * self.gamma

    @property
    def hamiltonian(self) -> bool:
        return True

    def field(self, x: float, y: float) -> Point:
        return (-self.beta * x - self.delta * y + self.mu, self.alpha * x + self.beta * y + self.gamma)

    def integral(self, x: float, y: float) -> float:
        return (-self.alpha * x * x / 2 - self.delta * y * y / 2 - self.beta * x * y - self.gamma * x + self.mu * y)

    def grad(self, x: float, y: float) -> Point:
        return (-self.alpha * x - self.beta * y - self.gamma, -self.delta * y - self.beta * x + self.mu)

    def as_affine(self) -> AffineField:
        return AffineField(-self.beta, -self.delta, self.alpha, self.beta, self.mu, self.gamma)

    def kernel_spec(self):
        return self.as_affine().kernel_spec()

    def describe(self) -> str:
        return (f"saddle(alpha={self.alpha:g}, beta={self.beta:g}, delta={self.delta:g}, "
                f"gamma={self.gamma:g}, mu={self.mu:g})")


@dataclass(frozen=True)
class RaySaddle:
    """Saddle at (alpha, beta): (a(x-alpha) - (y-beta), -(x-alpha) + a(y-beta)), -1 < a < 0."""

    a: float
    alpha: float
    beta: float

    def __post_init__(self):
        for name in ("a", "alpha", "beta"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not -1 < self.a < 0:
            raise ValueError("ray saddle requires -1 < a < 0")

    @property
    def hamiltonian(self) -> bool:
        return False

    def field(self, x: float, y: float) -> Point:
        dx, dy = x - self.alpha, y - self.beta
        return self.a * dx - dy, -dx + self.a * dy

    def integral(self, x: float, y: float) -> float:
        # invariant of the linear flow, |sigma| |nu|^((1-a)/(1+a)) with sigma, nu the
        # stable / unstable eigen-coordinates; the unit power on sigma keeps it
        # Lipschitz across the separatrix sigma = 0 (zero on both separatrices)
        dx, dy = x - self.alpha, y - self.beta
        return abs(dx + dy) * abs(dx - dy) ** self._q

    @property
    def _q(self) -> float:
        return (1 - self.a) / (1 + self.a)

    def grad(self, x: float, y: float) -> Point:
        dx, dy = x - self.alpha, y - self.beta
        s, n = dx + dy, dx - dy
        if s == 0 or n == 0:
            raise DomainError("the invariant is not differentiable on a separatrix of the ray saddle")
        J = self.integral(x, y)
        ps, pn = 1 / s, self._q / n
        return J * (ps + pn), J * (ps - pn)

    def as_affine(self) -> AffineField:
        a, al, be = self.a, self.alpha, self.beta
        return AffineField(a, -1.0, -1.0, a, -a * al + be, al - a * be)

    def kernel_spec(self):
        return self.as_affine().kernel_spec()

    def describe(self) -> str:
        return f"ray_saddle(a={self.a:g}, alpha={self.alpha:g}, beta={self.beta:g})"


def generalized_radius(n: int, x: float, y: float) -> float:
    """R with R^(2n) = x^(2n) + n y^2, conserved by (-y, x^(2n-1))."""
    return (x ** (2 * n) + n * y * y) ** (1.0 / (2 * n))


@dataclass(frozen=True)
class FrozenRadial:
    """Outer-zone dynamics with frozen generalized radius and unit angular speed.

    In the weighted coordinates x = R Cs(t), y = R^n Sn(t) the flow is
    (R', t') = (0, 1); in Cartesian form it is (-y, x^(2n-1)) / R^(n-1).
    """

    n: int = 1

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        object.__setattr__(self, "n", int(self.n))

    @property
    def hamiltonian(self) -> bool:
        return self.n == 1

    def field(self, x: float, y: float) -> Point:
        n = self.n
        if n == 1:
            return -y, x
        r = generalized_radius(n, x, y)
        if r == 0:
            return 0.0, 0.0
        s = r ** (n - 1)
        return -y / s, x ** (2 * n - 1) / s

    def integral(self, x: float, y: float) -> float:
        return generalized_radius(self.n, x, y)

    def grad(self, x: float, y: float) -> Point:
        n = self.n
        r = generalized_radius(n, x, y)
        if r == 0:
            raise DomainError("generalized radius is not differentiable at the origin")
        c = r ** (1 - 2 * n) / (2 * n)
        return c * 2 * n * x ** (2 * n - 1), c * 2 * n * y

    def kernel_spec(self):
        return K_FROZEN, (float(self.n),)

    def describe(self) -> str:
        return f"frozen_radial(n={self.n})"


ZoneField = Union[CenterSpec, SaddleSpec, AffineField, RaySaddle, FrozenRadial]


def field_at(zone: ZoneField, p: Point) -> Point:
    return zone.field(float(p[0]), float(p[1]))


def first_integral(zone: ZoneField, p: Point) -> float:
    return zone.integral(float(p[0]), float(p[1]))


def gradient(zone: ZoneField, p: Point) -> Point:
    return zone.grad(float(p[0]), float(p[1]))


def divergence(zone: ZoneField, p: Point, h: float = 1e-6) -> float:
    """Central-difference divergence of the zone field."""
    x, y = float(p[0]), float(p[1])
    fx1 = zone.field(x + h, y)[0]
    fx0 = zone.field(x - h, y)[0]
    fy1 = zone.field(x, y + h)[1]
    fy0 = zone.field(x, y - h)[1]
    return (fx1 - fx0) / (2 * h) + (fy1 - fy0) / (2 * h)


class Variant(str, Enum):
    ONE_LINE = "one_line"
    TWO_LINES = "two_lines"
    RAY_PAIR = "ray_pair"


@dataclass(frozen=True)
class Section:
    """A straight piece of the switching set: a vertical line or a ray."""

    name: str
    # defining coordinate c(p) = nx*x + ny*y + c0, zero on the section
    nx: float
    ny: float
    c0: float
    # parametrization point(s) = base + s * direction
    base: Point
    direction: Point

    def coordinate(self, p: Point) -> float:
        return self.nx * p[0] + self.ny * p[1] + self.c0

    def point(self, s: float) -> Point:
        return (self.base[0] + s * self.direction[0], self.base[1] + s * self.direction[1])

    def param(self, p: Point) -> float:
        return ((p[0] - self.base[0]) * self.direction[0] + (p[1] - self.base[1]) * self.direction[1])

    def snap(self, p: Point) -> Point:
        return self.point(self.param(p))


@dataclass(frozen=True)
class SwitchingGeometry:
    variant: Variant
    phi: float = math.pi / 2

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.variant == Variant.RAY_PAIR and not (0 < self.phi <= math.pi / 2):
            raise ValueError("phi must lie in (0, pi/2]")

    @classmethod
    def one_line(cls):
        return cls(Variant.ONE_LINE)

    @classmethod
    def two_lines(cls):
        return cls(Variant.TWO_LINES)

    @classmethod
    def ray_pair(cls, phi: float = math.pi / 2):
        return cls(Variant.RAY_PAIR, float(phi))

    @property
    def zone_names(self) -> Tuple[str, ...]:
        return {
            Variant.ONE_LINE: ("left", "right"),
            Variant.TWO_LINES: ("left", "middle", "right"),
            Variant.RAY_PAIR: ("sector", "outer"),
        }[self.variant]

    @property
    def sections(self) -> Tuple[Section, ...]:
        if self.variant == Variant.ONE_LINE:
            return (Section("x=0", 1.0, 0.0, 0.0, (0.0, 0.0), (0.0, 1.0)),)
        if self.variant == Variant.TWO_LINES:
            return (
                Section("x=-1", 1.0, 0.0, 1.0, (-1.0, 0.0), (0.0, 1.0)),
                Section("x=1", 1.0, 0.0, -1.0, (1.0, 0.0), (0.0, 1.0)),
            )
        c, s = math.cos(self.phi), math.sin(self.phi)
        if self.phi == math.pi / 2:
            c = 0.0
        return (
            Section("ray+", s, -c, 0.0, (0.0, 0.0), (c, s)),
            Section("ray-", s, c, 0.0, (0.0, 0.0), (c, -s)),
        )

    def section(self, name: str) -> Section:
        for sec in self.sections:
            if sec.name == name:
                return sec
        raise KeyError(f"unknown section {name!r}")

    def regions(self):
        """Kernel region descriptors per zone: (constraints, section names, complement)."""
        if self.variant == Variant.ONE_LINE:
            return {
                "left": (((-1.0, 0.0, 0.0),), ("x=0",), False),
                "right": (((1.0, 0.0, 0.0),), ("x=0",), False),
            }
        if self.variant == Variant.TWO_LINES:
            return {
                "left": (((-1.0, 0.0, -1.0),), ("x=-1",), False),
                "middle": (((1.0, 0.0, 1.0), (-1.0, 0.0, 1.0)), ("x=-1", "x=1"), False),
                "right": (((1.0, 0.0, -1.0),), ("x=1",), False),
            }
        up, down = self.sections
        cons = ((up.nx, up.ny, 0.0), (down.nx, down.ny, 0.0))
        return {
            "sector": (cons, ("ray+", "ray-"), False),
            "outer": (cons, ("ray+", "ray-"), True),
        }

    def zone_of(self, p: Point) -> str:
        x, y = float(p[0]), float(p[1])
        if self.variant == Variant.ONE_LINE:
            return "left" if x < 0 else "right" if x > 0 else BOUNDARY
        if self.variant == Variant.TWO_LINES:
            if x < -1:
                return "left"
            if x > 1:
                return "right"
            return "middle" if -1 < x < 1 else BOUNDARY
        if x == 0 and y == 0:
            return BOUNDARY
        th = abs(math.atan2(y, x))
        return "sector" if th < self.phi else "outer" if th > self.phi else BOUNDARY

    def neighbor(self, zone: str, section: str) -> str:
        if self.variant == Variant.ONE_LINE:
            return {"left": "right", "right": "left"}[zone]
        if self.variant == Variant.RAY_PAIR:
            return {"sector": "outer", "outer": "sector"}[zone]
        if section == "x=-1":
            return {"left": "middle", "middle": "left"}[zone]
        return {"middle": "right", "right": "middle"}[zone]

    def ray_section_of(self, p: Point) -> str:
        return "ray+" if p[1] > 0 else "ray-"


@dataclass(frozen=True)
class PiecewiseSystem:
    geometry: SwitchingGeometry
    zones: Tuple[ZoneField, ...]
    label: Optional[str] = None
    notes: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "zones", tuple(self.zones))
        if len(self.zones) != len(self.geometry.zone_names):
            raise ValueError(
                f"{self.geometry.variant.value} needs {len(self.geometry.zone_names)} zones, got {len(self.zones)}")

    @property
    def zone_names(self) -> Tuple[str, ...]:
        return self.geometry.zone_names

    def field_of(self, zone: str) -> ZoneField:
        return self.zones[self.zone_names.index(zone)]

    def zone_of(self, p: Point) -> str:
        return self.geometry.zone_of(p)

    def field_at(self, p: Point) -> Point:
        z = self.zone_of(p)
        if z == BOUNDARY:
            raise ValueError("point lies on the switching set")
        return field_at(self.field_of(z), p)


def zone_of(system: PiecewiseSystem, p: Point) -> str:
    return system.zone_of(p)


def two_zone(left: ZoneField, right: ZoneField, label=None) -> PiecewiseSystem:
    return PiecewiseSystem(SwitchingGeometry.one_line(), (left, right), label)


def three_zone(left: ZoneField, middle: ZoneField, right: ZoneField, label=None) -> PiecewiseSystem:
    return PiecewiseSystem(SwitchingGeometry.two_lines(), (left, middle, right), label)


def ray_system(sector: ZoneField, outer: ZoneField, phi: float = math.pi / 2, label=None) -> PiecewiseSystem:
    return PiecewiseSystem(SwitchingGeometry.ray_pair(phi), (sector, outer), label)
