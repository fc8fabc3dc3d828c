"""Closed-form zone transits.

Given an entry point on a zone boundary, compute where the orbit of that
zone's field next meets the boundary, without numerical ODE integration:

* affine zones use the exact exponential flow and the explicit form of the
  boundary coordinate along it (a constant plus two exponentials, or a
  quadratic in t for nilpotent linear parts);
* nilpotent centers trace the algebraic level curve C Y^2 + B(x) Y + A(x) = c
  in the (x, Y = y^2) plane through polynomial roots of A - c (axis hits)
  and of the discriminant (folds);
* the degenerate centers use their explicit polar orbits
  r = exp(c + cos^2 t) and (r^2 - 1)/r^2 = K g(t);
* the frozen-radius outer field returns the mirror image of its entry.

These transits decide admissibility of algebraic candidates in the
closing module; the numerical verifier never uses them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from .model import (AffineField, CenterKind, CenterSpec, FrozenRadial, PiecewiseSystem, RaySaddle,
                    SaddleSpec, Variant)

Point = Tuple[float, float]

EXIT, ESCAPE, SEPARATRIX, DOMAIN, TANGENT = "exit", "escape", "separatrix", "domain", "tangent"


@dataclass(frozen=True)
class Arc:
    kind: str
    exit: Optional[Point] = None
    section: Optional[str] = None
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.kind == EXIT


def zone_transit(system: PiecewiseSystem, zone: str, p: Point) -> Arc:
    """Exact transit of ``zone`` starting from the boundary point ``p``."""
    fld = system.field_of(zone)
    geo = system.geometry
    cons, names, comp = geo.regions()[zone]
    if isinstance(fld, (SaddleSpec, RaySaddle, AffineField)):
        if comp:
            raise NotImplementedError("affine transits are only implemented for convex zones")
        arc = _affine_transit(fld.as_affine(), cons, p)
        if arc.ok:
            sec = geo.ray_section_of(arc.exit) if geo.variant == Variant.RAY_PAIR else names[arc.section]
            return Arc(EXIT, geo.section(sec).snap(arc.exit), sec)
        return arc
    if isinstance(fld, FrozenRadial):
        if geo.variant != Variant.RAY_PAIR or zone != "outer":
            raise NotImplementedError("frozen-radius transits are defined for the outer ray zone")
        return _mirror_exit(geo, p)
    if isinstance(fld, CenterSpec):
        if geo.variant == Variant.RAY_PAIR:
            if zone != "outer" or fld.is_nilpotent:
                raise NotImplementedError("center transits in ray systems need a degenerate outer center")
            return _polar_outer(fld, geo, p)
        if zone != "left":
            raise NotImplementedError("center transits are implemented for the left zone")
        x_l = 0.0 if geo.variant == Variant.ONE_LINE else -1.0
        sec = names[0]
        if fld.is_nilpotent:
            arc = _center_transit(fld, x_l, p[1])
        else:
            arc = _polar_line(fld, x_l, p)
        return Arc(arc.kind, arc.exit, sec if arc.ok else None, arc.note)
    raise TypeError(f"unsupported zone field {type(fld).__name__}")


# ---------------------------------------------------------------- affine zones

def affine_flow(f: AffineField, p0: Point, t: float) -> Point:
    """Exact flow of an affine field with real distinct or nilpotent spectrum."""
    rep = _AffineRep(f, p0)
    return rep.at(t)


class _AffineRep:
    def __init__(self, f: AffineField, p0: Point):
        self.f = f
        self.p0 = (float(p0[0]), float(p0[1]))
        tr, det = f.trace, f.det
        disc = tr * tr / 4 - det
        scale = max(1.0, abs(f.m11), abs(f.m12), abs(f.m21), abs(f.m22)) ** 2
        if abs(disc) <= 1e-14 * scale and abs(tr) <= 1e-14 * math.sqrt(scale):
            self.mode = "nilpotent"
            f0 = f.field(*self.p0)
            self.f0 = f0
            self.mf0 = (f.m11 * f0[0] + f.m12 * f0[1], f.m21 * f0[0] + f.m22 * f0[1])
            return
        if disc <= 0 or det == 0:
            raise NotImplementedError("exact transit needs real distinct nonzero eigenvalues")
        self.mode = "real"
        r = math.sqrt(disc)
        lam = (tr / 2 + r, tr / 2 - r)
        vecs = []
        for lm in lam:
            if abs(f.m12) >= abs(f.m21) and f.m12 != 0:
                v = (f.m12, lm - f.m11)
            elif f.m21 != 0:
                v = (lm - f.m22, f.m21)
            else:
                v = (1.0, 0.0) if lm == f.m11 else (0.0, 1.0)
            nv = math.hypot(*v)
            vecs.append((v[0] / nv, v[1] / nv))
        self.lam = lam
        self.vecs = vecs
        self.e = f.equilibrium()
        dx, dy = self.p0[0] - self.e[0], self.p0[1] - self.e[1]
        (a, b), (c, d) = vecs
        dd = a * d - b * c
        self.xi = ((dx * d - dy * c) / dd, (a * dy - b * dx) / dd)

    def at(self, t: float) -> Point:
        if self.mode == "nilpotent":
            return (self.p0[0] + t * self.f0[0] + 0.5 * t * t * self.mf0[0],
                    self.p0[1] + t * self.f0[1] + 0.5 * t * t * self.mf0[1])
        e1 = self.xi[0] * math.exp(self.lam[0] * t)
        e2 = self.xi[1] * math.exp(self.lam[1] * t)
        (a, b), (c, d) = self.vecs
        return (self.e[0] + e1 * a + e2 * c, self.e[1] + e1 * b + e2 * d)

    def first_root(self, con, on_entry: bool):
        """Smallest t > 0 with a*x(t) + b*y(t) + c = 0 (ignoring the entry root at t = 0)."""
        na, nb, nc = con
        if self.mode == "nilpotent":
            g0 = na * self.p0[0] + nb * self.p0[1] + nc
            g1 = na * self.f0[0] + nb * self.f0[1]
            g2 = 0.5 * (na * self.mf0[0] + nb * self.mf0[1])
            if on_entry:
                g0 = 0.0
            roots = np.roots([g2, g1, g0]) if g2 != 0 else (np.array([-g0 / g1]) if g1 != 0 else [])
            cands = [r.real for r in np.atleast_1d(roots) if abs(r.imag) <= 1e-12 * (1 + abs(r)) and r.real > 1e-12]
            if g2 != 0 and on_entry:
                cands = [-g1 / g2] if -g1 / g2 > 1e-12 else []
            return (min(cands), "") if cands else (None, "escape")
        (a, b), (c, d) = self.vecs
        k0 = na * self.e[0] + nb * self.e[1] + nc
        k1 = self.xi[0] * (na * a + nb * b)
        k2 = self.xi[1] * (na * c + nb * d)
        l1, l2 = self.lam

        def g(t):
            return k0 + k1 * math.exp(l1 * t) + k2 * math.exp(l2 * t)

        def dg(t):
            return k1 * l1 * math.exp(l1 * t) + k2 * l2 * math.exp(l2 * t)

        tmax = 700.0 / max(abs(l1), abs(l2))
        breaks = [0.0]
        if k1 != 0 and k2 != 0:
            ratio = -(k2 * l2) / (k1 * l1)
            if ratio > 0:
                tc = math.log(ratio) / (l1 - l2)
                if 0 < tc < tmax:
                    breaks.append(tc)
        breaks.append(tmax)
        for lo, hi in zip(breaks[:-1], breaks[1:]):
            glo = g(lo)
            if lo == 0.0 and on_entry:
                # the entry root: use the sign the coordinate takes just after t = 0
                glo = dg(0.0)
                if glo <= 0:
                    return None, "not entering"
            ghi = g(hi)
            if glo > 0 and ghi <= 0:
                if ghi == 0:
                    return hi, ""
                lo_eff = lo if not (lo == 0.0 and on_entry) else _first_positive(g, hi)
                if lo_eff is None:
                    continue
                return brentq(g, lo_eff, hi, xtol=1e-15, rtol=1e-15, maxiter=200), ""
        # no crossing: either unbounded growth or convergence to the equilibrium
        lead = k1 if l1 > 0 else k2
        if abs(self.xi[0] if l1 > 0 else self.xi[1]) <= 1e-13 * (1 + abs(self.xi[0]) + abs(self.xi[1])):
            return None, "separatrix"
        return None, "escape" if lead != 0 else "separatrix"


def _first_positive(g, hi):
    # smallest grid point in (0, hi] where g is still positive (skips the entry root)
    t = hi * 1e-12
    while t < hi:
        if g(t) > 0:
            return t
        t *= 2
    return None


def _affine_transit(f: AffineField, cons, p: Point) -> Arc:
    try:
        rep = _AffineRep(f, p)
    except NotImplementedError as exc:
        return Arc(DOMAIN, note=str(exc))
    best, best_i = None, None
    reasons = []
    for i, con in enumerate(cons):
        g0 = con[0] * p[0] + con[1] * p[1] + con[2]
        on_entry = abs(g0) <= 1e-9 * (1 + abs(p[0]) + abs(p[1]))
        t, why = rep.first_root(con, on_entry)
        if why == "not entering":
            return Arc(TANGENT, note="field does not enter the zone")
        if t is not None and (best is None or t < best):
            best, best_i = t, i
        elif t is None:
            reasons.append(why)
    if best is None:
        kind = SEPARATRIX if "separatrix" in reasons else ESCAPE
        return Arc(kind, note="orbit tends to the saddle" if kind == SEPARATRIX else "orbit leaves every bounded set")
    return Arc(EXIT, rep.at(best), best_i)


# ------------------------------------------------------------ nilpotent centers

def _real_roots(coeffs):
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "f")
    if coeffs.size <= 1:
        return []
    r = np.roots(coeffs)
    scale = 1 + np.abs(r)
    return sorted(float(v.real) for v, s in zip(r, scale) if abs(v.imag) <= 1e-7 * s)


def _center_transit(center: CenterSpec, x_l: float, y_e: float) -> Arc:
    (b2, b1, b0), C = center.level_coefficients()
    if y_e == 0:
        return Arc(TANGENT, note="entry on the x-axis")
    sgn = 1.0 if y_e > 0 else -1.0
    Y0 = y_e * y_e
    c = center.integral(x_l, y_e)

    def B(x):
        return b2 * x * x + b1 * x + b0

    # discriminant in expanded form: leading terms cancel exactly for some centers
    dcoef = [b2 * b2 - C, 2 * b2 * b1, b1 * b1 + 2 * b2 * b0, 2 * b1 * b0, b0 * b0 + 4 * C * c]

    def D(x):
        return float(np.polyval(dcoef, x))

    def branch(x, which):
        if C == 0:
            bx = B(x)
            return (c - x**4 / 4) / bx if bx != 0 else math.inf
        dv = max(D(x), 0.0)
        return (-B(x) + which * math.sqrt(dv)) / (2 * C)

    tol = 1e-9 * (1 + Y0)
    if C == 0:
        which = 0
    else:
        if D(x_l) <= 1e-12 * (1 + B(x_l) ** 2):
            return Arc(TANGENT, note="level curve folds on the section")
        which = 1 if abs(branch(x_l, 1) - Y0) <= abs(branch(x_l, -1) - Y0) else -1
        if abs(branch(x_l, which) - Y0) > 1e-7 * (1 + Y0):
            return Arc(DOMAIN, note="entry point not on a real branch")

    zeros = _real_roots([0.25, 0, 0, 0, -c])
    folds = [] if C == 0 else _real_roots(dcoef)
    poles = _real_roots([b2, b1, b0]) if C == 0 else []
    events = [(z, "zero") for z in zeros] + [(z, "fold") for z in folds] + [(z, "pole") for z in poles]
    eps = 1e-10 * (1 + abs(x_l))
    x, d = x_l, -1.0
    for _ in range(64):
        ahead = [(z, kind) for z, kind in events if (z - x) * d > eps and z < x_l - eps]
        if d > 0:
            ahead.append((x_l, "exit"))
        if not ahead:
            return Arc(ESCAPE, note="level curve is unbounded")
        z, kind = min(ahead, key=lambda e: (e[0] - x) * d)
        if kind == "exit":
            yv = branch(x_l, which)
            if yv < 0:
                return Arc(DOMAIN, note="negative branch on return")
            y_out = sgn * math.sqrt(yv)
            return Arc(EXIT, (x_l, y_out))
        if kind == "pole":
            return Arc(ESCAPE, note="level curve has a vertical asymptote")
        if kind == "zero":
            if abs(branch(z, which)) <= tol * 10 + 1e-9 * abs(B(z) / C if C else 0):
                return Arc(EXIT, (x_l, -y_e))
            x = z
            continue
        # fold: check that the discriminant changes sign (a true turning point)
        probe = z + d * 1e-6 * (1 + abs(z))
        if D(probe) < 0:
            which = -which
            d = -d
            x = z
            continue
        return Arc(SEPARATRIX, note="level curve passes through a critical point")
    return Arc(DOMAIN, note="too many turning points")


# ----------------------------------------------------------- degenerate centers

def _g_i1(th: float) -> float:
    c2 = math.cos(th) ** 2
    return math.sqrt(c2 * c2 + (1 - c2) ** 2) * math.exp(math.pi / 4 + math.atan(2 * c2 - 1))


def polar_radius(center: CenterSpec, p0: Point):
    """Return r(theta) for the orbit of the degenerate center through p0 (None where undefined)."""
    r0 = math.hypot(*p0)
    th0 = math.atan2(p0[1], p0[0])
    if center.kind == CenterKind.I2:
        if r0 == 0:
            return None
        c0 = math.log(r0) - math.cos(th0) ** 2
        return lambda th: math.exp(c0 + math.cos(th) ** 2)
    if r0 == 0:
        return None
    if abs(r0 - 1) <= 1e-13:
        return lambda th: 1.0
    # K < 0 inside the unit circle: the orbit stays in 0 < r < 1
    K = (r0 * r0 - 1) / (r0 * r0) / _g_i1(th0)

    def r(th):
        q = K * _g_i1(th)
        return None if q >= 1 else 1 / math.sqrt(1 - q)
    return r


def _polar_line(center: CenterSpec, x_l: float, p: Point) -> Arc:
    rfun = polar_radius(center, p)
    if rfun is None:
        return Arc(DOMAIN, note="entry point at the center")
    th0 = math.atan2(p[1], p[0]) % (2 * math.pi)
    n = 4000
    prev_t = th0

    def gap(th):
        r = rfun(th)
        return r * math.cos(th) - x_l

    for i in range(1, n + 1):
        th = th0 + 2 * math.pi * i / n
        r = rfun(th)
        if r is None:
            return Arc(ESCAPE, note="polar orbit is unbounded")
        gv = r * math.cos(th) - x_l
        if gv >= 0 and i > 1:
            if gv == 0:
                root = th
            else:
                root = brentq(gap, prev_t, th, xtol=1e-15, rtol=1e-15)
            rr = rfun(root)
            return Arc(EXIT, (x_l, rr * math.sin(root)))
        prev_t = th
    return Arc(DOMAIN, note="no return within one revolution")


def _polar_outer(center: CenterSpec, geo, p: Point) -> Arc:
    rfun = polar_radius(center, p)
    if rfun is None:
        return Arc(DOMAIN, note="entry point at the center")
    th0 = math.atan2(p[1], p[0])
    if p[1] <= 0:
        return Arc(TANGENT, note="outer zone is entered on the upper ray")
    # the angle advances monotonically from phi to 2 pi - phi; g peaks at theta = pi
    for th in np.linspace(th0, 2 * math.pi - th0, 2001):
        if rfun(float(th)) is None:
            return Arc(ESCAPE, note="polar orbit is unbounded")
    return _mirror_exit(geo, p)


def _mirror_exit(geo, p: Point) -> Arc:
    q = (p[0], -p[1])
    sec = geo.ray_section_of(q)
    return Arc(EXIT, geo.section(sec).snap(q), sec)


# ---------------------------------------------------------------- first return

@dataclass(frozen=True)
class ReturnTrace:
    value: Optional[float]  # section parameter on first return, None on failure
    reason: str
    crossings: Tuple[Tuple[str, float], ...]


def exact_first_return(system: PiecewiseSystem, section: str, s: float, max_legs: int = 16) -> ReturnTrace:
    """Follow exact zone transits from the section point with parameter s
    until the orbit crosses ``section`` again in the same direction."""
    from .integrate import entering_zone

    geo = system.geometry
    p = geo.section(section).point(s)
    z0 = entering_zone(system, section, p)
    crossings = [(section, float(s))]
    if z0 is None:
        return ReturnTrace(None, f"no transversal crossing at {section} ({p[0]:.6g}, {p[1]:.6g})", tuple(crossings))
    zone, q = z0, p
    for _ in range(max_legs):
        try:
            arc = zone_transit(system, zone, q)
        except NotImplementedError as exc:
            return ReturnTrace(None, f"unsupported: {exc}", tuple(crossings))
        if not arc.ok:
            return ReturnTrace(None, f"{arc.kind} in {zone}" + (f": {arc.note}" if arc.note else ""), tuple(crossings))
        q = arc.exit
        nxt = entering_zone(system, arc.section, q)
        if nxt is None or nxt == zone:
            return ReturnTrace(None, f"no transversal crossing at {arc.section} ({q[0]:.6g}, {q[1]:.6g})",
                               tuple(crossings))
        s_new = geo.section(arc.section).param(q)
        if arc.section == section and nxt == z0:
            return ReturnTrace(s_new, "", tuple(crossings))
        crossings.append((arc.section, s_new))
        zone = nxt
    return ReturnTrace(None, "no return within the leg budget", tuple(crossings))
