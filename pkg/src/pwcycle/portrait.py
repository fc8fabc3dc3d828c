"""Phase portraits as SVG 1.1 or CSV.

The SVG uses the data coordinates directly: the viewBox matches the box,
a single ``scale(1,-1)`` group flips the y-axis up, and stroke widths are
in user units.  Numbers are printed with a fixed format and elements are
emitted in a fixed order, so identical inputs give identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .closing import ClosingReport
from .integrate import DEFAULT_CONFIG, Backward, Forward, IntegratorConfig, run
from .model import (AffineField, CenterSpec, FrozenRadial, PiecewiseSystem, RaySaddle, SaddleSpec,
                    Variant, BOUNDARY)

Box = Tuple[float, float, float, float]
Point = Tuple[float, float]


@dataclass
class Curve:
    role: str  # "orbit", "separatrix" or "cycle"
    samples: List[Tuple[float, float, float, str]]


@dataclass
class Portrait:
    box: Box
    switching: List[Tuple[Point, Point]] = field(default_factory=list)
    equilibria: List[Tuple[Point, bool]] = field(default_factory=list)  # (point, lies in its own zone)
    curves: List[Curve] = field(default_factory=list)


def _clip_segment(p: Point, q: Point, box: Box) -> Optional[Tuple[Point, Point]]:
    # Liang-Barsky
    x0, y0, x1, y1 = box
    dx, dy = q[0] - p[0], q[1] - p[1]
    t0, t1 = 0.0, 1.0
    for pk, qk in ((-dx, p[0] - x0), (dx, x1 - p[0]), (-dy, p[1] - y0), (dy, y1 - p[1])):
        if pk == 0:
            if qk < 0:
                return None
            continue
        r = qk / pk
        if pk < 0:
            t0 = max(t0, r)
        else:
            t1 = min(t1, r)
    if t0 > t1:
        return None
    return (p[0] + t0 * dx, p[1] + t0 * dy), (p[0] + t1 * dx, p[1] + t1 * dy)


def _switching(system: PiecewiseSystem, box: Box):
    x0, y0, x1, y1 = box
    span = 2 * (abs(x0) + abs(x1) + abs(y0) + abs(y1)) + 1
    segs = []
    for sec in system.geometry.sections:
        if system.geometry.variant == Variant.RAY_PAIR:
            a, b = sec.point(0.0), sec.point(span)
        else:
            a, b = sec.point(-span), sec.point(span)
        c = _clip_segment(a, b, box)
        if c is not None:
            segs.append(c)
    return segs


def _equilibrium(z) -> Optional[Point]:
    if isinstance(z, (CenterSpec, FrozenRadial)):
        return (0.0, 0.0)
    aff = z if isinstance(z, AffineField) else z.as_affine()
    if aff.det == 0:
        return None
    return aff.equilibrium()


def _equilibria(system: PiecewiseSystem):
    out = []
    seen = set()
    for name, z in zip(system.zone_names, system.zones):
        e = _equilibrium(z)
        if e is None:
            continue
        key = (round(e[0], 12), round(e[1], 12))
        if key in seen:
            continue
        seen.add(key)
        where = system.zone_of(e)
        out.append((e, where in (name, BOUNDARY)))
    return out


def _saddle_eigen(z):
    if not isinstance(z, (SaddleSpec, RaySaddle, AffineField)):
        return None
    aff = z if isinstance(z, AffineField) else z.as_affine()
    if aff.det >= 0:
        return None
    lam, vec = np.linalg.eig(np.array(aff.matrix, dtype=float))
    return aff.equilibrium(), lam.real, vec.real


def _trace(system, p, direction, cfg, zone, max_events, t_max):
    return run(system, p, direction, cfg, start_zone=zone, max_events=max_events, t_max=t_max)


def _seeds(system: PiecewiseSystem, box: Box, n: int) -> List[Point]:
    if n <= 0:
        return []
    x0, y0, x1, y1 = box
    sec = system.geometry.sections[0]
    if system.geometry.variant == Variant.RAY_PAIR:
        top = 0.95 * min(max(abs(x0), abs(x1)), max(abs(y0), abs(y1)))
    else:
        top = 0.95 * max(abs(y0), abs(y1))
    if top <= 0:
        return []
    lo = top / 100
    ss = [top] if n == 1 else [lo * (top / lo) ** (i / (n - 1)) for i in range(n)]
    if system.geometry.variant != Variant.RAY_PAIR and abs(y0) > abs(y1):
        ss = [-s for s in ss]
    return [sec.point(s) for s in ss]


def build(system: PiecewiseSystem, box: Box, orbits: int = 8, report: Optional[ClosingReport] = None,
          cfg: IntegratorConfig = DEFAULT_CONFIG, max_events: int = 12, t_max: float = 100.0) -> Portrait:
    x0, y0, x1, y1 = box
    if not (x1 > x0 and y1 > y0):
        raise ValueError("box needs x0 < x1 and y0 < y1")
    radius = 4 * max(abs(x0), abs(x1), abs(y0), abs(y1)) + 1
    cfg = replace(cfg, max_radius=min(cfg.max_radius, radius))
    pic = Portrait(box, _switching(system, box), _equilibria(system))
    if orbits <= 0:
        return pic
    # separatrices of saddles that lie in their own zone
    for name, z in zip(system.zone_names, system.zones):
        eig = _saddle_eigen(z)
        if eig is None:
            continue
        e, lam, vec = eig
        if system.zone_of(e) != name:
            continue
        for k, d in ((int(np.argmax(lam)), Forward), (int(np.argmin(lam)), Backward)):
            for sgn in (1.0, -1.0):
                p = (e[0] + sgn * 1e-9 * vec[0, k], e[1] + sgn * 1e-9 * vec[1, k])
                tr = _trace(system, p, d, cfg, name, 1, t_max)
                pic.curves.append(Curve("separatrix", tr.samples))
    for p in _seeds(system, box, orbits):
        tr = _trace(system, p, Forward, cfg, None, max_events, t_max)
        if len(tr.samples) < 2 and system.geometry.variant != Variant.RAY_PAIR:
            # sliding or tangent seed: use the mirrored ordinate instead
            tr = _trace(system, (p[0], -p[1]), Forward, cfg, None, max_events, t_max)
        pic.curves.append(Curve("orbit", tr.samples))
    if report is not None:
        for cand in ([report.separatrix_cycle] if report.separatrix_cycle else []) + list(
                c for c in report.candidates if c is not report.separatrix_cycle):
            sec, s = cand.points[0]
            p = system.geometry.section(sec).point(s)
            tr = _trace(system, p, Forward, cfg, None, len(cand.points), t_max)
            pic.curves.append(Curve("cycle", tr.samples))
    return pic


_STYLE = {"orbit": ("#1f5fa8", 1.0), "separatrix": ("#c0392b", 1.4), "cycle": ("#1e8449", 2.0)}


def _f(v: float) -> str:
    s = f"{v:.6f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def to_svg(pic: Portrait) -> str:
    x0, y0, x1, y1 = pic.box
    w, h = x1 - x0, y1 - y0
    unit = 0.002 * max(w, h)
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="600" height="{_f(600 * h / w)}" '
           f'viewBox="{_f(x0)} {_f(-y1)} {_f(w)} {_f(h)}">',
           '<defs><clipPath id="box"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>'.format(
               _f(x0), _f(y0), _f(w), _f(h)),
           '<g transform="scale(1,-1)" clip-path="url(#box)" fill="none" stroke-linejoin="round">',
           f'<rect x="{_f(x0)}" y="{_f(y0)}" width="{_f(w)}" height="{_f(h)}" fill="#ffffff" stroke="none"/>',
           f'<g id="switching" stroke="#555555" stroke-width="{_f(1.5 * unit)}" stroke-dasharray="{_f(6 * unit)}">']
    for a, b in pic.switching:
        out.append(f'<line x1="{_f(a[0])}" y1="{_f(a[1])}" x2="{_f(b[0])}" y2="{_f(b[1])}"/>')
    out.append("</g>")
    for role in ("orbit", "separatrix", "cycle"):
        color, wmul = _STYLE[role]
        out.append(f'<g id="{role}s" stroke="{color}" stroke-width="{_f(wmul * unit)}">')
        for c in pic.curves:
            if c.role != role or len(c.samples) < 2:
                continue
            pts = " ".join(f"{_f(x)},{_f(y)}" for _, x, y, _ in c.samples)
            out.append(f'<polyline class="{role}" points="{pts}"/>')
        out.append("</g>")
    out.append(f'<g id="equilibria" stroke="#000000" stroke-width="{_f(unit)}">')
    for (ex, ey), real in pic.equilibria:
        fill = "#000000" if real else "#ffffff"
        out.append(f'<circle cx="{_f(ex)}" cy="{_f(ey)}" r="{_f(4 * unit)}" fill="{fill}"/>')
    out.append("</g>")
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def to_csv(pic: Portrait) -> str:
    rows = ["t,x,y,zone,curve,role"]
    for i, c in enumerate(pic.curves):
        for t, x, y, z in c.samples:
            rows.append(f"{t!r},{x!r},{y!r},{z},{i},{c.role}")
    return "\n".join(rows) + "\n"


def polylines(svg: str) -> List[List[Point]]:
    """Polyline point lists of an SVG produced by to_svg (for inspection and tests)."""
    out = []
    for line in svg.splitlines():
        if line.startswith("<polyline"):
            raw = line.split('points="', 1)[1].split('"', 1)[0]
            out.append([tuple(float(v) for v in pair.split(",")) for pair in raw.split()])
    return out


def render(system: PiecewiseSystem, box: Sequence[float], fmt: str = "svg", orbits: int = 8,
           report: Optional[ClosingReport] = None, cfg: IntegratorConfig = DEFAULT_CONFIG) -> str:
    pic = build(system, tuple(float(v) for v in box), orbits, report, cfg)
    if fmt == "svg":
        return to_svg(pic)
    if fmt == "csv":
        return to_csv(pic)
    raise ValueError(f"unknown format {fmt!r}")
