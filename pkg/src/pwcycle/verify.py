"""Numerical validation of closing reports.

Everything here uses the Runge-Kutta integrator only (never the closed-form
transits of ``arcs``), so it serves as an independent oracle for the
algebraic solvers: Poincare half-maps, a brute-force fixed-point scan of
their composition, closure of predicted cycles, and separatrix cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .closing import RESIDUAL_TOL, Classification, ClosingReport, CrossingCandidate
from .errors import EmptyDomain
from .integrate import (DEFAULT_CONFIG, Backward, Direction, Forward, IntegratorConfig, Status,
                        entering_zone, run, _positive_side)
from .model import AffineField, PiecewiseSystem, RaySaddle, SaddleSpec, field_at

CLOSURE_TOL = 1e-6
CONTINUUM_FRACTION = 0.95


class Monotonicity(str, Enum):
    INCREASING = "Increasing"
    DECREASING = "Decreasing"
    UNKNOWN = "Unknown"


def _enters(system: PiecewiseSystem, side: str, section: str, p) -> Optional[Direction]:
    """Time direction in which the flow of ``side`` moves from p into ``side``."""
    geo = system.geometry
    sec = geo.section(section)
    f = field_at(system.field_of(side), p)
    nf = sec.nx * f[0] + sec.ny * f[1]
    if abs(nf) <= 1e-10 * math.hypot(*f) or f == (0.0, 0.0):
        return None
    other = geo.neighbor(side, section)
    positive = _positive_side(geo, section, side, other) == side
    return Forward if (nf > 0) == positive else Backward


@dataclass
class HalfMap:
    """Poincare half-map of one zone, sampled on a grid of section parameters."""

    system: PiecewiseSystem
    side: str
    section: str
    samples: List[Tuple[float, float]]
    gaps: List[Tuple[float, str]]
    monotonicity: Monotonicity
    direction: str = "auto"
    cfg: IntegratorConfig = DEFAULT_CONFIG
    out_sections: List[str] = field(default_factory=list)

    @property
    def domain(self) -> Tuple[float, float]:
        ys = [y for y, _ in self.samples]
        return min(ys), max(ys)

    def evaluate(self, y: float, direction: str = "auto"):
        """(exit section, exit parameter) or (None, reason)."""
        return _half_orbit(self.system, self.side, self.section, y, direction, self.cfg)

    def forward(self, y: float) -> Optional[Tuple[str, float]]:
        sec, v = self.evaluate(y, "forward")
        return None if sec is None else (sec, v)


def _half_orbit(system, side, section, y, direction, cfg):
    geo = system.geometry
    p = geo.section(section).point(y)
    d = _enters(system, side, section, p)
    if d is None:
        return None, "tangent or degenerate field at the section"
    if direction == "forward" and d is not Forward:
        return None, "flow leaves the zone in forward time"
    tr = run(system, p, d, cfg, max_events=1, start_zone=side, record=False, own_side_only=True)
    if tr.status is not Status.COMPLETED or not tr.events:
        return None, tr.status.value + (f" ({tr.note})" if tr.note else "")
    ev = tr.events[0]
    return ev.section, geo.section(ev.section).param(ev.point)


def half_map(system: PiecewiseSystem, side: str, y_grid: Sequence[float], section: Optional[str] = None,
             direction: str = "auto", cfg: IntegratorConfig = DEFAULT_CONFIG) -> HalfMap:
    """Sample the half-map of ``side`` at the given section parameters.

    ``direction='auto'`` integrates backward where the zone's field points
    out of the zone (the sample is then the inverse half-map); 'forward'
    records such ordinates as gaps.
    """
    geo = system.geometry
    names = geo.regions()[side][1]
    section = section or names[0]
    samples, gaps, outs = [], [], []
    for y in y_grid:
        sec, v = _half_orbit(system, side, section, float(y), direction, cfg)
        if sec is None:
            gaps.append((float(y), v))
        else:
            samples.append((float(y), float(v)))
            outs.append(sec)
    if not samples:
        raise EmptyDomain(f"no ordinate yields a completed half-orbit in {side}")
    return HalfMap(system, side, section, samples, gaps, _monotone(samples), direction, cfg, outs)


def _monotone(samples) -> Monotonicity:
    if len(samples) < 2:
        return Monotonicity.UNKNOWN
    s = sorted(samples)
    d = [b[1] - a[1] for a, b in zip(s, s[1:])]
    if all(v > 0 for v in d):
        return Monotonicity.INCREASING
    if all(v < 0 for v in d):
        return Monotonicity.DECREASING
    return Monotonicity.UNKNOWN


# ----------------------------------------------------------------- scanning

@dataclass(frozen=True)
class FixedPoint:
    y: float
    bracket: Tuple[float, float]
    kind: str = "crossing"  # or "separatrix" (zero of the gap at a domain edge)


@dataclass
class FixedPointScan:
    zeros: List[FixedPoint]
    continuum: List[Tuple[float, float]]
    grid_points: int
    valid_points: int

    @property
    def count(self) -> int:
        return len(self.zeros)

    def __iter__(self):
        return iter(self.zeros)

    def __len__(self):
        return len(self.zeros)


def _scan(gap: Callable[[float], Optional[float]], lo: float, hi: float, resolution: float) -> FixedPointScan:
    if not hi > lo or resolution <= 0:
        raise EmptyDomain("empty scan interval")
    n = max(2, int(math.ceil((hi - lo) / resolution)) + 1)
    ys = np.linspace(lo, hi, n)
    gs = [gap(float(y)) for y in ys]
    valid = [g is not None for g in gs]
    if not any(valid):
        raise EmptyDomain("no grid ordinate produced a completed return")
    zeros: List[FixedPoint] = []
    continuum: List[Tuple[float, float]] = []
    i = 0
    while i < n:
        if not valid[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and valid[j + 1]:
            j += 1
        run_g = gs[i:j + 1]
        small = sum(abs(g) <= CLOSURE_TOL for g in run_g)
        if j > i and small >= CONTINUUM_FRACTION * len(run_g):
            continuum.append((float(ys[i]), float(ys[j])))
        else:
            for k in range(i, j):
                g0, g1 = gs[k], gs[k + 1]
                if g0 == 0.0:
                    zeros.append(FixedPoint(float(ys[k]), (float(ys[k]), float(ys[k]))))
                elif g0 * g1 < 0:
                    zeros.append(_bisect_zero(gap, float(ys[k]), float(ys[k + 1]), g0))
            if gs[j] == 0.0:
                zeros.append(FixedPoint(float(ys[j]), (float(ys[j]), float(ys[j]))))
            # a gap tending to zero where the domain ends marks a separatrix cycle
            for edge_in, edge_out in ((j, j + 1), (i, i - 1)):
                if 0 <= edge_out < n and not valid[edge_out]:
                    fp = _edge_zero(gap, float(ys[edge_in]), float(ys[edge_out]))
                    if fp is not None:
                        zeros.append(fp)
        i = j + 1
    zeros.sort(key=lambda z: z.y)
    return FixedPointScan(zeros, continuum, n, sum(valid))


def _bisect_zero(gap, a, b, ga) -> FixedPoint:
    lo, hi = a, b
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        gm = gap(mid)
        if gm is None:
            break
        if gm == 0.0:
            return FixedPoint(mid, (lo, hi))
        if (gm > 0) == (ga > 0):
            lo, ga = mid, gm
        else:
            hi = mid
    return FixedPoint(0.5 * (lo + hi), (lo, hi))


def _edge_zero(gap, good, bad) -> Optional[FixedPoint]:
    g_good = gap(good)
    for _ in range(60):
        if abs(bad - good) <= 1e-10:
            break
        mid = 0.5 * (good + bad)
        gm = gap(mid)
        if gm is None:
            bad = mid
        else:
            good, g_good = mid, gm
    if g_good is not None and abs(g_good) <= CLOSURE_TOL:
        return FixedPoint(good, (min(good, bad), max(good, bad)), "separatrix")
    return None


def scan_fixed_points(left: HalfMap, right: HalfMap, resolution: float = 1e-3,
                      domain: Optional[Tuple[float, float]] = None) -> FixedPointScan:
    """Brute-force zeros of y -> right(left(y)) - y on a grid of spacing ``resolution``.

    Both half-maps are evaluated in forward time; ordinates where either
    fails are domain gaps.  Sign changes are refined by bisection to 1e-10;
    a run of grid points that is >= 95% closed is reported as a continuum.
    """
    lo, hi = domain or left.domain

    def gap(y):
        a = left.forward(y)
        if a is None:
            return None
        if right.section != a[0] and a[0] not in right.system.geometry.regions()[right.side][1]:
            return None
        rmap = right if right.section == a[0] else HalfMap(right.system, right.side, a[0], right.samples,
                                                           right.gaps, right.monotonicity, cfg=right.cfg)
        b = rmap.forward(a[1])
        if b is None or b[0] != left.section:
            return None
        return b[1] - y

    return _scan(gap, lo, hi, resolution)


def return_map(system: PiecewiseSystem, section: str, s: float,
               cfg: IntegratorConfig = DEFAULT_CONFIG, record: bool = False):
    """Numerical first return to ``section`` (same crossing direction).

    Returns (parameter or None, trajectory)."""
    geo = system.geometry
    p = geo.section(section).point(s)
    z0 = entering_zone(system, section, p, Forward)
    if z0 is None:
        return None, None
    tr = run(system, p, Forward, cfg, stop_section=section, stop_to_zone=z0, start_zone=z0,
             record=record, max_events=32)
    if tr.status is not Status.COMPLETED or not tr.events or tr.events[-1].section != section \
            or tr.events[-1].to_zone != z0:
        return None, tr
    return geo.section(section).param(tr.events[-1].point), tr


def scan_return_map(system: PiecewiseSystem, section: str, lo: float, hi: float,
                    resolution: float = 1e-3, cfg: IntegratorConfig = DEFAULT_CONFIG) -> FixedPointScan:
    """Fixed-point scan of the full first-return map on ``section``."""

    def gap(s):
        v, _ = return_map(system, section, s, cfg)
        return None if v is None else v - s

    return _scan(gap, lo, hi, resolution)


# --------------------------------------------------------------- verdicts

@dataclass
class VerificationVerdict:
    closure_error: float = math.inf
    confirmed: bool = False
    cause: str = ""
    crossings: List[Tuple[str, float]] = field(default_factory=list)
    annulus: List[Tuple[float, float]] = field(default_factory=list)
    empirical_cycle_count: Optional[int] = None


def verify_candidate(system: PiecewiseSystem, candidate: CrossingCandidate,
                     cfg: IntegratorConfig = DEFAULT_CONFIG) -> VerificationVerdict:
    """Integrate the predicted cycle from its first crossing and measure closure.

    The closure error is the largest distance (in section parameter) between
    a numerically found crossing and the nearest predicted crossing on the
    same section, including the return to the starting point.
    """
    if candidate.max_residual > RESIDUAL_TOL:
        raise ValueError(f"candidate residual {candidate.max_residual:.3g} exceeds {RESIDUAL_TOL:g}")
    geo = system.geometry
    sec0, s0 = candidate.points[0]
    p = geo.section(sec0).point(s0)
    z0 = entering_zone(system, sec0, p, Forward)
    if z0 is None:
        return VerificationVerdict(cause="no transversal crossing at the first candidate point")
    tr = run(system, p, Forward, cfg, stop_section=sec0, stop_to_zone=z0, start_zone=z0, record=False,
             max_events=len(candidate.points) + 2)
    crossings = [(e.section, geo.section(e.section).param(e.point)) for e in tr.events]
    if tr.status is not Status.COMPLETED or not tr.events:
        return VerificationVerdict(cause=tr.status.value + (f": {tr.note}" if tr.note else ""),
                                   crossings=crossings)
    last = tr.events[-1]
    if last.section != sec0 or last.to_zone != z0:
        return VerificationVerdict(cause="orbit did not return to the starting section", crossings=crossings)
    if len(crossings) != len(candidate.points):
        err = abs(crossings[-1][1] - s0)
        return VerificationVerdict(err, False, f"{len(crossings)} crossings instead of {len(candidate.points)}",
                                   crossings)
    err = 0.0
    for sec, v in crossings:
        pred = [w for t, w in candidate.points if t == sec]
        if not pred:
            return VerificationVerdict(math.inf, False, f"unexpected crossing of {sec}", crossings)
        err = max(err, min(abs(v - w) for w in pred))
    return VerificationVerdict(err, err <= CLOSURE_TOL, "" if err <= CLOSURE_TOL else "closure error", crossings)


def verify_annulus(system: PiecewiseSystem, section: str, ys: Sequence[float],
                   cfg: IntegratorConfig = DEFAULT_CONFIG) -> VerificationVerdict:
    """First-return closure error at each sampled ordinate (inf where the orbit fails)."""
    out = []
    for y in ys:
        v, _ = return_map(system, section, float(y), cfg)
        out.append((float(y), math.inf if v is None else abs(v - y)))
    worst = max(e for _, e in out) if out else math.inf
    return VerificationVerdict(worst, worst <= CLOSURE_TOL, "" if worst <= CLOSURE_TOL else "annulus orbit fails to close",
                               annulus=out)


@dataclass
class SeparatrixVerdict:
    landing_error: float
    stable_gap: float
    unstable_gap: float
    confirmed: bool
    cause: str = ""


def _saddle_point(fld):
    if isinstance(fld, (SaddleSpec, RaySaddle)):
        return fld.as_affine().equilibrium()
    if isinstance(fld, AffineField):
        return fld.equilibrium()
    raise TypeError("separatrix cycles need an affine saddle zone")


def verify_separatrix_cycle(system: PiecewiseSystem, cycle: CrossingCandidate,
                            cfg: IntegratorConfig = DEFAULT_CONFIG, offset: float = 1e-9) -> SeparatrixVerdict:
    """Check a separatrix cycle through two switching points numerically.

    The non-saddle arc must carry the point where the cycle leaves the saddle
    zone onto the point where it re-enters.  The saddle branches are checked
    in their well-conditioned time direction: from the equilibrium displaced
    by ``offset`` along the unstable (stable) eigenvector, the forward
    (backward) orbit must reach the corresponding switching point.
    """
    geo = system.geometry
    (sa, va), (sb, vb) = cycle.points[:2]
    pa, pb = geo.section(sa).point(va), geo.section(sb).point(vb)
    za, zb = entering_zone(system, sa, pa, Forward), entering_zone(system, sb, pb, Forward)
    if za is None or zb is None or za == zb:
        return SeparatrixVerdict(math.inf, math.inf, math.inf, False, "cycle points are not transversal crossings")
    affine = (SaddleSpec, RaySaddle, AffineField)
    saddle_zone = za if isinstance(system.field_of(za), affine) else zb
    other = zb if saddle_zone == za else za
    # p_out: the cycle leaves the saddle zone here; p_in: it re-enters here
    p_out, p_in = (pa, pb) if za == other else (pb, pa)
    tr = run(system, p_out, Forward, cfg, max_events=1, start_zone=other, record=False)
    if tr.status is not Status.COMPLETED or not tr.events:
        return SeparatrixVerdict(math.inf, math.inf, math.inf, False,
                                 f"arc through {other} does not return ({tr.status.value})")
    q = tr.events[0].point
    landing = math.hypot(q[0] - p_in[0], q[1] - p_in[1])
    fld = system.field_of(saddle_zone)
    aff = fld if isinstance(fld, AffineField) else fld.as_affine()
    e = aff.equilibrium()
    lam, vec = np.linalg.eig(np.array(aff.matrix, dtype=float))
    gaps = []
    for target, d, which in ((p_in, Backward, int(np.argmin(lam.real))), (p_out, Forward, int(np.argmax(lam.real)))):
        best = math.inf
        for sgn in (1.0, -1.0):
            v = vec[:, which].real
            start = (e[0] + sgn * offset * v[0], e[1] + sgn * offset * v[1])
            t2 = run(system, start, d, cfg, start_zone=saddle_zone, max_events=1, record=False)
            if t2.status is Status.COMPLETED and t2.events:
                pt = t2.events[0].point
                best = min(best, math.hypot(pt[0] - target[0], pt[1] - target[1]))
        gaps.append(best)
    ok = landing <= CLOSURE_TOL and max(gaps) <= CLOSURE_TOL
    return SeparatrixVerdict(landing, gaps[0], gaps[1], ok, "" if ok else "separatrix cycle does not close")


def verify_report(report: ClosingReport, cfg: IntegratorConfig = DEFAULT_CONFIG,
                  annulus_samples: int = 12, scan_resolution: Optional[float] = None,
                  scan_range: Optional[Tuple[float, float]] = None):
    """Numerically check every admissible item of a closing report."""
    out = {"candidates": [verify_candidate(report.system, c, cfg) for c in report.candidates
                          if report.classification != Classification.SEPARATRIX_CYCLE_ONLY],
           "annulus": None, "separatrix": None, "scan": None}
    for lo, hi in report.annulus[:1]:
        top = hi if hi is not None else max(10.0, 10 * lo)
        ys = np.linspace(lo, top, annulus_samples + 2)[1:-1]
        out["annulus"] = verify_annulus(report.system, report.annulus_section, ys, cfg)
    if report.separatrix_cycle is not None:
        out["separatrix"] = verify_separatrix_cycle(report.system, report.separatrix_cycle, cfg)
    if scan_resolution:
        sec = report.system.geometry.sections[0].name
        try:
            lo, hi = scan_range or (scan_resolution, 4.0)
            out["scan"] = scan_return_map(report.system, sec, lo, hi, scan_resolution, cfg)
        except EmptyDomain:
            out["scan"] = None
    return out
