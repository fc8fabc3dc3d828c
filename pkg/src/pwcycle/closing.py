"""Closing (matching) equations and classification of crossing periodic orbits.

A crossing periodic orbit meets the switching set at finitely many points;
on each zone the arc between consecutive points lies on one level set of
that zone's first integral.  The solvers below write these conditions as
algebraic equations, solve them, and then filter the algebraic roots with
closed-form zone transits (module ``arcs``): a root is only admissible when
each zone's orbit really carries one crossing point to the next.  Every
rejection is recorded on the report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from . import arcs
from .errors import DegenerateConfig, HypothesisViolation, NotHamiltonian
from .model import (CenterKind, CenterSpec, FrozenRadial, PiecewiseSystem, RaySaddle, SaddleSpec,
                    first_integral, ray_system, three_zone, two_zone)
from .saddle_geometry import analyze_saddle, separatrix_ray_intersections

ZERO_TOL = 1e-12
RESIDUAL_TOL = 1e-10
MATCH_TOL = 1e-7


class Classification(str, Enum):
    PERIOD_ANNULUS = "PeriodAnnulus"
    NO_REAL_CANDIDATE = "NoRealCandidate"
    CANDIDATES = "Candidates"
    DEGENERATE_DOUBLE_ROOT = "DegenerateDoubleRoot"
    SEPARATRIX_CYCLE_ONLY = "SeparatrixCycleOnly"


class RayKind(str, Enum):
    FROZEN_RADIAL = "frozen_radial"
    I1_SECTOR = "I1_sector"
    I2_SECTOR = "I2_sector"


@dataclass(frozen=True)
class CrossingCandidate:
    """Crossing points (section name, section parameter) of a candidate orbit."""

    points: Tuple[Tuple[str, float], ...]
    degenerate: bool = False
    residuals: Tuple[float, ...] = ()

    @property
    def max_residual(self) -> float:
        return max(self.residuals, default=0.0)

    def ordinates(self, section: str) -> Tuple[float, ...]:
        return tuple(v for s, v in self.points if s == section)


@dataclass(frozen=True)
class Rejection:
    candidate: Optional[CrossingCandidate]
    reason: str


@dataclass
class ClosingReport:
    classification: Classification
    regime: str
    parameters: Dict[str, float]
    system: PiecewiseSystem
    candidates: List[CrossingCandidate] = field(default_factory=list)
    algebraic_classification: Optional[Classification] = None
    claim: str = ""
    rejected: List[Rejection] = field(default_factory=list)
    root_count: int = 0
    pair_count: int = 0
    double_root: Optional[CrossingCandidate] = None
    separatrix_cycle: Optional[CrossingCandidate] = None
    annulus: List[Tuple[float, Optional[float]]] = field(default_factory=list)
    annulus_section: Optional[str] = None
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.algebraic_classification is None:
            self.algebraic_classification = self.classification


def _is_zero(v: float, *scale: float) -> bool:
    return abs(v) <= ZERO_TOL * max([1.0] + [abs(s) for s in scale])


def _canonical(points) -> Tuple[Tuple[str, float], ...]:
    # group by section (in order of first appearance), larger parameter first
    order: List[str] = []
    for s, _ in points:
        if s not in order:
            order.append(s)
    out = []
    for s in order:
        out.extend(sorted(((s, float(v)) for t, v in points if t == s), key=lambda e: -e[1]))
    return tuple(out)


def _dedupe(cands: List[CrossingCandidate]) -> List[CrossingCandidate]:
    out: List[CrossingCandidate] = []
    for c in cands:
        if not any(len(c.points) == len(o.points) and all(
                a[0] == b[0] and abs(a[1] - b[1]) <= 1e-12 * (1 + abs(a[1])) for a, b in zip(c.points, o.points))
                   for o in out):
            out.append(c)
    return out


def _admissible(system: PiecewiseSystem, cand: CrossingCandidate) -> Optional[str]:
    """None when exact transits close the candidate orbit, else the rejection reason."""
    if cand.max_residual > RESIDUAL_TOL:
        return f"residual {cand.max_residual:.3g} exceeds {RESIDUAL_TOL:g}"
    sec, s0 = cand.points[0]
    tr = arcs.exact_first_return(system, sec, s0, max_legs=len(cand.points) + 2)
    if tr.value is None:
        return tr.reason
    scale = 1 + max(abs(v) for _, v in cand.points)
    if abs(tr.value - s0) > MATCH_TOL * scale:
        return f"orbit returns to {sec} at {tr.value:.10g} instead of {s0:.10g}"
    if len(tr.crossings) != len(cand.points):
        return f"orbit crosses the switching set {len(tr.crossings)} times, not {len(cand.points)}"
    for s, v in tr.crossings:
        if not any(s == t and abs(v - w) <= MATCH_TOL * scale for t, w in cand.points):
            return f"orbit crosses {s} at {v:.10g}, which is not a candidate point"
    return None


def _filter(report: ClosingReport, cands: List[CrossingCandidate]) -> List[CrossingCandidate]:
    kept = []
    for c in _dedupe(cands):
        why = _admissible(report.system, c)
        if why is None:
            kept.append(c)
        else:
            report.rejected.append(Rejection(c, why))
    return kept


def annulus_extent(system: PiecewiseSystem, section: str, lower: float = 0.0,
                   exponents=(-6.0, 3.0), n: int = 181) -> List[Tuple[float, Optional[float]]]:
    """Ordinate intervals (lo, hi) on ``section`` whose orbits close under exact transits.

    The grid is lower + 10**u for u on a uniform grid; interval ends are
    refined by bisection.  hi is None when closure holds up to the grid top.
    """

    def closes(y):
        tr = arcs.exact_first_return(system, section, y, max_legs=6)
        return tr.value is not None and abs(tr.value - y) <= MATCH_TOL * (1 + abs(y))

    ys = [lower + 10.0**u for u in np.linspace(exponents[0], exponents[1], n)]
    flags = [closes(y) for y in ys]
    out = []
    i = 0
    while i < n:
        if not flags[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and flags[j + 1]:
            j += 1
        lo = float(lower) if i == 0 else _edge(closes, ys[i - 1], ys[i])
        hi = None if j == n - 1 else _edge(closes, ys[j + 1], ys[j])
        out.append((lo, hi))
        i = j + 1
    return out


def _edge(closes, bad: float, good: float) -> float:
    for _ in range(60):
        mid = 0.5 * (bad + good)
        if mid in (bad, good):
            break
        if closes(mid):
            good = mid
        else:
            bad = mid
    return float(good)


# ------------------------------------------------------------ two zones, nilpotent

def close_two_zone_nilpotent(center: CenterSpec, saddle: SaddleSpec) -> ClosingReport:
    """Center F_i on x < 0, Hamiltonian saddle on x > 0, switching line x = 0."""
    if not center.is_nilpotent:
        raise ValueError("close_two_zone_nilpotent needs a nilpotent center F1..F5")
    _require_hamiltonian(saddle)
    k, delta, mu = center.k, saddle.delta, saddle.mu
    system = two_zone(center, saddle)
    params = {"k": k, "delta": delta, "mu": mu}
    if _is_zero(delta) and not _is_zero(mu):
        raise DegenerateConfig("delta = 0 with mu != 0: matching at x = 0 forces 0 = 2 mu")
    if _is_zero(mu):
        claim = "period annulus" if k >= 0 else "no period annulus"
        rep = ClosingReport(Classification.PERIOD_ANNULUS, "mu=0,k>=0" if k >= 0 else "mu=0,k<0", params,
                            system, claim=claim)
        _finish_annulus(rep, "x=0")
        if k < 0:
            rep.notes.append("mu = 0 with k < 0: orbits with y^2 < -1/k still close (bounded annulus)")
        return rep
    if k >= 0:
        return ClosingReport(Classification.NO_REAL_CANDIDATE, "mu!=0,k>=0", params, system,
                             claim="no limit cycle")
    D = -mu * mu / (delta * delta) - 1.0 / k
    params["D"] = D
    params["threshold_k"] = -delta * delta / (mu * mu)
    m = mu / delta
    if abs(D) <= ZERO_TOL * max(1.0, m * m, abs(1.0 / k)):
        cand = _two_cand(center, saddle, m, m, degenerate=True)
        rep = ClosingReport(Classification.DEGENERATE_DOUBLE_ROOT, "D=0", params, system,
                            claim="one limit cycle", root_count=1, pair_count=1, double_root=cand)
        rep.notes.append("double root: the saddle field is tangent to x = 0 there; not a crossing orbit")
        return rep
    if D < 0:
        return ClosingReport(Classification.NO_REAL_CANDIDATE, "D<0", params, system,
                             claim="two limit cycles")
    r = math.sqrt(D)
    cand = _two_cand(center, saddle, m + r, m - r)
    rep = ClosingReport(Classification.CANDIDATES, "D>0", params, system, claim="no limit cycle",
                        root_count=2, pair_count=1)
    rep.candidates = _filter(rep, [cand])
    if not rep.candidates:
        rep.classification = Classification.NO_REAL_CANDIDATE
    return rep


def _gap(a: float, b: float) -> float:
    # matching residual, relative once the integral values exceed 1
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _two_cand(center, saddle, y1, y2, degenerate=False) -> CrossingCandidate:
    res = (_gap(first_integral(center, (0.0, y1)), first_integral(center, (0.0, y2))),
           _gap(first_integral(saddle, (0.0, y1)), first_integral(saddle, (0.0, y2))))
    return CrossingCandidate(_canonical([("x=0", y1), ("x=0", y2)]), degenerate, res)


def _finish_annulus(rep: ClosingReport, section: str, lower: float = 0.0):
    rep.annulus_section = section
    rep.annulus = annulus_extent(rep.system, section, lower)
    if not rep.annulus:
        rep.classification = Classification.NO_REAL_CANDIDATE
        rep.rejected.append(Rejection(None, "no ordinate on the section closes under exact transits"))


def _require_hamiltonian(*saddles):
    for s in saddles:
        if not isinstance(s, SaddleSpec):
            raise NotHamiltonian(f"closing needs a Hamiltonian saddle zone, got {type(s).__name__}")


# ------------------------------------------------ three zones, shared saddle side

@dataclass
class _SaddleSide:
    kind: str  # "roots", "annulus", "none", "degenerate"
    roots: List[Tuple[float, float, float]] = field(default_factory=list)  # (y, y3, y4)
    note: str = ""
    invariant_line: Optional[str] = None


def _reference_coefficients(s1: SaddleSpec, s2: SaddleSpec) -> Dict[str, float]:
    out: Dict[str, float] = {}
    if _is_zero(s1.delta) or _is_zero(s2.delta):
        return out
    try:
        l1 = (s1.mu + s1.beta) / s1.delta
        n1 = (s1.mu - s1.beta) / s1.delta
        n2 = (s2.mu - s2.beta) / s2.delta
        k1 = s1.gamma / s1.delta
        P = n2 * n2 - l1 * l1
        out.update(ref_l1=l1, ref_nu1=n1, ref_nu2=n2, ref_k1=k1, P=P, Q=-2 * (n1 + n2) * P,
                   R=n2**4 + n1 * n1 * n2 * n2 + P * n1 * n2 + (4 * k1 - 2 * n2 * n2) * l1 * l1)
    except OverflowError:
        return {}
    return out


def _three_zone_saddle_side(s1: SaddleSpec, s2: SaddleSpec, y2_of_y=None) -> _SaddleSide:
    """Solve the middle/right matching with y2 = -y1.

    With m1 = b1 + u1, l_i = b_i - u_i (b = beta, u = mu) the conditions are
      (d1/2)(y3^2 - y^2) - m1 y + l1 y3 + 2 g1 = 0
      (d1/2)(y4^2 - y^2) + m1 y + l1 y4 + 2 g1 = 0
      (y3 - y4)(d2 (y3 + y4) + 2 l2) = 0,   y3 != y4.
    """
    d1, d2, g1 = s1.delta, s2.delta, s1.gamma
    m1 = s1.beta + s1.mu
    l1 = s1.beta - s1.mu
    l2 = s2.beta - s2.mu
    sc = max(abs(d1), abs(d2), abs(m1), abs(l1), abs(l2), abs(g1))
    z = lambda v: _is_zero(v, sc)  # noqa: E731
    if z(d2):
        if z(l2):
            return _SaddleSide("annulus", note="x = 1 is a level curve of the right saddle",
                               invariant_line="x=1")
        return _SaddleSide("none", note="delta2 = 0 forces y3 = y4")
    sigma = -2 * l2 / d2
    if z(d1):
        if z(l1):
            return _SaddleSide("none", note="delta1 = 0 and beta1 = mu1 force y = 0")
        if z(m1):
            return _SaddleSide("annulus", note="x = -1 is a level curve of the middle saddle",
                               invariant_line="x=-1")
        if z(d2 * (-4 * g1 / l1) + 2 * l2):
            return _SaddleSide("annulus", note="linear middle matching satisfies the right condition for every y")
        return _SaddleSide("none", note="linear middle matching contradicts the right condition")
    Delta = d2 * l1 - d1 * l2
    if z(Delta):
        raise DegenerateConfig(f"Delta = delta2*l1 - delta1*l2 = {Delta:g} vanishes; matching forces y1 = 0")
    kappa = 2 * m1 * d2 / Delta
    den = d1 * (kappa * kappa / 4 - 1)
    num = -(d1 * sigma * sigma / 4 + l1 * sigma + 4 * g1)
    if z(den):
        if z(num):
            return _SaddleSide("annulus", note="degenerate quadratic holds identically")
        return _SaddleSide("none", note="degenerate quadratic has no solution")
    y2 = num / den
    if y2 <= 0:
        return _SaddleSide("none", note=f"y1^2 = {y2:.6g} is not positive")
    y = math.sqrt(y2)
    u = np.array([y, (sigma + kappa * y) / 2, (sigma - kappa * y) / 2])
    # a few Newton steps on the unreduced system sharpen ill-conditioned roots
    for _ in range(3):
        y, y3, y4 = u
        r = np.array([(d1 / 2) * (y3 * y3 - y * y) - m1 * y + l1 * y3 + 2 * g1,
                      (d1 / 2) * (y4 * y4 - y * y) + m1 * y + l1 * y4 + 2 * g1,
                      d2 * (y3 + y4) + 2 * l2])
        J = np.array([[-d1 * y - m1, d1 * y3 + l1, 0.0],
                      [-d1 * y + m1, 0.0, d1 * y4 + l1],
                      [0.0, d2, d2]])
        try:
            step = np.linalg.solve(J, r)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        u = u - step
    return _SaddleSide("roots", [tuple(float(v) for v in u)])


def _three_cand(center, s1, s2, y1, y2, y3, y4) -> CrossingCandidate:
    F = lambda y: first_integral(center, (-1.0, y))  # noqa: E731
    res = (_gap(F(y1), F(y2)),
           _gap(first_integral(s1, (-1.0, y2)), first_integral(s1, (1.0, y3))),
           _gap(first_integral(s1, (-1.0, y1)), first_integral(s1, (1.0, y4))),
           _gap(first_integral(s2, (1.0, y3)), first_integral(s2, (1.0, y4))))
    return CrossingCandidate(_canonical([("x=-1", y1), ("x=-1", y2), ("x=1", y3), ("x=1", y4)]), False, res)


def _center_sum_branch(center: CenterSpec) -> Optional[float]:
    """S with y1^2 + y2^2 = S from F(-1, y1) = F(-1, y2), y1^2 != y2^2 (None if absent)."""
    (b2, b1, b0), C = center.level_coefficients()
    if C == 0:
        return None
    S = -(b2 - b1 + b0) / C
    return S if S > 0 else None


def _sum_branch_roots(s1: SaddleSpec, s2: SaddleSpec, S: float):
    """Solutions with y1^2 + y2^2 = S (y1 = sqrt(S) cos t, y2 = sqrt(S) sin t)."""
    d1, d2, g1 = s1.delta, s2.delta, s1.gamma
    m1, l1, l2 = s1.beta + s1.mu, s1.beta - s1.mu, s2.beta - s2.mu
    rs = math.sqrt(S)

    def sols(yl, yr_sign):
        # H1(-1, yl) = H1(1, y): (d1/2) y^2 + l1 y + [-(d1/2) yl^2 + m1 yl + 2 g1] = 0
        c = -(d1 / 2) * yl * yl + m1 * yl + 2 * g1
        if d1 == 0:
            return [-c / l1] if l1 != 0 else []
        disc = l1 * l1 - 2 * d1 * c
        if disc < 0:
            return []
        r = math.sqrt(disc)
        return [(-l1 + yr_sign * r) / d1]

    out = []
    for s3 in (1, -1):
        for s4 in (1, -1):
            def g(t):
                y1, y2 = rs * math.cos(t), rs * math.sin(t)
                a = sols(y2, s3)
                b = sols(y1, s4)
                if not a or not b:
                    return math.nan
                return d2 * (a[0] + b[0]) + 2 * l2

            ts = np.linspace(0, 2 * math.pi, 721)
            vals = [g(t) for t in ts]
            for t0, t1, v0, v1 in zip(ts[:-1], ts[1:], vals[:-1], vals[1:]):
                if math.isfinite(v0) and math.isfinite(v1) and v0 * v1 < 0:
                    t = brentq(g, t0, t1, xtol=1e-15)
                    y1, y2 = rs * math.cos(t), rs * math.sin(t)
                    if abs(y1 * y1 - y2 * y2) <= 1e-9 * S:
                        continue
                    out.append((y1, y2, sols(y2, s3)[0], sols(y1, s4)[0]))
    return out


def close_three_zone_nilpotent(center: CenterSpec, s1: SaddleSpec, s2: SaddleSpec) -> ClosingReport:
    """Center F_i on x < -1, saddle s1 on |x| < 1, saddle s2 on x > 1."""
    if not center.is_nilpotent:
        raise ValueError("close_three_zone_nilpotent needs a nilpotent center F1..F5")
    _require_hamiltonian(s1, s2)
    system = three_zone(center, s1, s2)
    params = _three_params(s1, s2)
    params["k"] = center.k
    side = _three_zone_saddle_side(s1, s2)
    rep = _three_zone_report(system, side, params, center, s1, s2, "at most two limit cycles")
    S = _center_sum_branch(center)
    if S is not None:
        params["center_sum"] = S
        extra = [_three_cand(center, s1, s2, *r) for r in _sum_branch_roots(s1, s2, S)]
        if extra:
            rep.root_count += len(extra)
            rep.algebraic_classification = Classification.CANDIDATES
            kept = _filter(rep, extra)
            rep.candidates = _dedupe(rep.candidates + kept)
            if rep.candidates and rep.classification == Classification.NO_REAL_CANDIDATE:
                rep.classification = Classification.CANDIDATES
    rep.pair_count = len(rep.candidates)
    return rep


def _three_params(s1, s2) -> Dict[str, float]:
    p = {"delta1": s1.delta, "delta2": s2.delta, "m1": s1.beta + s1.mu, "l1": s1.beta - s1.mu,
         "l2": s2.beta - s2.mu, "Delta": s2.delta * (s1.beta - s1.mu) - s1.delta * (s2.beta - s2.mu)}
    p.update(_reference_coefficients(s1, s2))
    return p


def _three_zone_report(system, side: _SaddleSide, params, center, s1, s2, claim) -> ClosingReport:
    if side.kind == "roots":
        cands = [_three_cand(center, s1, s2, y, -y, y3, y4) for y, y3, y4 in side.roots]
        rep = ClosingReport(Classification.CANDIDATES, "quadratic", params, system, claim=claim,
                            root_count=len(cands))
        rep.candidates = _filter(rep, cands)
        if not rep.candidates:
            rep.classification = Classification.NO_REAL_CANDIDATE
        rep.pair_count = len(rep.candidates)
        return rep
    if side.kind == "annulus":
        rep = ClosingReport(Classification.PERIOD_ANNULUS, "annulus", params, system, claim=claim)
        rep.notes.append(side.note)
        if side.invariant_line is not None:
            rep.classification = Classification.NO_REAL_CANDIDATE
            rep.rejected.append(Rejection(None, f"{side.invariant_line} is invariant: orbits cannot cross it"))
            return rep
        _finish_annulus(rep, "x=-1")
        return rep
    rep = ClosingReport(Classification.NO_REAL_CANDIDATE, "none", params, system, claim=claim)
    rep.notes.append(side.note)
    return rep


# ------------------------------------------------------- degenerate centers

def close_two_zone_degenerate(center: CenterSpec, saddle: SaddleSpec) -> ClosingReport:
    """Center I1/I2 on x < 0, Hamiltonian saddle on x > 0."""
    if center.is_nilpotent:
        raise ValueError("close_two_zone_degenerate needs a degenerate center I1 or I2")
    _require_hamiltonian(saddle)
    g = analyze_saddle(saddle)
    if g.x0 <= 0:
        raise HypothesisViolation(f"saddle equilibrium x0 = {g.x0:g} must be positive")
    system = two_zone(center, saddle)
    params = {"delta": saddle.delta, "mu": saddle.mu, "x0": g.x0, "y0": g.y0}
    if g.complete:
        params.update(A=g.A, B=g.B)
    if not _is_zero(saddle.mu):
        return ClosingReport(Classification.NO_REAL_CANDIDATE, "mu!=0", params, system,
                             claim="no limit cycle",
                             notes=["center side forces y1 = -y2, saddle side forces delta (y1 + y2) = 2 mu"])
    rep = ClosingReport(Classification.PERIOD_ANNULUS, "mu=0", params, system,
                        claim="period annulus bounded by a separatrix cycle")
    _finish_annulus(rep, "x=0")
    if g.complete and abs(g.A + g.B) <= 1e-12 * (1 + abs(g.A)):
        cyc = _two_cand(center, saddle, g.A, g.B)
        why = _separatrix_left_arc(system, g.A, g.B)
        if why is None:
            rep.separatrix_cycle = cyc
        else:
            rep.rejected.append(Rejection(cyc, f"separatrix cycle: {why}"))
    return rep


def _separatrix_left_arc(system: PiecewiseSystem, A: float, B: float) -> Optional[str]:
    from .integrate import entering_zone

    top = (0.0, max(A, B))
    bottom = (0.0, min(A, B))
    z_top = entering_zone(system, "x=0", top)
    z_bot = entering_zone(system, "x=0", bottom)
    if z_top is None or z_bot is None or z_top == z_bot:
        return "separatrix points are not transversal crossings"
    p = top if z_top == "left" else bottom
    q = bottom if p is top else top
    arc = arcs.zone_transit(system, "left", p)
    if not arc.ok:
        return f"left arc from ({p[0]:g}, {p[1]:.10g}) does not return: {arc.kind}" + (
            f" ({arc.note})" if arc.note else "")
    if abs(arc.exit[1] - q[1]) > MATCH_TOL * (1 + abs(q[1])):
        return f"left arc returns at y = {arc.exit[1]:.10g} instead of {q[1]:.10g}"
    return None


def close_three_zone_degenerate(center: CenterSpec, s1: SaddleSpec, s2: SaddleSpec) -> ClosingReport:
    """Center I1/I2 on x < -1, saddles on |x| < 1 and x > 1."""
    if center.is_nilpotent:
        raise ValueError("close_three_zone_degenerate needs a degenerate center I1 or I2")
    _require_hamiltonian(s1, s2)
    system = three_zone(center, s1, s2)
    params = _three_params(s1, s2)
    try:
        side = _three_zone_saddle_side(s1, s2)
    except DegenerateConfig:
        rep = ClosingReport(Classification.NO_REAL_CANDIDATE, "nu1=nu2", params, system,
                            claim="no periodic solution")
        rep.notes.append("nu1 = nu2 forces y1 = 0, which is not a crossing point")
        return rep
    rep = _three_zone_report(system, side, params, center, s1, s2, "at most one periodic solution")
    return rep


# -------------------------------------------------------------- ray systems

def ray_pair_system(kind: RayKind, saddle_params, phi: float = math.pi / 2, n: int = 1) -> PiecewiseSystem:
    kind = RayKind(kind)
    a, al, be = saddle_params
    outer = {RayKind.FROZEN_RADIAL: FrozenRadial(n), RayKind.I1_SECTOR: CenterSpec(CenterKind.I1),
             RayKind.I2_SECTOR: CenterSpec(CenterKind.I2)}[kind]
    return ray_system(RaySaddle(a, al, be), outer, phi)


def close_ray_system(kind: RayKind, saddle_params, phi: float = math.pi / 2, n: int = 1) -> ClosingReport:
    """Separatrix cycle of the sector saddle closed through the outer zone."""
    kind = RayKind(kind)
    a, al, be = (float(v) for v in saddle_params)
    if not -1 < a < 0:
        raise ValueError("ray saddle requires -1 < a < 0")
    if not 0 < phi <= math.pi / 2:
        raise ValueError("phi must lie in (0, pi/2]")
    system = ray_pair_system(kind, (a, al, be), phi, n)
    inter = separatrix_ray_intersections(system.zones[0], phi)
    geo = system.geometry
    p_up, p_dn = inter.unstable, inter.stable
    r_up = geo.section("ray+").param(p_up)
    r_dn = geo.section("ray-").param(p_dn)
    params = {"a": a, "alpha": al, "beta": be, "phi": phi, "P_plus_x": p_up[0], "P_plus_y": p_up[1],
              "P_minus_x": p_dn[0], "P_minus_y": p_dn[1]}
    claim = {RayKind.FROZEN_RADIAL: "exactly one limit cycle",
             RayKind.I1_SECTOR: "one limit cycle" if abs(al + be) <= 1 and abs(al - be) <= 1 else "no limit cycle",
             RayKind.I2_SECTOR: "exactly one limit cycle"}[kind]
    cyc = CrossingCandidate((("ray+", r_up), ("ray-", r_dn)), False,
                            (abs(_line_residual(p_up, al, be, -1)), abs(_line_residual(p_dn, al, be, 1))))
    rep = ClosingReport(Classification.SEPARATRIX_CYCLE_ONLY, kind.value, params, system, claim=claim)
    why = None
    if abs(math.atan2(be, al)) >= phi:
        why = "saddle lies outside the sector"
    else:
        arc = arcs.zone_transit(system, "outer", p_up)
        if not arc.ok:
            why = f"outer arc from P+ does not return: {arc.kind}" + (f" ({arc.note})" if arc.note else "")
        elif math.hypot(arc.exit[0] - p_dn[0], arc.exit[1] - p_dn[1]) > MATCH_TOL * (1 + r_dn):
            why = f"outer arc from P+ lands at ({arc.exit[0]:.8g}, {arc.exit[1]:.8g}), not at P-"
    if why is None:
        rep.separatrix_cycle = cyc
        rep.candidates = [cyc]
        rep.pair_count = 1
    else:
        rep.classification = Classification.NO_REAL_CANDIDATE
        rep.algebraic_classification = Classification.SEPARATRIX_CYCLE_ONLY
        rep.rejected.append(Rejection(cyc, why))
    return rep


def _line_residual(p, al, be, slope):
    return (p[1] - be) - slope * (p[0] - al)
