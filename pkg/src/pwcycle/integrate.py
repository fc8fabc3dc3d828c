"""Event-driven integration of piecewise fields.

Each zone is integrated by the Dormand-Prince 5(4) kernel (compiled when
available).  When the orbit leaves a zone the exit is located on the dense
output by bisection, snapped onto the switching section, checked for
transversality, and the integration restarts in the neighbouring zone a
distance 10*event_tol along the new field.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import List, Optional, Sequence, Tuple

from .errors import DegenerateError
from .model import BOUNDARY, PiecewiseSystem, SaddleSpec, Variant, field_at

if os.environ.get("PWCYCLE_PURE"):
    from ._pycore import integrate_zone as _kernel
    KERNEL = "python"
else:
    try:
        from ._core import integrate_zone as _kernel
        KERNEL = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        from ._pycore import integrate_zone as _kernel
        KERNEL = "python"

from . import _pycore

Point = Tuple[float, float]


class Direction(str, Enum):
    FORWARD = "forward"
    BACKWARD = "backward"

    @property
    def sign(self) -> float:
        return 1.0 if self is Direction.FORWARD else -1.0


Forward, Backward = Direction.FORWARD, Direction.BACKWARD


class Status(str, Enum):
    COMPLETED = "Completed"
    LEFT_DOMAIN = "LeftDomain"
    MAX_STEPS = "MaxStepsExceeded"
    HIT_EQUILIBRIUM = "HitEquilibrium"
    TANGENCY = "Tangency"
    TIME_LIMIT = "TimeLimit"


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 10**6
    event_tol: float = 1e-12
    equilibrium_speed_floor: float = 1e-13
    max_radius: float = 1e3
    max_time: float = 1e6

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "event_tol", "equilibrium_speed_floor", "max_radius", "max_time"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if int(self.max_steps) < 1:
            raise ValueError("max_steps must be positive")

    def with_env(self) -> "IntegratorConfig":
        """Apply the PWCYCLE_MAX_STEPS override, if set."""
        raw = os.environ.get("PWCYCLE_MAX_STEPS")
        if not raw:
            return self
        return replace(self, max_steps=int(raw))


DEFAULT_CONFIG = IntegratorConfig()


@dataclass(frozen=True)
class Event:
    t: float
    point: Point
    section: str
    from_zone: str
    to_zone: str
    sign: int


@dataclass
class Trajectory:
    samples: List[Tuple[float, float, float, str]] = field(default_factory=list)
    events: List[Event] = field(default_factory=list)
    status: Status = Status.COMPLETED
    note: str = ""
    steps: int = 0

    @property
    def end(self) -> Point:
        t, x, y, _ = self.samples[-1]
        return x, y

    @property
    def completed(self) -> bool:
        return self.status is Status.COMPLETED

    def points(self):
        return [(x, y) for _, x, y, _ in self.samples]


_STATUS = {
    _pycore.TIME_LIMIT: Status.TIME_LIMIT,
    _pycore.MAX_STEPS: Status.MAX_STEPS,
    _pycore.EQUILIBRIUM: Status.HIT_EQUILIBRIUM,
    _pycore.LEFT_DOMAIN: Status.LEFT_DOMAIN,
    _pycore.NONFINITE: Status.LEFT_DOMAIN,
}


def _transversal(system: PiecewiseSystem, sec, p: Point, z_from: str, z_to: str, d: float):
    fa = field_at(system.field_of(z_from), p)
    fb = field_at(system.field_of(z_to), p)
    sa = d * (sec.nx * fa[0] + sec.ny * fa[1])
    sb = d * (sec.nx * fb[0] + sec.ny * fb[1])
    if abs(sa) <= 1e-10 * math.hypot(*fa) + 1e-300 or abs(sb) <= 1e-10 * math.hypot(*fb) + 1e-300:
        return 0, "tangency"
    if sa * sb < 0:
        return 0, "sliding"
    return (1 if sa > 0 else -1), ""


def entering_zone(system: PiecewiseSystem, section: str, p: Point, direction: Direction = Forward):
    """Zone that the flow enters from a point on a section, or None at tangency/sliding."""
    geo = system.geometry
    sec = geo.section(section)
    d = direction.sign
    zones = [z for z in geo.zone_names if section in geo.regions()[z][1]]
    a, b = zones
    sign, _ = _transversal(system, sec, p, a, b, d)
    if sign == 0:
        return None
    # the section coordinate increases into the zone whose region has it positive
    return _positive_side(geo, section, a, b) if sign > 0 else _negative_side(geo, section, a, b)


def _positive_side(geo, section, a, b):
    sec = geo.section(section)
    probe = sec.point(1.0)
    q = (probe[0] + 1e-3 * sec.nx, probe[1] + 1e-3 * sec.ny)
    return a if geo.zone_of(q) == a else b


def _negative_side(geo, section, a, b):
    pos = _positive_side(geo, section, a, b)
    return b if pos == a else a


def run(system: PiecewiseSystem, p0: Point, direction: Direction = Forward,
        cfg: IntegratorConfig = DEFAULT_CONFIG, stop_section: Optional[str] = None,
        max_events: Optional[int] = None, start_zone: Optional[str] = None,
        record: bool = True, t0: float = 0.0, t_max: Optional[float] = None,
        stop_to_zone: Optional[str] = None, own_side_only: bool = False) -> Trajectory:
    """Integrate the piecewise flow from p0.

    Stops at the first transversal hit of ``stop_section`` (if given; with
    ``stop_to_zone`` only a hit entering that zone counts), after
    ``max_events`` switching events, or on any non-completing status.
    """
    geo = system.geometry
    regions = geo.regions()
    d = direction.sign
    traj = Trajectory()
    x, y = float(p0[0]), float(p0[1])
    t = t0
    zone = start_zone or geo.zone_of((x, y))
    if zone == BOUNDARY:
        on = [s for s in geo.sections if abs(s.coordinate((x, y))) <= 1e-12]
        zone = entering_zone(system, on[0].name, (x, y), direction) if on else None
        if zone is None:
            traj.status = Status.TANGENCY
            traj.note = "start point on the switching set without transversal flow"
            traj.samples.append((t, x, y, BOUNDARY))
            return traj
    elapsed_budget = cfg.max_time if t_max is None else t_max
    if zone != geo.zone_of((x, y)):
        fx, fy = field_at(system.field_of(zone), (x, y))
        sp = math.hypot(fx, fy)
        if sp < cfg.equilibrium_speed_floor:
            traj.status = Status.HIT_EQUILIBRIUM
            traj.samples.append((t, x, y, zone))
            return traj
        traj.samples.append((t, x, y, zone))
        off = 10 * cfg.event_tol
        x, y = x + d * off * fx / sp, y + d * off * fy / sp
        t += d * off / sp
    steps_left = int(cfg.max_steps)
    n_events = 0
    h0 = 0.0
    while True:
        fld = system.field_of(zone)
        kind, params = fld.kernel_spec()
        cons, names, comp = regions[zone]
        status, t1, x1, y1, steps, h, samples, idx = _kernel(
            kind, params, cons, comp, x, y, t, d, elapsed_budget, h0, cfg.rel_tol, cfg.abs_tol,
            steps_left, cfg.event_tol, cfg.equilibrium_speed_floor, cfg.max_radius, record)
        steps_left -= steps
        traj.steps += steps
        elapsed_budget -= abs(t1 - t)
        if record:
            for i in range(0, len(samples), 3):
                traj.samples.append((samples[i], samples[i + 1], samples[i + 2], zone))
        else:
            traj.samples = [(t1, x1, y1, zone)]
        if status != _pycore.EVENT:
            traj.status = _STATUS[status]
            return traj
        if geo.variant == Variant.RAY_PAIR:
            sec_name = geo.ray_section_of((x1, y1))
        else:
            sec_name = names[idx]
        sec = geo.section(sec_name)
        pe = sec.snap((x1, y1))
        traj.samples[-1] = (t1, pe[0], pe[1], zone)
        nxt = geo.neighbor(zone, sec_name)
        sign, why = _transversal(system, sec, pe, zone, zone if own_side_only else nxt, d)
        if sign == 0:
            traj.status = Status.TANGENCY
            traj.note = f"{why} at {sec_name} ({pe[0]:.6g}, {pe[1]:.6g})"
            return traj
        traj.events.append(Event(t1, pe, sec_name, zone, nxt, sign))
        n_events += 1
        if stop_section is not None and sec_name == stop_section and stop_to_zone in (None, nxt):
            return traj
        if max_events is not None and n_events >= max_events:
            return traj
        if steps_left <= 0:
            traj.status = Status.MAX_STEPS
            return traj
        fx, fy = field_at(system.field_of(nxt), pe)
        sp = math.hypot(fx, fy)
        off = 10 * cfg.event_tol
        x, y = pe[0] + d * off * fx / sp, pe[1] + d * off * fy / sp
        t = t1 + d * off / sp
        zone = nxt
        h0 = h


def integrate_until_section(system: PiecewiseSystem, p0: Point, section: str,
                            direction: Direction = Forward, cfg: IntegratorConfig = DEFAULT_CONFIG,
                            record: bool = True, start_zone: Optional[str] = None) -> Trajectory:
    """Integrate until the first transversal hit of ``section``."""
    if section not in [s.name for s in system.geometry.sections]:
        raise KeyError(f"unknown section {section!r}")
    return run(system, p0, Direction(direction), cfg, stop_section=section, record=record,
               start_zone=start_zone)


def integrate_field(fld, p0: Point, t_end: float, cfg: IntegratorConfig = DEFAULT_CONFIG,
                    constraints: Sequence[Tuple[float, float, float]] = (), record: bool = True,
                    direction: Direction = Forward):
    """Integrate a single smooth field for time t_end (or until leaving the constraints).

    Returns (status, t, point, samples) with status a kernel code mapped to Status,
    or Completed when a constraint boundary was reached.
    """
    kind, params = fld.kernel_spec()
    status, t1, x1, y1, steps, h, samples, idx = _kernel(
        kind, params, tuple(constraints), False, float(p0[0]), float(p0[1]), 0.0,
        Direction(direction).sign, t_end, 0.0, cfg.rel_tol, cfg.abs_tol, cfg.max_steps,
        cfg.event_tol, cfg.equilibrium_speed_floor, cfg.max_radius, record)
    pts = None
    if record:
        pts = [(samples[i], samples[i + 1], samples[i + 2]) for i in range(0, len(samples), 3)]
    st = Status.COMPLETED if status == _pycore.EVENT else _STATUS[status]
    return st, t1, (x1, y1), pts


def flow_linear_saddle_exact(s: SaddleSpec, p0: Point, t: float) -> Point:
    """Exact flow of the affine saddle field.

    With M = [[-b, -d], [a, b]] the eigenvalues are +-w, w = sqrt(-D); the
    eigendecomposition collapses to exp(Mt) = cosh(wt) I + sinh(wt)/w M.
    """
    disc = s.alpha * s.delta - s.beta**2
    if disc >= 0:
        raise DegenerateError("exact saddle flow requires a negative discriminant")
    w = math.sqrt(-disc)
    m11, m12, m21, m22 = -s.beta, -s.delta, s.alpha, s.beta
    # equilibrium e solves M e + c = 0; the flow is e + exp(Mt)(p0 - e)
    x0 = -s.u / disc
    y0 = s.v / disc
    dx, dy = p0[0] - x0, p0[1] - y0
    ch = math.cosh(w * t)
    sh = math.sinh(w * t) / w
    return (x0 + ch * dx + sh * (m11 * dx + m12 * dy), y0 + ch * dy + sh * (m21 * dx + m22 * dy))
