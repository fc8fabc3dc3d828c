"""Workflows behind the command line: analyze, verify and sweep."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

from . import closing
from .closing import ClosingReport, RayKind
from .errors import EmptyDomain, NotHamiltonian, PwcycleError
from .integrate import DEFAULT_CONFIG, IntegratorConfig
from .model import (AffineField, CenterSpec, FrozenRadial, PiecewiseSystem, RaySaddle, SaddleSpec, Variant)
from .report import Report, closing_dict, system_dict, verification_dict
from .sysfile import SystemDescription
from .verify import scan_return_map, verify_report


def as_saddle(z) -> Optional[SaddleSpec]:
    """A divergence-free affine field written as a saddle spec (None otherwise)."""
    if isinstance(z, SaddleSpec):
        return z
    if isinstance(z, AffineField) and z.trace == 0:
        return SaddleSpec(z.m21, z.m22, -z.m12, z.c2, z.c1, allow_degenerate=True)
    return None


def _saddles(system: PiecewiseSystem, zones) -> Tuple[SaddleSpec, ...]:
    out = []
    for z in zones:
        s = as_saddle(z)
        if s is None:
            raise NotHamiltonian(f"zone {z.describe()} has nonzero divergence; "
                                 "use verify or portrait for this system")
        out.append(s)
    return tuple(out)


def solve(system: PiecewiseSystem) -> ClosingReport:
    """Dispatch a system to the matching closing solver."""
    geo = system.geometry
    if geo.variant == Variant.RAY_PAIR:
        sector, outer = system.zones
        if not isinstance(sector, RaySaddle):
            raise NotHamiltonian("ray systems need a ray saddle in the sector")
        if isinstance(outer, FrozenRadial):
            kind, n = RayKind.FROZEN_RADIAL, outer.n
        else:
            kind, n = (RayKind.I1_SECTOR if outer.kind.value == "I1" else RayKind.I2_SECTOR), 1
        rep = closing.close_ray_system(kind, (sector.a, sector.alpha, sector.beta), geo.phi, n)
    else:
        center = system.zones[0]
        if not isinstance(center, CenterSpec):
            raise NotHamiltonian("the left zone must be a center")
        if geo.variant == Variant.ONE_LINE:
            (s,) = _saddles(system, system.zones[1:])
            solver = closing.close_two_zone_nilpotent if center.is_nilpotent else closing.close_two_zone_degenerate
            rep = solver(center, s)
        else:
            s1, s2 = _saddles(system, system.zones[1:])
            solver = closing.close_three_zone_nilpotent if center.is_nilpotent else closing.close_three_zone_degenerate
            rep = solver(center, s1, s2)
    if system.label and rep.system.label is None:
        rep.system = PiecewiseSystem(rep.system.geometry, rep.system.zones, system.label, rep.system.notes)
    return rep


@dataclass(frozen=True)
class Settings:
    cfg: IntegratorConfig = DEFAULT_CONFIG
    scan_resolution: float = 1e-2
    scan_from: Optional[float] = None
    scan_to: float = 4.0
    annulus_samples: int = 12

    @classmethod
    def from_description(cls, desc: SystemDescription, base: IntegratorConfig = DEFAULT_CONFIG) -> "Settings":
        o = desc.options()
        return cls(desc.config(base), float(o.get("scan_resolution", 1e-2)), o.get("scan_from"),
                   float(o.get("scan_to", 4.0)), int(o.get("annulus_samples", 12)))


def scan_range(system: PiecewiseSystem, settings: Settings) -> Tuple[float, float]:
    """Default scan: symmetric about 0 on lines, radial distance on rays."""
    hi = settings.scan_to
    if settings.scan_from is not None:
        return settings.scan_from, hi
    if system.geometry.variant == Variant.RAY_PAIR:
        return settings.scan_resolution, hi
    return -hi, hi


def analyze(system: PiecewiseSystem, settings: Settings = Settings(), verify: bool = False) -> Report:
    rep = solve(system)
    ver = None
    if verify:
        ver = verification_dict(verify_report(rep, settings.cfg, settings.annulus_samples,
                                              settings.scan_resolution, scan_range(system, settings)))
    return Report("analysis", system_dict(rep.system), closing_dict(rep), ver)


def scan_only(system: PiecewiseSystem, settings: Settings = Settings()) -> Report:
    """Numerical return-map scan for systems the closing solvers do not cover."""
    sec = system.geometry.sections[0].name
    lo, hi = scan_range(system, settings)
    extra: Dict[str, object] = {"section": sec, "scan_from": lo, "scan_to": hi}
    try:
        scan = scan_return_map(system, sec, lo, hi, settings.scan_resolution, settings.cfg)
        ver = verification_dict({"scan": scan})
    except EmptyDomain as exc:
        ver = {"scan": None}
        extra["note"] = f"no ordinate produced a first return: {exc}"
    return Report("verification", system_dict(system), None, ver, extra)


def verify(system: PiecewiseSystem, settings: Settings = Settings()) -> Report:
    try:
        solve(system)
    except NotHamiltonian:
        return scan_only(system, settings)
    rep = analyze(system, settings, verify=True)
    rep.kind = "verification"
    return rep


# ------------------------------------------------------------------ sweeps

def sweep_grid(start: float, stop: float, steps: int) -> List[float]:
    if int(steps) != steps or steps < 1:
        raise ValueError("steps must be a positive integer")
    return [start + (stop - start) * i / steps for i in range(steps + 1)]


def _sweep_point(args) -> Dict[str, object]:
    desc, param, value, settings, do_verify = args
    point = {"param": param, "value": value}
    try:
        system = desc.with_value(param, value).build()
        rep = analyze(system, settings, do_verify)
        rep.kind = "sweep_point"
        rep.extra = point
    except PwcycleError as exc:
        rep = Report("sweep_point", None, None, None, dict(point, error=f"{type(exc).__name__}: {exc}"))
    except ValueError as exc:
        rep = Report("sweep_point", None, None, None, dict(point, error=f"ValueError: {exc}"))
    return rep.to_dict()


def _signature(d: Dict[str, object]):
    c = d.get("closing")
    if c is None:
        return ("error",)
    return (c["classification"], c["algebraic_classification"], c["regime"])


def sweep(desc: SystemDescription, param: str, start: float, stop: float, steps: int,
          settings: Settings = Settings(), do_verify: bool = False, jobs: int = 1) -> Iterator[Report]:
    """Analyze at every grid value of ``param``; yields point reports in grid order, then a summary.

    Raises KeyError for an unknown parameter and ValueError for a bad grid.
    """
    current = desc.get(param)
    if isinstance(current, (str, bool)):
        raise KeyError(f"{param} is not numeric")
    grid = sweep_grid(float(start), float(stop), steps)
    return _sweep_iter(desc, param, grid, settings, do_verify, jobs, (start, stop, steps))


def _sweep_iter(desc, param, grid, settings, do_verify, jobs, span) -> Iterator[Report]:
    start, stop, steps = span
    work = [(desc, param, v, settings, do_verify) for v in grid]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_sweep_point, work))
    else:
        results = map(_sweep_point, work)
    prev = None
    transitions = []
    for v, d in zip(grid, results):
        sig = _signature(d)
        if prev is not None and sig != prev[1]:
            transitions.append({"between": [prev[0], v], "from": list(prev[1]), "to": list(sig)})
        prev = (v, sig)
        yield Report.from_dict(d)
    yield Report("sweep_summary", None, None, None,
                 {"param": param, "from": float(start), "to": float(stop), "steps": int(steps),
                  "transitions": transitions})
