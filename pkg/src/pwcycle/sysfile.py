"""Sectioned key = value system description files.

    # comment
    [switching]
    variant = one_line          # one_line | two_lines | ray_pair
    phi = 1.5707963267948966    # ray_pair only (default pi/2)

    [center]                    # left zone (lines) or outer zone (rays)
    kind = F3                   # F1..F5, I1, I2; frozen_radial for rays
    a = -4
    b = 0
    n = 1                       # frozen_radial only

    [saddle]                    # right zone (one_line) or middle zone (two_lines)
    alpha = 1
    beta = -1
    delta = -2
    gamma = -3
    mu = -1
    allow_degenerate = false

    [saddle2]                   # right zone (two_lines)
    [affine]                    # general affine right zone (one_line): m11 m12 m21 m22 c1 c2
    [ray_saddle]                # sector zone (ray_pair): a alpha beta
    [options]                   # integrator and scan settings

Numbers are decimal doubles; unknown sections or keys are errors that cite
the offending line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace
from typing import Dict, List, Optional, Tuple

from .errors import DegenerateError, ParseError
from .integrate import DEFAULT_CONFIG, IntegratorConfig
from .model import (AffineField, CenterKind, CenterSpec, FrozenRadial, PiecewiseSystem, RaySaddle,
                    SaddleSpec, SwitchingGeometry, Variant)

_SADDLE_KEYS = ("alpha", "beta", "delta", "gamma", "mu", "allow_degenerate")
_KEYS = {
    "switching": ("variant", "phi"),
    "center": ("kind", "a", "b", "n"),
    "saddle": _SADDLE_KEYS,
    "saddle2": _SADDLE_KEYS,
    "affine": ("m11", "m12", "m21", "m22", "c1", "c2"),
    "ray_saddle": ("a", "alpha", "beta"),
    "options": ("rel_tol", "abs_tol", "event_tol", "max_steps", "max_radius", "max_time",
                "scan_resolution", "scan_from", "scan_to", "annulus_samples"),
}
_STRING_KEYS = {("switching", "variant"), ("center", "kind")}
_BOOL_KEYS = {("saddle", "allow_degenerate"), ("saddle2", "allow_degenerate")}
_INT_KEYS = {("center", "n"), ("options", "max_steps"), ("options", "annulus_samples")}
_REQUIRED = {
    Variant.ONE_LINE: ("center",),
    Variant.TWO_LINES: ("center", "saddle", "saddle2"),
    Variant.RAY_PAIR: ("center", "ray_saddle"),
}
_ALLOWED = {
    Variant.ONE_LINE: {"switching", "center", "saddle", "affine", "options"},
    Variant.TWO_LINES: {"switching", "center", "saddle", "saddle2", "options"},
    Variant.RAY_PAIR: {"switching", "center", "ray_saddle", "options"},
}
_CFG_KEYS = ("rel_tol", "abs_tol", "event_tol", "max_steps", "max_radius", "max_time")
RAY_OUTER = ("frozen_radial", "I1", "I2")


@dataclass(frozen=True)
class SystemDescription:
    """Parsed file: raw section values plus the lines they came from."""

    sections: Tuple[Tuple[str, Tuple[Tuple[str, object], ...]], ...]
    lines: Tuple[Tuple[str, int], ...] = field(default=(), compare=False, repr=False)

    def section(self, name: str) -> Dict[str, object]:
        for sec, items in self.sections:
            if sec == name:
                return dict(items)
        return {}

    def has(self, name: str) -> bool:
        return any(sec == name for sec, _ in self.sections)

    def line_of(self, key: str) -> Optional[int]:
        return dict(self.lines).get(key)

    @property
    def variant(self) -> Variant:
        return Variant(self.section("switching")["variant"])

    @property
    def phi(self) -> float:
        return float(self.section("switching").get("phi", math.pi / 2))

    def get(self, dotted: str):
        sec, key = _split(dotted)
        vals = self.section(sec)
        if key not in vals:
            raise KeyError(dotted)
        return vals[key]

    def with_value(self, dotted: str, value) -> "SystemDescription":
        """Copy with one numeric parameter replaced (the key must already exist)."""
        sec, key = _split(dotted)
        if not self.has(sec) or key not in self.section(sec):
            raise KeyError(dotted)
        out = []
        for s, items in self.sections:
            if s == sec:
                items = tuple((k, value if k == key else v) for k, v in items)
            out.append((s, items))
        return replace(self, sections=tuple(out))

    def options(self) -> Dict[str, object]:
        return self.section("options")

    def config(self, base: IntegratorConfig = DEFAULT_CONFIG) -> IntegratorConfig:
        opts = {k: v for k, v in self.options().items() if k in _CFG_KEYS}
        return replace(base, **opts).with_env()

    def build(self) -> PiecewiseSystem:
        return build_system(self)


def _split(dotted: str):
    if dotted.count(".") != 1:
        raise KeyError(dotted)
    return tuple(dotted.split("."))


def _value(sec: str, key: str, raw: str, line: int):
    if (sec, key) in _STRING_KEYS:
        return raw
    if (sec, key) in _BOOL_KEYS:
        low = raw.lower()
        if low not in ("true", "false"):
            raise ParseError(f"{sec}.{key} must be true or false, got {raw!r}", line)
        return low == "true"
    if (sec, key) in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ParseError(f"{sec}.{key} must be an integer, got {raw!r}", line) from None
    try:
        v = float(raw)
    except ValueError:
        raise ParseError(f"{sec}.{key} must be a number, got {raw!r}", line) from None
    if not math.isfinite(v):
        raise ParseError(f"{sec}.{key} must be finite", line)
    return v


def parse(text: str) -> SystemDescription:
    sections: Dict[str, Dict[str, object]] = {}
    order: List[str] = []
    lines: Dict[str, int] = {}
    cur = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(f"malformed section header {raw.strip()!r}", no)
            cur = line[1:-1].strip()
            if cur not in _KEYS:
                raise ParseError(f"unknown section [{cur}]", no)
            if cur in sections:
                raise ParseError(f"duplicate section [{cur}]", no)
            sections[cur] = {}
            order.append(cur)
            lines[cur] = no
            continue
        if "=" not in line:
            raise ParseError(f"expected key = value, got {raw.strip()!r}", no)
        if cur is None:
            raise ParseError("key outside of any section", no)
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS[cur]:
            raise ParseError(f"unknown key {key!r} in [{cur}]", no)
        if key in sections[cur]:
            raise ParseError(f"duplicate key {key!r} in [{cur}]", no)
        if not val:
            raise ParseError(f"empty value for {cur}.{key}", no)
        sections[cur][key] = _value(cur, key, val, no)
        lines[f"{cur}.{key}"] = no
    last = len(text.splitlines()) or 1
    if "switching" not in sections:
        raise ParseError("missing required section [switching]", last)
    sw = sections["switching"]
    if "variant" not in sw:
        raise ParseError("[switching] needs a variant", lines["switching"])
    try:
        variant = Variant(sw["variant"])
    except ValueError:
        raise ParseError(f"unknown variant {sw['variant']!r}", lines["switching.variant"]) from None
    where = lines["switching.variant"]
    for sec in _REQUIRED[variant]:
        if sec not in sections:
            raise ParseError(f"missing required section [{sec}] for variant {variant.value}", where)
    if variant == Variant.ONE_LINE:
        if "saddle" not in sections and "affine" not in sections:
            raise ParseError("missing required section [saddle] (or [affine]) for variant one_line", where)
        if "saddle" in sections and "affine" in sections:
            raise ParseError("one_line takes either [saddle] or [affine] for the right zone, not both", where)
    for sec in order:
        if sec not in _ALLOWED[variant]:
            raise ParseError(f"section [{sec}] is not used by variant {variant.value}", lines[sec])
    if "phi" in sw and variant != Variant.RAY_PAIR:
        raise ParseError("phi only applies to ray_pair", lines["switching.phi"])
    desc = SystemDescription(tuple((s, tuple(sections[s].items())) for s in order), tuple(lines.items()))
    build_system(desc)  # surfaces model errors with line numbers
    return desc


def read(path: str) -> SystemDescription:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(desc: SystemDescription) -> str:
    out = []
    for sec, items in desc.sections:
        if out:
            out.append("")
        out.append(f"[{sec}]")
        out.extend(f"{k} = {_fmt(v)}" for k, v in items)
    return "\n".join(out) + "\n"


def _need(desc, sec, keys):
    vals = desc.section(sec)
    for k in keys:
        if k not in vals:
            raise ParseError(f"[{sec}] is missing {k}", desc.line_of(sec))
    return vals


def _model_error(desc, sec, exc):
    line = desc.line_of(sec)
    msg = f"line {line}: [{sec}] {exc}" if line else f"[{sec}] {exc}"
    if isinstance(exc, DegenerateError):
        return DegenerateError(msg)
    return ParseError(f"[{sec}] {exc}", line)


def _saddle(desc, sec) -> SaddleSpec:
    v = _need(desc, sec, ("alpha", "beta", "delta", "gamma", "mu"))
    try:
        return SaddleSpec(v["alpha"], v["beta"], v["delta"], v["gamma"], v["mu"],
                          allow_degenerate=bool(v.get("allow_degenerate", False)))
    except (ValueError, DegenerateError) as exc:
        raise _model_error(desc, sec, exc) from None


def build_system(desc: SystemDescription) -> PiecewiseSystem:
    variant = desc.variant
    c = desc.section("center")
    if "kind" not in c:
        raise ParseError("[center] is missing kind", desc.line_of("center"))
    kind = c["kind"]
    if variant == Variant.RAY_PAIR:
        if kind not in RAY_OUTER:
            raise ParseError(f"ray_pair outer zone must be one of {', '.join(RAY_OUTER)}", desc.line_of("center.kind"))
        for k in ("a", "b"):
            if k in c:
                raise ParseError(f"center.{k} does not apply to {kind}", desc.line_of(f"center.{k}"))
        if "n" in c and kind != "frozen_radial":
            raise ParseError("center.n only applies to frozen_radial", desc.line_of("center.n"))
        try:
            outer = FrozenRadial(c.get("n", 1)) if kind == "frozen_radial" else CenterSpec(kind)
            r = _need(desc, "ray_saddle", ("a", "alpha", "beta"))
            sector = RaySaddle(r["a"], r["alpha"], r["beta"])
            return PiecewiseSystem(SwitchingGeometry.ray_pair(desc.phi), (sector, outer))
        except ValueError as exc:
            raise ParseError(str(exc), desc.line_of("ray_saddle") or desc.line_of("switching.phi")) from None
    if "n" in c:
        raise ParseError("center.n only applies to frozen_radial", desc.line_of("center.n"))
    try:
        center = CenterSpec(CenterKind(kind), c.get("a", 0.0), c.get("b", 0.0))
    except ValueError:
        raise ParseError(f"unknown center kind {kind!r}", desc.line_of("center.kind")) from None
    if variant == Variant.ONE_LINE:
        if desc.has("affine"):
            a = _need(desc, "affine", _KEYS["affine"])
            right = AffineField(*(a[k] for k in _KEYS["affine"]))
        else:
            right = _saddle(desc, "saddle")
        return PiecewiseSystem(SwitchingGeometry.one_line(), (center, right))
    return PiecewiseSystem(SwitchingGeometry.two_lines(),
                           (center, _saddle(desc, "saddle"), _saddle(desc, "saddle2")))


def describe_system(system: PiecewiseSystem) -> SystemDescription:
    """Inverse of build_system for systems made of the supported zone types."""
    geo = system.geometry
    secs: List[Tuple[str, Tuple[Tuple[str, object], ...]]] = []
    sw: List[Tuple[str, object]] = [("variant", geo.variant.value)]
    if geo.variant == Variant.RAY_PAIR:
        sw.append(("phi", float(geo.phi)))
    secs.append(("switching", tuple(sw)))

    def saddle_items(s: SaddleSpec):
        items = [(k, getattr(s, k)) for k in ("alpha", "beta", "delta", "gamma", "mu")]
        if s.allow_degenerate:
            items.append(("allow_degenerate", True))
        return tuple(items)

    if geo.variant == Variant.RAY_PAIR:
        sector, outer = system.zones
        if isinstance(outer, FrozenRadial):
            secs.append(("center", (("kind", "frozen_radial"), ("n", outer.n))))
        else:
            secs.append(("center", (("kind", outer.kind.value),)))
        secs.append(("ray_saddle", (("a", sector.a), ("alpha", sector.alpha), ("beta", sector.beta))))
    else:
        center = system.zones[0]
        items: List[Tuple[str, object]] = [("kind", center.kind.value)]
        if center.kind in (CenterKind.F3, CenterKind.F4, CenterKind.F5):
            items.append(("a", center.a))
        if center.kind == CenterKind.F5:
            items.append(("b", center.b))
        secs.append(("center", tuple(items)))
        if geo.variant == Variant.ONE_LINE:
            right = system.zones[1]
            if isinstance(right, SaddleSpec):
                secs.append(("saddle", saddle_items(right)))
            else:
                secs.append(("affine", tuple((f.name, getattr(right, f.name)) for f in fields(AffineField))))
        else:
            secs.append(("saddle", saddle_items(system.zones[1])))
            secs.append(("saddle2", saddle_items(system.zones[2])))
    return SystemDescription(tuple(secs))
