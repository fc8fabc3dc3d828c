"""Machine-readable reports.

A report is a JSON object with sorted keys:

    schema_version   integer, currently 1
    kind             "analysis" | "verification" | "sweep_point" | "sweep_summary"
    system           {"label", "variant", "phi", "zones": [{"name", "model", "hamiltonian"}], "file"}
    closing          closing-solver result or null
    verification     numerical verdicts or null
    extra            free-form mapping (sweep parameter, errors, transitions)

Non-finite floats are written as the strings "inf", "-inf" and "nan" so the
document stays strict JSON; parsing a report and re-serializing it yields
identical text.
"""

from __future__ import annotations

import dataclasses
import json
import math
from enum import Enum
from typing import Any, Dict, Optional

import numpy as np

from .closing import ClosingReport, CrossingCandidate
from .model import PiecewiseSystem, Variant
from .sysfile import describe_system, emit

SCHEMA_VERSION = 1


def plain(obj: Any) -> Any:
    """Convert verdicts and other result objects to JSON-native values."""
    if isinstance(obj, Enum):
        return obj.value
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def number(v: Any) -> float:
    """Inverse of the non-finite float encoding ("inf" parses as a float)."""
    return float(v)


def system_dict(system: PiecewiseSystem) -> Dict[str, Any]:
    geo = system.geometry
    zones = []
    for name, z in zip(system.zone_names, system.zones):
        ham = bool(getattr(z, "hamiltonian", False))
        zones.append({"name": name, "model": z.describe(), "hamiltonian": ham})
    try:
        text = emit(describe_system(system))
    except (AttributeError, TypeError):  # pragma: no cover - custom zone types
        text = None
    return plain({"label": system.label, "variant": geo.variant.value,
                  "phi": geo.phi if geo.variant == Variant.RAY_PAIR else None,
                  "zones": zones, "file": text})


def candidate_dict(system: PiecewiseSystem, cand: Optional[CrossingCandidate]):
    if cand is None:
        return None
    geo = system.geometry
    pts = []
    for sec, s in cand.points:
        x, y = geo.section(sec).point(s)
        pts.append({"section": sec, "param": s, "x": x, "y": y})
    return plain({"points": pts, "degenerate": cand.degenerate, "residuals": list(cand.residuals)})


def closing_dict(rep: ClosingReport) -> Dict[str, Any]:
    sys_ = rep.system
    return plain({
        "classification": rep.classification,
        "algebraic_classification": rep.algebraic_classification,
        "regime": rep.regime,
        "parameters": dict(sorted(rep.parameters.items())),
        "claim": rep.claim,
        "candidates": [candidate_dict(sys_, c) for c in rep.candidates],
        "rejected": [{"candidate": candidate_dict(sys_, r.candidate), "reason": r.reason} for r in rep.rejected],
        "root_count": rep.root_count,
        "pair_count": rep.pair_count,
        "double_root": candidate_dict(sys_, rep.double_root),
        "separatrix_cycle": candidate_dict(sys_, rep.separatrix_cycle),
        "annulus": [[lo, hi] for lo, hi in rep.annulus],
        "annulus_section": rep.annulus_section,
        "notes": list(rep.notes),
    })


def verification_dict(out: Dict[str, Any]) -> Dict[str, Any]:
    d = {k: plain(v) for k, v in out.items()}
    scan = out.get("scan")
    if scan is not None:
        d["scan"]["count"] = scan.count
    return d


@dataclasses.dataclass
class Report:
    kind: str
    system: Optional[Dict[str, Any]] = None
    closing: Optional[Dict[str, Any]] = None
    verification: Optional[Dict[str, Any]] = None
    extra: Dict[str, Any] = dataclasses.field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return {"schema_version": self.schema_version, "kind": self.kind, "system": self.system,
                "closing": self.closing, "verification": self.verification, "extra": plain(self.extra)}

    def to_json(self, compact: bool = False) -> str:
        if compact:
            return json.dumps(self.to_dict(), sort_keys=True, allow_nan=False, separators=(",", ":"))
        return json.dumps(self.to_dict(), sort_keys=True, allow_nan=False, indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: Dict[str, Any]) -> "Report":
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported report schema_version {version!r}")
        return cls(d["kind"], d.get("system"), d.get("closing"), d.get("verification"), d.get("extra", {}), version)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

