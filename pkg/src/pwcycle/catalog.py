"""Built-in example systems.

Each entry stores the right-hand sides exactly as printed in the source
examples, the parsed model, and caveat flags where the printed system does
not fit the analytic solvers (non-Hamiltonian right parts) or where the
entry had to be reconstructed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .model import (AffineField, CenterSpec, FrozenRadial, PiecewiseSystem, RaySaddle, SaddleSpec,
                    SwitchingGeometry, Variant, divergence)
from .sysfile import SystemDescription, describe_system


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    summary: str
    left: str  # printed left / sector part
    right: str  # printed right / outer part (and middle for three zones)
    system: PiecewiseSystem
    caveats: Tuple[str, ...] = ()

    @property
    def analytic_zone(self):
        """The zone whose divergence decides whether the closing solvers apply."""
        geo = self.system.geometry
        if geo.variant == Variant.RAY_PAIR:
            return self.system.zones[0]
        return self.system.zones[-1]

    @property
    def right_divergence(self) -> float:
        z = self.analytic_zone
        if isinstance(z, AffineField):
            return z.trace
        if isinstance(z, (SaddleSpec,)):
            return 0.0
        if isinstance(z, RaySaddle):
            return 2 * z.a
        return divergence(z, (0.7, 0.3))

    @property
    def hamiltonian(self) -> bool:
        """Right part divergence-free (sector saddle for ray systems is dissipative by design)."""
        z = self.analytic_zone
        return isinstance(z, SaddleSpec) or (isinstance(z, AffineField) and z.trace == 0)

    @property
    def analyzable(self) -> bool:
        return self.hamiltonian or self.system.geometry.variant == Variant.RAY_PAIR

    def description(self) -> SystemDescription:
        return describe_system(self.system)


def _line(label, left, right, center, rhs, summary, caveats=()):
    sys_ = PiecewiseSystem(SwitchingGeometry.one_line(), (center, rhs), label)
    return CatalogEntry(label, summary, left, right, sys_, tuple(caveats))


_ANNULUS_RHS = "(x+y, -x-y-1)"
_ANNULUS_SADDLE = SaddleSpec(-1, -1, -1, -1, 0, allow_degenerate=True)
_DISSIPATIVE_RHS = "(2x+2y-1, -x-y-1)"
_DISSIPATIVE = AffineField(2, 2, -1, -1, -1, -1)
_TANGENT_RHS = "(x+2y-1, x-y-3)"
_TANGENT_SADDLE = SaddleSpec(1, -1, -2, -3, -1)
_DEGENERATE_RIGHT = "(-x-2y, -x+y+3)"
_DEGENERATE_SADDLE = SaddleSpec(-1, 1, 2, 3, 0)

_NOT_SADDLE = ("right part has alpha*delta - beta^2 = 0: a degenerate (non-hyperbolic) linear "
               "Hamiltonian field rather than a saddle",)
_NON_HAM = ("right part has divergence 1, so it is not a linear Hamiltonian saddle; "
            "the closing solvers refuse it (portrait/verify only)",)
_RECON = ("reconstructed entry: same right part as the threshold family with k = -5 < -delta^2/mu^2, "
          "illustrating the regime below the threshold",)


def _entries() -> Dict[str, CatalogEntry]:
    e = [
        _line("annulus-f1", "(y, -x^3)", _ANNULUS_RHS, CenterSpec("F1"), _ANNULUS_SADDLE,
              "F1 center, mu = 0: period annulus", _NOT_SADDLE),
        _line("annulus-f2", "(y+y^3, -x^3)", _ANNULUS_RHS, CenterSpec("F2"), _ANNULUS_SADDLE,
              "F2 center, mu = 0: period annulus", _NOT_SADDLE),
        _line("annulus-f3", "(y+x^2y+y^3, -x^3-xy^2)", _ANNULUS_RHS, CenterSpec("F3", 1), _ANNULUS_SADDLE,
              "F3 center a = 1, mu = 0: period annulus", _NOT_SADDLE),
        _line("annulus-f4", "(y-x^2y+y^3, -x^3+xy^2)", _ANNULUS_RHS, CenterSpec("F4", 1), _ANNULUS_SADDLE,
              "F4 center a = 1, mu = 0: period annulus", _NOT_SADDLE),
        _line("annulus-f5", "(y+2xy+x^2y+y^3, -x^3-y^2-xy^2)", _ANNULUS_RHS, CenterSpec("F5", 1, 1),
              _ANNULUS_SADDLE, "F5 center a = b = 1, mu = 0: period annulus", _NOT_SADDLE),
        _line("dissipative-f3", "(y+x^2y-2y^3, -x^3-xy^2)", _DISSIPATIVE_RHS, CenterSpec("F3", -2),
              _DISSIPATIVE, "F3 center a = -2 with a dissipative affine right part", _NON_HAM),
        _line("dissipative-f4", "(y-x^2y-2y^3, -x^3+xy^2)", _DISSIPATIVE_RHS, CenterSpec("F4", -2),
              _DISSIPATIVE, "F4 center a = -2 with a dissipative affine right part", _NON_HAM),
        _line("dissipative-f5", "(y+2xy-2x^2y-3y^3, -x^3-y^2+2xy^2)", _DISSIPATIVE_RHS,
              CenterSpec("F5", -2, -3), _DISSIPATIVE,
              "F5 center a = -2, b = -3 with a dissipative affine right part", _NON_HAM),
        _line("tangent-f3", "(y+x^2y-4y^3, -x^3-xy^2)", _TANGENT_RHS, CenterSpec("F3", -4), _TANGENT_SADDLE,
              "F3 center at the threshold k = -delta^2/mu^2 = -4"),
        _line("tangent-f4", "(y-x^2y-4y^3, -x^3+xy^2)", _TANGENT_RHS, CenterSpec("F4", -4), _TANGENT_SADDLE,
              "F4 center at the threshold k = -4"),
        _line("tangent-f5", "(y+2xy-4x^2y-4y^3, -x^3-y^2+4xy^2)", _TANGENT_RHS, CenterSpec("F5", -4, -4),
              _TANGENT_SADDLE, "F5 center a = b = -4 at the threshold k = -4"),
        _line("below-f3", "(y+x^2y-5y^3, -x^3-xy^2)", _TANGENT_RHS, CenterSpec("F3", -5), _TANGENT_SADDLE,
              "F3 center below the threshold, k = -5", _RECON),
        _line("below-f4", "(y-x^2y-5y^3, -x^3+xy^2)", _TANGENT_RHS, CenterSpec("F4", -5), _TANGENT_SADDLE,
              "F4 center below the threshold, k = -5", _RECON),
        _line("below-f5", "(y+2xy-5x^2y-5y^3, -x^3-y^2+5xy^2)", _TANGENT_RHS, CenterSpec("F5", -5, -5),
              _TANGENT_SADDLE, "F5 center a = b = -5 below the threshold, k = -5", _RECON),
        _line("i1-saddle", "(y(x^2-y^2)-2x^4y, x(x^2+y^2)-2x^3y^2)", _DEGENERATE_RIGHT, CenterSpec("I1"),
              _DEGENERATE_SADDLE, "I1 degenerate center with a Hamiltonian saddle, mu = 0",
              ("I1 orbits through the section exist only for 1 < |y| < 1.1235810204; the saddle "
               "separatrices meet x = 0 at |y| = sqrt(3), outside that range",)),
        _line("i2-saddle", "(-y(3x^2+y^2), x(x^2-y^2))", _DEGENERATE_RIGHT, CenterSpec("I2"),
              _DEGENERATE_SADDLE, "I2 degenerate center with a Hamiltonian saddle, mu = 0"),
    ]
    half = math.pi / 2
    e += [
        CatalogEntry("ray-frozen", "sector saddle (a, alpha, beta) = (-1/2, 1, 0), frozen radius outside",
                     "(a(x-alpha)-(y-beta), -(x-alpha)+a(y-beta))", "(R', theta') = (0, 1)",
                     PiecewiseSystem(SwitchingGeometry.ray_pair(half), (RaySaddle(-0.5, 1, 0), FrozenRadial(1)),
                                     "ray-frozen"),
                     ("printed outer dynamics read (R', theta') = (0, 0); the derivation gives (0, 1)",)),
        CatalogEntry("ray-i1", "sector saddle (-1/2, 1, 0), I1 center outside",
                     "(a(x-alpha)-(y-beta), -(x-alpha)+a(y-beta))", "(y(x^2-y^2)-2x^4y, x(x^2+y^2)-2x^3y^2)",
                     PiecewiseSystem(SwitchingGeometry.ray_pair(half), (RaySaddle(-0.5, 1, 0), CenterSpec("I1")),
                                     "ray-i1")),
        CatalogEntry("ray-i2", "sector saddle (-1/2, 1, 0), I2 center outside",
                     "(a(x-alpha)-(y-beta), -(x-alpha)+a(y-beta))", "(-y(3x^2+y^2), x(x^2-y^2))",
                     PiecewiseSystem(SwitchingGeometry.ray_pair(half), (RaySaddle(-0.5, 1, 0), CenterSpec("I2")),
                                     "ray-i2")),
    ]
    return {x.name: x for x in e}


CATALOG: Dict[str, CatalogEntry] = _entries()


def get(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown catalog entry {name!r}; known: {', '.join(CATALOG)}") from None


def lookup(name: str) -> Optional[CatalogEntry]:
    return CATALOG.get(name)


def listing() -> str:
    rows = []
    for x in CATALOG.values():
        geo = x.system.geometry.variant.value
        ham = "hamiltonian" if x.hamiltonian else f"non-hamiltonian (divergence {x.right_divergence:g})"
        if geo == Variant.RAY_PAIR.value:
            ham = f"sector divergence {x.right_divergence:g}"
        model = "; ".join(f"{n}={z.describe()}" for n, z in zip(x.system.zone_names, x.system.zones))
        rows.append(f"{x.name}\t{geo}\tleft={x.left}\tright={x.right}\t{ham}\t{x.summary}")
        rows.append(f"\tmodel: {model}")
        rows.extend(f"\tcaveat: {c}" for c in x.caveats)
    return "\n".join(rows) + "\n"
