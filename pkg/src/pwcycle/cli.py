"""Command line: ``pwcycle analyze|verify|portrait|sweep|catalog``.

Exit codes: 0 success, 2 parse/usage error, 3 solver degeneracy or a system
outside the solvers' hypotheses, 4 unwritable output.  PWCYCLE_MAX_STEPS
overrides the integrator step budget.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import List, Optional

from . import analysis, catalog, portrait
from .errors import (DegenerateConfig, DegenerateError, HypothesisViolation, NoIntersection, NotHamiltonian,
                     ParseError)
from .integrate import DEFAULT_CONFIG
from .sysfile import SystemDescription, emit, read

EXIT_OK, EXIT_PARSE, EXIT_DEGENERATE, EXIT_OUTPUT = 0, 2, 3, 4
_SOLVER_ERRORS = (DegenerateConfig, DegenerateError, HypothesisViolation, NoIntersection, NotHamiltonian)


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _load(source: str) -> SystemDescription:
    """A system file path, or the name of a catalog entry when no such file exists."""
    if not os.path.exists(source):
        entry = catalog.lookup(source)
        if entry is not None:
            return entry.description()
    try:
        return read(source)
    except ParseError as exc:
        raise _Fail(EXIT_PARSE, f"{source}: {exc}") from None
    except DegenerateError as exc:
        raise _Fail(EXIT_DEGENERATE, f"{source}: {exc}") from None
    except OSError as exc:
        raise _Fail(EXIT_PARSE, f"{source}: cannot read: {exc.strerror or exc}") from None


def _label(source: str, desc: SystemDescription):
    system = desc.build()
    if catalog.lookup(source) is not None and not os.path.exists(source):
        system = type(system)(system.geometry, system.zones, source, system.notes)
    return system


def _settings(desc: SystemDescription) -> analysis.Settings:
    try:
        return analysis.Settings.from_description(desc, DEFAULT_CONFIG)
    except ValueError as exc:
        raise _Fail(EXIT_PARSE, f"invalid [options]: {exc}") from None


def _write(path: Optional[str], text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _Fail(EXIT_OUTPUT, f"cannot write {path}: {exc.strerror or exc}") from None


def cmd_analyze(args) -> int:
    desc = _load(args.system)
    system = _label(args.system, desc)
    try:
        rep = analysis.analyze(system, _settings(desc), verify=args.verify)
    except _SOLVER_ERRORS as exc:
        raise _Fail(EXIT_DEGENERATE, f"{type(exc).__name__}: {exc}") from None
    _write(args.output, rep.to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    desc = _load(args.system)
    system = _label(args.system, desc)
    try:
        rep = analysis.verify(system, _settings(desc))
    except _SOLVER_ERRORS as exc:
        raise _Fail(EXIT_DEGENERATE, f"{type(exc).__name__}: {exc}") from None
    _write(args.output, rep.to_json())
    return EXIT_OK


def cmd_portrait(args) -> int:
    desc = _load(args.system)
    system = _label(args.system, desc)
    if args.orbits < 0:
        raise _Fail(EXIT_PARSE, "--orbits must be nonnegative")
    try:
        rep = analysis.solve(system) if args.orbits > 0 else None
    except _SOLVER_ERRORS:
        rep = None  # portraits do not need the closing analysis
    try:
        text = portrait.render(system, args.box, args.format, args.orbits, rep, _settings(desc).cfg)
    except ValueError as exc:
        raise _Fail(EXIT_PARSE, str(exc)) from None
    _write(args.out, text)
    return EXIT_OK


def cmd_sweep(args) -> int:
    desc = _load(args.system)
    settings = _settings(desc)
    try:
        stream = analysis.sweep(desc, args.param, args.start, args.stop, args.steps, settings,
                                args.verify, args.jobs)
    except KeyError:
        raise _Fail(EXIT_PARSE, f"unknown or non-numeric parameter {args.param!r}") from None
    except ValueError as exc:
        raise _Fail(EXIT_PARSE, str(exc)) from None
    lines = [rep.to_json(compact=True) + "\n" for rep in stream]
    _write(args.output, "".join(lines))
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.emit:
        entry = catalog.lookup(args.emit)
        if entry is None:
            raise _Fail(EXIT_PARSE, f"unknown catalog entry {args.emit!r}")
        _write(args.output, emit(entry.description()))
    else:
        _write(args.output, catalog.listing())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pwcycle", description="Limit cycles of piecewise-smooth planar systems.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run the closing solver and print a report")
    a.add_argument("system", help="system file, or a catalog entry name")
    a.add_argument("--verify", action="store_true", help="also verify numerically and scan the return map")
    a.add_argument("-o", "--output")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="numerical verification (also for non-Hamiltonian systems)")
    v.add_argument("system")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("portrait", help="draw a phase portrait")
    q.add_argument("system")
    q.add_argument("out", help="output path ('-' for standard output)")
    q.add_argument("--format", choices=("svg", "csv"), default="svg")
    q.add_argument("--box", nargs=4, type=float, metavar=("X0", "Y0", "X1", "Y1"), default=(-3.0, -3.0, 3.0, 3.0))
    q.add_argument("--orbits", type=int, default=8)
    q.set_defaults(func=cmd_portrait)

    s = sub.add_parser("sweep", help="analyze along a parameter grid")
    s.add_argument("system")
    s.add_argument("--param", required=True, help="section.key, e.g. center.a")
    s.add_argument("--from", dest="start", type=float, required=True)
    s.add_argument("--to", dest="stop", type=float, required=True)
    s.add_argument("--steps", type=int, required=True, help="number of grid intervals")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("catalog", help="list built-in systems")
    c.add_argument("--emit", metavar="NAME", help="print the entry as a system file")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_catalog)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"pwcycle: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
