"""Compiled vs pure-Python zone kernel.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each case integrates one zone of a catalog system over a fixed time budget
with no exit constraints, so both kernels do identical work; the script
checks they agree and prints steps, time per call and the speed-up.
"""

import argparse
import sys
import timeit

from pwcycle import _pycore, catalog
from pwcycle.model import CenterSpec, SaddleSpec

try:
    from pwcycle import _core
except ImportError:
    _core = None

CASES = [
    ("F1 center", CenterSpec("F1"), (0.0, 1.0), 40.0),
    ("F5 center", CenterSpec("F5", 1.0, -0.5), (0.0, 0.8), 40.0),
    ("I2 center", CenterSpec("I2"), (0.0, 1.5), 40.0),
    ("affine saddle", SaddleSpec(-1, 1, 2, 3, 0), (2.5, -1.0), 4.0),
    ("i1-saddle (left)", catalog.get("i1-saddle").system.zones[0], (0.0, 1.05), 40.0),
]


def _args(fld, p0, t_end):
    kind, params = fld.kernel_spec()
    return (kind, params, (), False, p0[0], p0[1], 0.0, 1.0, t_end, 0.0,
            1e-10, 1e-12, 10**7, 1e-12, 1e-13, 1e3, False)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    opts = ap.parse_args(argv)
    if _core is None:
        print("compiled kernel not built (python3 setup.py build_ext --inplace)", file=sys.stderr)
        return 1
    print(f"{'case':<18} {'steps':>7} {'python ms':>10} {'compiled ms':>12} {'speed-up':>9}")
    for name, fld, p0, t_end in CASES:
        args = _args(fld, p0, t_end)
        a, b = _core.integrate_zone(*args), _pycore.integrate_zone(*args)
        if a[0] != b[0] or a[4] != b[4] or max(abs(u - v) for u, v in zip(a[1:4], b[1:4])) > 1e-9:
            print(f"{name}: kernels disagree: {a[:5]} vs {b[:5]}", file=sys.stderr)
            return 1
        tp = min(timeit.repeat(lambda: _pycore.integrate_zone(*args), number=1, repeat=opts.repeat))
        tc = min(timeit.repeat(lambda: _core.integrate_zone(*args), number=1, repeat=opts.repeat))
        print(f"{name:<18} {a[4]:>7} {tp * 1e3:>10.2f} {tc * 1e3:>12.3f} {tp / tc:>8.0f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
