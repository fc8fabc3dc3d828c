"""Pure-Python zone integration kernel.

Mirrors the compiled ``_core`` extension line for line; it is selected at
import time when the extension is not available (or when PWCYCLE_PURE=1).

A zone is the open set {g > 0} where g = min_i(a_i x + b_i y + c_i), or its
complement when ``complement`` is set.  The kernel integrates
dp/ds = direction * f(p) with the Dormand-Prince 5(4) pair until the orbit
leaves the zone, then bisects the quartic dense output to locate the exit.
"""

import math

EVENT, TIME_LIMIT, MAX_STEPS, EQUILIBRIUM, LEFT_DOMAIN, NONFINITE = range(6)

# Dormand-Prince 5(4) tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = -71 / 57600, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40

# quartic dense-output coefficients (rows: stages 1,3,4,5,6,7; cols: theta^1..theta^4)
P1 = (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432)
P3 = (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799)
P4 = (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072)
P5 = (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632)
P6 = (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844)
P7 = (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423)

SAFETY, MIN_FACTOR, MAX_FACTOR = 0.9, 0.2, 10.0


def make_field(kind, params):
    """Return f(x, y) -> (fx, fy) for a kernel field code."""
    p = tuple(float(v) for v in params)
    if kind == 0:
        return lambda x, y: (y, -x * x * x)
    if kind == 1:
        return lambda x, y: (y + y * y * y, -x * x * x)
    if kind == 2:
        a = p[0]
        return lambda x, y: (y + x * x * y + a * y * y * y, -x * x * x - x * y * y)
    if kind == 3:
        a = p[0]
        return lambda x, y: (y - x * x * y + a * y * y * y, -x * x * x + x * y * y)
    if kind == 4:
        a, b = p[0], p[1]
        return lambda x, y: (y + 2 * x * y + a * x * x * y + b * y * y * y, -x * x * x - y * y - a * x * y * y)
    if kind == 5:
        def f(x, y):
            x2, y2 = x * x, y * y
            return y * (x2 - y2) - 2 * x2 * x2 * y, x * (x2 + y2) - 2 * x2 * x * y2
        return f
    if kind == 6:
        return lambda x, y: (-y * (3 * x * x + y * y), x * (x * x - y * y))
    if kind == 7:
        m11, m12, m21, m22, c1, c2 = p
        return lambda x, y: (m11 * x + m12 * y + c1, m21 * x + m22 * y + c2)
    if kind == 8:
        n = int(p[0])
        if n == 1:
            return lambda x, y: (-y, x)

        def f(x, y):
            r = (x ** (2 * n) + n * y * y) ** (1.0 / (2 * n))
            if r == 0.0:
                return 0.0, 0.0
            s = r ** (n - 1)
            return -y / s, x ** (2 * n - 1) / s
        return f
    if kind == 9:
        m = 2 * int(p[0]) - 1
        return lambda x, y: (-y, x ** m)
    raise ValueError(f"unknown field kind {kind}")


def _inside(cons, complement, x, y):
    g = math.inf
    idx = 0
    for i, (a, b, c) in enumerate(cons):
        v = a * x + b * y + c
        if v < g:
            g = v
            idx = i
    return (-g if complement else g), idx


def integrate_zone(kind, params, cons, complement, x, y, t, direction, t_max, h0,
                   rtol, atol, max_steps, event_tol, speed_floor, max_radius, record):
    """Integrate inside one zone.

    Returns (status, t, x, y, steps, h, samples, constraint_index) where
    samples is a flat [t, x, y, ...] list when ``record`` is true.
    """
    f = make_field(kind, params)
    cons = tuple(tuple(float(v) for v in c) for c in cons)
    complement = bool(complement)
    d = 1.0 if direction >= 0 else -1.0
    s = 0.0
    samples = [t, x, y] if record else None
    fx, fy = f(x, y)
    fx, fy = d * fx, d * fy
    speed = math.hypot(fx, fy)
    if speed < speed_floor:
        return EQUILIBRIUM, t, x, y, 0, 0.0, samples, -1
    rmax2 = max_radius * max_radius

    h = h0
    if h <= 0.0:
        sx = atol + abs(x) * rtol
        sy = atol + abs(y) * rtol
        d0 = math.sqrt(((x / sx) ** 2 + (y / sy) ** 2) / 2)
        d1 = math.sqrt(((fx / sx) ** 2 + (fy / sy) ** 2) / 2)
        h = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
        h = min(h, 0.01 * max(1.0, math.sqrt(x * x + y * y)) / speed)
    h = min(h, t_max)

    steps = 0
    while True:
        if steps >= max_steps:
            return MAX_STEPS, t, x, y, steps, h, samples, -1
        last = False
        if s + h >= t_max:
            h = t_max - s
            last = True
        # stages
        k1x, k1y = fx, fy
        k2x, k2y = f(x + h * A21 * k1x, y + h * A21 * k1y)
        k2x *= d
        k2y *= d
        k3x, k3y = f(x + h * (A31 * k1x + A32 * k2x), y + h * (A31 * k1y + A32 * k2y))
        k3x *= d
        k3y *= d
        k4x, k4y = f(x + h * (A41 * k1x + A42 * k2x + A43 * k3x),
                     y + h * (A41 * k1y + A42 * k2y + A43 * k3y))
        k4x *= d
        k4y *= d
        k5x, k5y = f(x + h * (A51 * k1x + A52 * k2x + A53 * k3x + A54 * k4x),
                     y + h * (A51 * k1y + A52 * k2y + A53 * k3y + A54 * k4y))
        k5x *= d
        k5y *= d
        k6x, k6y = f(x + h * (A61 * k1x + A62 * k2x + A63 * k3x + A64 * k4x + A65 * k5x),
                     y + h * (A61 * k1y + A62 * k2y + A63 * k3y + A64 * k4y + A65 * k5y))
        k6x *= d
        k6y *= d
        xn = x + h * (B1 * k1x + B3 * k3x + B4 * k4x + B5 * k5x + B6 * k6x)
        yn = y + h * (B1 * k1y + B3 * k3y + B4 * k4y + B5 * k5y + B6 * k6y)
        k7x, k7y = f(xn, yn)
        k7x *= d
        k7y *= d
        if not (math.isfinite(xn) and math.isfinite(yn) and math.isfinite(k7x) and math.isfinite(k7y)):
            if h < 1e-14:
                return NONFINITE, t, x, y, steps, h, samples, -1
            h *= MIN_FACTOR
            continue
        ex = h * (E1 * k1x + E3 * k3x + E4 * k4x + E5 * k5x + E6 * k6x + E7 * k7x)
        ey = h * (E1 * k1y + E3 * k3y + E4 * k4y + E5 * k5y + E6 * k6y + E7 * k7y)
        sx = atol + max(abs(x), abs(xn)) * rtol
        sy = atol + max(abs(y), abs(yn)) * rtol
        err = math.sqrt(((ex / sx) ** 2 + (ey / sy) ** 2) / 2)
        if err > 1.0:
            h *= max(MIN_FACTOR, SAFETY * err ** -0.2)
            if h < 1e-15 * max(1.0, s):
                return NONFINITE, t, x, y, steps, h, samples, -1
            continue
        steps += 1
        # zone exit check at the step end and three interior dense points
        g_end, _ = _inside(cons, complement, xn, yn)
        hit = -1.0
        if g_end <= 0.0:
            hit = 1.0
        else:
            for th in (0.25, 0.5, 0.75):
                px, py = _dense(x, y, h, th, k1x, k1y, k3x, k3y, k4x, k4y, k5x, k5y, k6x, k6y, k7x, k7y)
                gi, _ = _inside(cons, complement, px, py)
                if gi <= 0.0:
                    hit = th
                    break
        if hit > 0.0:
            lo, hi = 0.0, hit
            while (hi - lo) * h > event_tol:
                mid = 0.5 * (lo + hi)
                if mid <= lo or mid >= hi:
                    break  # bracket at machine resolution (very long steps)
                px, py = _dense(x, y, h, mid, k1x, k1y, k3x, k3y, k4x, k4y, k5x, k5y, k6x, k6y, k7x, k7y)
                gm, _ = _inside(cons, complement, px, py)
                if gm > 0.0:
                    lo = mid
                else:
                    hi = mid
            if hi >= 1.0:
                px, py = xn, yn
            else:
                px, py = _dense(x, y, h, hi, k1x, k1y, k3x, k3y, k4x, k4y, k5x, k5y, k6x, k6y, k7x, k7y)
            _, idx = _inside(cons, complement, px, py)
            te = t + d * hi * h
            if record:
                samples.extend((te, px, py))
            return EVENT, te, px, py, steps, h, samples, idx
        s += h
        t += d * h
        x, y = xn, yn
        fx, fy = k7x, k7y
        if record:
            samples.extend((t, x, y))
        if x * x + y * y > rmax2:
            return LEFT_DOMAIN, t, x, y, steps, h, samples, -1
        if math.hypot(fx, fy) < speed_floor:
            return EQUILIBRIUM, t, x, y, steps, h, samples, -1
        if last:
            return TIME_LIMIT, t, x, y, steps, h, samples, -1
        factor = MAX_FACTOR if err == 0.0 else min(MAX_FACTOR, SAFETY * err ** -0.2)
        h *= factor


def _dense(x, y, h, th, k1x, k1y, k3x, k3y, k4x, k4y, k5x, k5y, k6x, k6y, k7x, k7y):
    t2 = th * th
    t3 = t2 * th
    t4 = t3 * th
    b1 = P1[0] * th + P1[1] * t2 + P1[2] * t3 + P1[3] * t4
    b3 = P3[1] * t2 + P3[2] * t3 + P3[3] * t4
    b4 = P4[1] * t2 + P4[2] * t3 + P4[3] * t4
    b5 = P5[1] * t2 + P5[2] * t3 + P5[3] * t4
    b6 = P6[1] * t2 + P6[2] * t3 + P6[3] * t4
    b7 = P7[1] * t2 + P7[2] * t3 + P7[3] * t4
    return (x + h * (b1 * k1x + b3 * k3x + b4 * k4x + b5 * k5x + b6 * k6x + b7 * k7x),
            y + h * (b1 * k1y + b3 * k3y + b4 * k4y + b5 * k5y + b6 * k6y + b7 * k7y))
