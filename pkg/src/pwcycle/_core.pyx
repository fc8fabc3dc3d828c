# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled zone integration kernel (same algorithm as _pycore)."""

from libc.math cimport sqrt, fabs, pow, isfinite, INFINITY

DEF EVENT = 0
DEF TIME_LIMIT = 1
DEF MAX_STEPS = 2
DEF EQUILIBRIUM = 3
DEF LEFT_DOMAIN = 4
DEF NONFINITE = 5

cdef double C_A21 = 1.0 / 5
cdef double C_A31 = 3.0 / 40, C_A32 = 9.0 / 40
cdef double C_A41 = 44.0 / 45, C_A42 = -56.0 / 15, C_A43 = 32.0 / 9
cdef double C_A51 = 19372.0 / 6561, C_A52 = -25360.0 / 2187, C_A53 = 64448.0 / 6561, C_A54 = -212.0 / 729
cdef double C_A61 = 9017.0 / 3168, C_A62 = -355.0 / 33, C_A63 = 46732.0 / 5247
cdef double C_A64 = 49.0 / 176, C_A65 = -5103.0 / 18656
cdef double C_B1 = 35.0 / 384, C_B3 = 500.0 / 1113, C_B4 = 125.0 / 192
cdef double C_B5 = -2187.0 / 6784, C_B6 = 11.0 / 84
cdef double C_E1 = -71.0 / 57600, C_E3 = 71.0 / 16695, C_E4 = -71.0 / 1920
cdef double C_E5 = 17253.0 / 339200, C_E6 = -22.0 / 525, C_E7 = 1.0 / 40

cdef double[4] P1 = [1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432]
cdef double[4] P3 = [0.0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933, 87487479700.0 / 32700410799]
cdef double[4] P4 = [0.0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072]
cdef double[4] P5 = [0.0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408, 701980252875.0 / 199316789632]
cdef double[4] P6 = [0.0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844]
cdef double[4] P7 = [0.0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423]

cdef double SAFETY = 0.9, MIN_FACTOR = 0.2, MAX_FACTOR = 10.0


cdef struct Zone:
    int kind
    double p[6]
    int ncons
    double cons[2][3]
    int complement
    double d


cdef inline void field(Zone* z, double x, double y, double* fx, double* fy) noexcept nogil:
    cdef double x2, y2, a, b, r, s
    cdef int n
    cdef int k = z.kind
    if k == 0:
        fx[0] = y
        fy[0] = -x * x * x
    elif k == 1:
        fx[0] = y + y * y * y
        fy[0] = -x * x * x
    elif k == 2:
        a = z.p[0]
        fx[0] = y + x * x * y + a * y * y * y
        fy[0] = -x * x * x - x * y * y
    elif k == 3:
        a = z.p[0]
        fx[0] = y - x * x * y + a * y * y * y
        fy[0] = -x * x * x + x * y * y
    elif k == 4:
        a = z.p[0]
        b = z.p[1]
        fx[0] = y + 2 * x * y + a * x * x * y + b * y * y * y
        fy[0] = -x * x * x - y * y - a * x * y * y
    elif k == 5:
        x2 = x * x
        y2 = y * y
        fx[0] = y * (x2 - y2) - 2 * x2 * x2 * y
        fy[0] = x * (x2 + y2) - 2 * x2 * x * y2
    elif k == 6:
        fx[0] = -y * (3 * x * x + y * y)
        fy[0] = x * (x * x - y * y)
    elif k == 7:
        fx[0] = z.p[0] * x + z.p[1] * y + z.p[4]
        fy[0] = z.p[2] * x + z.p[3] * y + z.p[5]
    elif k == 8:
        n = <int> z.p[0]
        if n == 1:
            fx[0] = -y
            fy[0] = x
        else:
            r = pow(pow(x, 2 * n) + n * y * y, 1.0 / (2 * n))
            if r == 0.0:
                fx[0] = 0.0
                fy[0] = 0.0
            else:
                s = pow(r, n - 1)
                fx[0] = -y / s
                fy[0] = pow(x, 2 * n - 1) / s
    else:
        n = <int> z.p[0]
        fx[0] = -y
        fy[0] = pow(x, 2 * n - 1)
    fx[0] *= z.d
    fy[0] *= z.d


cdef inline double inside(Zone* z, double x, double y, int* idx) noexcept nogil:
    cdef double g = INFINITY, v
    cdef int i
    idx[0] = 0
    for i in range(z.ncons):
        v = z.cons[i][0] * x + z.cons[i][1] * y + z.cons[i][2]
        if v < g:
            g = v
            idx[0] = i
    if z.complement:
        return -g
    return g


cdef inline void dense(double x, double y, double h, double th, double* k, double* px, double* py) noexcept nogil:
    # k layout: k1x k1y k3x k3y k4x k4y k5x k5y k6x k6y k7x k7y
    cdef double t2 = th * th
    cdef double t3 = t2 * th
    cdef double t4 = t3 * th
    cdef double b1 = P1[0] * th + P1[1] * t2 + P1[2] * t3 + P1[3] * t4
    cdef double b3 = P3[1] * t2 + P3[2] * t3 + P3[3] * t4
    cdef double b4 = P4[1] * t2 + P4[2] * t3 + P4[3] * t4
    cdef double b5 = P5[1] * t2 + P5[2] * t3 + P5[3] * t4
    cdef double b6 = P6[1] * t2 + P6[2] * t3 + P6[3] * t4
    cdef double b7 = P7[1] * t2 + P7[2] * t3 + P7[3] * t4
    px[0] = x + h * (b1 * k[0] + b3 * k[2] + b4 * k[4] + b5 * k[6] + b6 * k[8] + b7 * k[10])
    py[0] = y + h * (b1 * k[1] + b3 * k[3] + b4 * k[5] + b5 * k[7] + b6 * k[9] + b7 * k[11])


def integrate_zone(int kind, params, cons, complement, double x, double y, double t, double direction,
                   double t_max, double h0, double rtol, double atol, long max_steps, double event_tol,
                   double speed_floor, double max_radius, record):
    """Integrate inside one zone; see _pycore.integrate_zone for the contract."""
    cdef Zone z
    cdef int i, j, idx = -1, status = -1
    cdef bint rec = bool(record)
    cdef bint last
    z.kind = kind
    for i in range(6):
        z.p[i] = 0.0
    for i, v in enumerate(params):
        if i < 6:
            z.p[i] = float(v)
    z.ncons = len(cons)
    if z.ncons > 2:
        raise ValueError("at most two constraints per zone")
    for i, c in enumerate(cons):
        for j in range(3):
            z.cons[i][j] = float(c[j])
    z.complement = 1 if complement else 0
    z.d = 1.0 if direction >= 0 else -1.0

    cdef double s = 0.0, h, fx, fy, speed, rmax2 = max_radius * max_radius
    cdef double sx, sy, d0, d1, err, ex, ey, xn, yn, g_end, gi, gm, hit, lo, hi, mid, px, py, te, factor
    cdef double k[12]
    cdef double k2x, k2y
    cdef double ths[3]
    ths[0] = 0.25
    ths[1] = 0.5
    ths[2] = 0.75
    cdef long steps = 0
    samples = [t, x, y] if rec else None

    field(&z, x, y, &fx, &fy)
    speed = sqrt(fx * fx + fy * fy)
    if speed < speed_floor:
        return EQUILIBRIUM, t, x, y, 0, 0.0, samples, -1

    h = h0
    if h <= 0.0:
        sx = atol + fabs(x) * rtol
        sy = atol + fabs(y) * rtol
        d0 = sqrt(((x / sx) ** 2 + (y / sy) ** 2) / 2)
        d1 = sqrt(((fx / sx) ** 2 + (fy / sy) ** 2) / 2)
        if d0 < 1e-5 or d1 < 1e-5:
            h = 1e-6
        else:
            h = 0.01 * d0 / d1
        h = min(h, 0.01 * max(1.0, sqrt(x * x + y * y)) / speed)
    h = min(h, t_max)

    with nogil:
        while True:
            if steps >= max_steps:
                status = MAX_STEPS
                break
            last = False
            if s + h >= t_max:
                h = t_max - s
                last = True
            k[0] = fx
            k[1] = fy
            field(&z, x + h * C_A21 * k[0], y + h * C_A21 * k[1], &k2x, &k2y)
            field(&z, x + h * (C_A31 * k[0] + C_A32 * k2x), y + h * (C_A31 * k[1] + C_A32 * k2y), &k[2], &k[3])
            field(&z, x + h * (C_A41 * k[0] + C_A42 * k2x + C_A43 * k[2]),
                  y + h * (C_A41 * k[1] + C_A42 * k2y + C_A43 * k[3]), &k[4], &k[5])
            field(&z, x + h * (C_A51 * k[0] + C_A52 * k2x + C_A53 * k[2] + C_A54 * k[4]),
                  y + h * (C_A51 * k[1] + C_A52 * k2y + C_A53 * k[3] + C_A54 * k[5]), &k[6], &k[7])
            field(&z, x + h * (C_A61 * k[0] + C_A62 * k2x + C_A63 * k[2] + C_A64 * k[4] + C_A65 * k[6]),
                  y + h * (C_A61 * k[1] + C_A62 * k2y + C_A63 * k[3] + C_A64 * k[5] + C_A65 * k[7]), &k[8], &k[9])
            xn = x + h * (C_B1 * k[0] + C_B3 * k[2] + C_B4 * k[4] + C_B5 * k[6] + C_B6 * k[8])
            yn = y + h * (C_B1 * k[1] + C_B3 * k[3] + C_B4 * k[5] + C_B5 * k[7] + C_B6 * k[9])
            field(&z, xn, yn, &k[10], &k[11])
            if not (isfinite(xn) and isfinite(yn) and isfinite(k[10]) and isfinite(k[11])):
                if h < 1e-14:
                    status = NONFINITE
                    break
                h *= MIN_FACTOR
                continue
            ex = h * (C_E1 * k[0] + C_E3 * k[2] + C_E4 * k[4] + C_E5 * k[6] + C_E6 * k[8] + C_E7 * k[10])
            ey = h * (C_E1 * k[1] + C_E3 * k[3] + C_E4 * k[5] + C_E5 * k[7] + C_E6 * k[9] + C_E7 * k[11])
            sx = atol + max(fabs(x), fabs(xn)) * rtol
            sy = atol + max(fabs(y), fabs(yn)) * rtol
            err = sqrt(((ex / sx) ** 2 + (ey / sy) ** 2) / 2)
            if err > 1.0:
                h *= max(MIN_FACTOR, SAFETY * pow(err, -0.2))
                if h < 1e-15 * max(1.0, s):
                    status = NONFINITE
                    break
                continue
            steps += 1
            g_end = inside(&z, xn, yn, &idx)
            hit = -1.0
            if g_end <= 0.0:
                hit = 1.0
            else:
                for i in range(3):
                    dense(x, y, h, ths[i], k, &px, &py)
                    gi = inside(&z, px, py, &idx)
                    if gi <= 0.0:
                        hit = ths[i]
                        break
            if hit > 0.0:
                lo = 0.0
                hi = hit
                while (hi - lo) * h > event_tol:
                    mid = 0.5 * (lo + hi)
                    if mid <= lo or mid >= hi:
                        break  # bracket at machine resolution (very long steps)
                    dense(x, y, h, mid, k, &px, &py)
                    gm = inside(&z, px, py, &idx)
                    if gm > 0.0:
                        lo = mid
                    else:
                        hi = mid
                if hi >= 1.0:
                    px = xn
                    py = yn
                else:
                    dense(x, y, h, hi, k, &px, &py)
                inside(&z, px, py, &idx)
                te = t + z.d * hi * h
                x = px
                y = py
                t = te
                status = EVENT
                break
            s += h
            t += z.d * h
            x = xn
            y = yn
            fx = k[10]
            fy = k[11]
            if rec:
                with gil:
                    samples.extend((t, x, y))
            if x * x + y * y > rmax2:
                status = LEFT_DOMAIN
                break
            if sqrt(fx * fx + fy * fy) < speed_floor:
                status = EQUILIBRIUM
                break
            if last:
                status = TIME_LIMIT
                break
            if err == 0.0:
                factor = MAX_FACTOR
            else:
                factor = min(MAX_FACTOR, SAFETY * pow(err, -0.2))
            h *= factor

    if status == EVENT:
        if rec:
            samples.extend((t, x, y))
        return EVENT, t, x, y, steps, h, samples, idx
    return status, t, x, y, steps, h, samples, -1
