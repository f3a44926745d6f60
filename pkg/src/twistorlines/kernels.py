"""Batch kernels on homogeneous coordinates.

Every point of P^1 is carried as a pair of complex128 arrays ``(z0, z1)``
meaning ``z0/z1``. Outputs are normalized: the larger-modulus component is
exactly ``1+0j``, so ``|z| <= 1`` is stored as ``(z, 1)`` and ``|z| > 1`` as
``(1, 1/z)``.  When the moduli agree to a few ulp the pair is divided by
``z0`` only if ``z0`` is exactly ``+-1`` and by ``z1`` otherwise; the
division is then exact, which keeps ``(z0 : z1) -> (-conj z1 : conj z0)``
a bitwise involution on stored pairs.

Line parameters are ``(d0, d1, a0, a1)`` where ``a = a0/a1`` is the
coefficient relative to the normalized representative ``(d0, d1)``.  It is
the usual affine parameter when ``|d| <= 1`` and the parameter of the
``d = inf`` form when ``d = inf``; rescaling the representative by ``lam``
multiplies it by ``lam/conj(lam)``.

Each public kernel dispatches to a numba loop (``*_nb``) or a vectorized
numpy twin (``*_np``) depending on :data:`twistorlines._accel.USE_NUMBA`.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

NAN = complex(np.nan, np.nan)

# column layout of solve_line output
B0, B1 = 0, 1
SMALL = 2  # c0, c1, d0, d1, a0, a1 for the small-|c| branch
LARGE = 8  # same layout for the large-|c| branch
SOLVE_COLS = 14

CHART_DA, CHART_EA, CHART_DB, CHART_EB = 0, 1, 2, 3


def _c(x):
    return np.ascontiguousarray(x, dtype=np.complex128)


def _r(x):
    return np.ascontiguousarray(x, dtype=np.float64)


# ---------------------------------------------------------------- scalars


TIE = 1e-15  # relative modulus gap below which the two components count as tied


@njit
def _first_divides(z0, m0, m1):
    if m0 > m1 * (1.0 + TIE):
        return True
    if m1 > m0 * (1.0 + TIE):
        return False
    return z0.imag == 0.0 and abs(z0.real) == 1.0


@njit
def _norm(z0, z1):
    m0 = abs(z0)
    m1 = abs(z1)
    if _first_divides(z0, m0, m1):
        return 1.0 + 0.0j, z1 / z0
    if m1 == 0.0:
        return NAN, NAN
    return z0 / z1, 1.0 + 0.0j


@njit
def _chordal(p0, p1, q0, q1):
    num = abs(p0 * q1 - p1 * q0)
    den = np.sqrt((abs(p0) ** 2 + abs(p1) ** 2) * (abs(q0) ** 2 + abs(q1) ** 2))
    v = num / den
    return 1.0 if v > 1.0 else v


@njit
def _line(d0, d1, a0, a1, t0, t1):
    if a0 == 0.0:
        x0, x1 = d0, d1
        y0, y1 = -np.conj(d1), np.conj(d0)
    elif a1 == 0.0:
        x0, x1 = -np.conj(d1), np.conj(d0)
        y0, y1 = d0, d1
    else:
        ca0 = np.conj(a0)
        ca1 = np.conj(a1)
        x0 = d0 * a1 * t1 - a0 * np.conj(d1) * t0
        x1 = d1 * a1 * t1 + a0 * np.conj(d0) * t0
        y0 = ca0 * d0 * t1 - ca1 * np.conj(d1) * t0
        y1 = ca0 * d1 * t1 + ca1 * np.conj(d0) * t0
    x0, x1 = _norm(x0, x1)
    y0, y1 = _norm(y0, y1)
    return x0, x1, y0, y1


@njit
def _trajectory(d0, d1, R, x0, x1):
    n0 = abs(d0) ** 2
    n1 = abs(d1) ** 2
    p = d0 * np.conj(d1) * (1.0 + R)
    q = R * n1 - n0
    r = R * n0 - n1
    s = np.conj(d0) * d1 * (1.0 + R)
    cx0 = np.conj(x0)
    cx1 = np.conj(x1)
    return _norm(-(p * cx0 + q * cx1), r * cx0 + s * cx1)


@njit
def _solve(x0, x1, y0, y1, t, out):
    R = abs(t) ** 2
    bn = (1.0 + R) * (x0 * y1 - x1 * y0)
    bd = np.conj(x0) * y0 + np.conj(x1) * y1
    mb0 = abs(bn)
    mb1 = abs(bd)
    if mb0 == 0.0:
        for k in range(SOLVE_COLS):
            out[k] = NAN
        return
    out[B0], out[B1] = _norm(bn, bd)
    sq = np.sqrt(mb0 * mb0 + 4.0 * R * mb1 * mb1)
    ph = bn / mb0
    # small branch: r = 2R|b| / (|b| + sqrt(|b|^2 + 4R)) times the phase of b
    sc0 = 2.0 * R * ph * np.conj(bd)
    sc1 = mb0 + sq + 0.0j
    # large branch: r = (|b| + sqrt(|b|^2 + 4R)) / 2 along -b
    if mb1 > 0.0:
        e = ph * np.conj(bd) / mb1
    else:
        e = ph
    lc0 = -e * (mb0 + sq)
    lc1 = 2.0 * mb1 + 0.0j
    for base, c0, c1 in ((SMALL, sc0, sc1), (LARGE, lc0, lc1)):
        c0, c1 = _norm(c0, c1)
        d0, d1 = _norm(x0 * c1 + c0 * np.conj(x1), x1 * c1 - c0 * np.conj(x0))
        a0, a1 = _norm(d0 * x1 - x0 * d1, t * (x0 * np.conj(d0) + x1 * np.conj(d1)))
        out[base] = c0
        out[base + 1] = c1
        out[base + 2] = d0
        out[base + 3] = d1
        out[base + 4] = a0
        out[base + 5] = a1


@njit
def _jac_da(p, q, t):
    R = abs(t) ** 2
    num = (1.0 + abs(p) ** 2) ** 2 * (1.0 + R) ** 2 * R * (abs(q) ** 4 - 1.0)
    den = abs(1.0 + q * np.conj(p) * t) ** 4 * abs(q + p * np.conj(t)) ** 4
    if den == 0.0:
        return np.nan  # an output point sits at infinity
    return num / den


@njit
def _jac_ea(p, q, t):
    R = abs(t) ** 2
    num = (1.0 + abs(p) ** 2) ** 2 * (1.0 + R) ** 2 * R * (abs(q) ** 4 - 1.0)
    den = abs(p + q * t) ** 4 * abs(np.conj(q) * p + t) ** 4
    if den == 0.0:
        return np.nan
    return num / den


@njit
def _jac(p, q, t, chart):
    if chart == CHART_DA:
        return _jac_da(p, q, t)
    if chart == CHART_EA:
        return _jac_ea(p, q, t)
    if chart == CHART_DB:
        return -_jac_da(p, np.conj(q), t)
    return -_jac_ea(p, np.conj(q), t)


@njit
def _fiber_zero(d0, d1, a0, a1):
    if a0 == 0.0:
        return 0.0 + 0.0j, 1.0 + 0.0j
    n = abs(d0) ** 2 + abs(d1) ** 2
    return _norm(n * (abs(a0) ** 2 - abs(a1) ** 2) + 0.0j, a1 * np.conj(a0))


@njit
def _solve_fiber_zero(d0, d1, v0, v1, plus):
    if v0 == 0.0:
        if plus:
            return 0.0 + 0.0j, 1.0 + 0.0j
        return 1.0 + 0.0j, 0.0 + 0.0j
    if v1 == 0.0:
        return NAN, NAN  # v = inf is the direction inside Q+
    w = v0 / (v1 * (abs(d0) ** 2 + abs(d1) ** 2))
    mw = abs(w)
    sq = np.sqrt(mw * mw + 4.0)
    if plus:
        return _norm(-(w / mw) * (2.0 / (mw + sq)), 1.0 + 0.0j)
    return _norm((w / mw) * ((mw + sq) / 2.0), 1.0 + 0.0j)


# ---------------------------------------------------------- numba loops


@njit
def normalize_nb(z0, z1):
    n = z0.shape[0]
    o0 = np.empty(n, np.complex128)
    o1 = np.empty(n, np.complex128)
    for i in range(n):
        o0[i], o1[i] = _norm(z0[i], z1[i])
    return o0, o1


@njit
def chordal_nb(p0, p1, q0, q1):
    n = p0.shape[0]
    out = np.empty(n, np.float64)
    for i in range(n):
        out[i] = _chordal(p0[i], p1[i], q0[i], q1[i])
    return out


@njit
def line_points_nb(d0, d1, a0, a1, t0, t1):
    n = d0.shape[0]
    x0 = np.empty(n, np.complex128)
    x1 = np.empty(n, np.complex128)
    y0 = np.empty(n, np.complex128)
    y1 = np.empty(n, np.complex128)
    for i in range(n):
        x0[i], x1[i], y0[i], y1[i] = _line(d0[i], d1[i], a0[i], a1[i], t0[i], t1[i])
    return x0, x1, y0, y1


@njit
def trajectory_nb(d0, d1, R, x0, x1):
    n = d0.shape[0]
    y0 = np.empty(n, np.complex128)
    y1 = np.empty(n, np.complex128)
    for i in range(n):
        y0[i], y1[i] = _trajectory(d0[i], d1[i], R[i], x0[i], x1[i])
    return y0, y1


@njit
def solve_line_nb(x0, x1, y0, y1, t):
    n = x0.shape[0]
    out = np.empty((n, SOLVE_COLS), np.complex128)
    for i in range(n):
        _solve(x0[i], x1[i], y0[i], y1[i], t[i], out[i])
    return out


@njit
def jacobian_nb(p, q, t, chart):
    n = p.shape[0]
    out = np.empty(n, np.float64)
    for i in range(n):
        out[i] = _jac(p[i], q[i], t[i], chart[i])
    return out


@njit
def fiber_zero_nb(d0, d1, a0, a1):
    n = d0.shape[0]
    v0 = np.empty(n, np.complex128)
    v1 = np.empty(n, np.complex128)
    for i in range(n):
        v0[i], v1[i] = _fiber_zero(d0[i], d1[i], a0[i], a1[i])
    return v0, v1


@njit
def solve_fiber_zero_nb(d0, d1, v0, v1, plus):
    n = d0.shape[0]
    a0 = np.empty(n, np.complex128)
    a1 = np.empty(n, np.complex128)
    for i in range(n):
        a0[i], a1[i] = _solve_fiber_zero(d0[i], d1[i], v0[i], v1[i], plus)
    return a0, a1


# ---------------------------------------------------------- numpy twins


def normalize_np(z0, z1):
    m0 = np.abs(z0)
    m1 = np.abs(z1)
    tie = ~(m0 > m1 * (1.0 + TIE)) & ~(m1 > m0 * (1.0 + TIE))
    unit0 = (z0.imag == 0.0) & (np.abs(z0.real) == 1.0)
    big0 = (m0 > m1 * (1.0 + TIE)) | (tie & unit0)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        o0 = np.where(big0, 1.0 + 0.0j, z0 / z1)
        o1 = np.where(big0, z1 / z0, 1.0 + 0.0j)
    bad = (m0 == 0.0) & (m1 == 0.0)
    o0[bad] = NAN
    o1[bad] = NAN
    return o0, o1


def chordal_np(p0, p1, q0, q1):
    num = np.abs(p0 * q1 - p1 * q0)
    den = np.sqrt((np.abs(p0) ** 2 + np.abs(p1) ** 2) * (np.abs(q0) ** 2 + np.abs(q1) ** 2))
    return np.minimum(num / den, 1.0)


def line_points_np(d0, d1, a0, a1, t0, t1):
    ca0 = np.conj(a0)
    ca1 = np.conj(a1)
    x0 = d0 * a1 * t1 - a0 * np.conj(d1) * t0
    x1 = d1 * a1 * t1 + a0 * np.conj(d0) * t0
    y0 = ca0 * d0 * t1 - ca1 * np.conj(d1) * t0
    y1 = ca0 * d1 * t1 + ca1 * np.conj(d0) * t0
    zero = a0 == 0.0
    inf = (a1 == 0.0) & ~zero
    x0 = np.where(zero, d0, np.where(inf, -np.conj(d1), x0))
    x1 = np.where(zero, d1, np.where(inf, np.conj(d0), x1))
    y0 = np.where(zero, -np.conj(d1), np.where(inf, d0, y0))
    y1 = np.where(zero, np.conj(d0), np.where(inf, d1, y1))
    x0, x1 = normalize_np(x0, x1)
    y0, y1 = normalize_np(y0, y1)
    return x0, x1, y0, y1


def trajectory_np(d0, d1, R, x0, x1):
    n0 = np.abs(d0) ** 2
    n1 = np.abs(d1) ** 2
    p = d0 * np.conj(d1) * (1.0 + R)
    q = R * n1 - n0
    r = R * n0 - n1
    s = np.conj(d0) * d1 * (1.0 + R)
    cx0 = np.conj(x0)
    cx1 = np.conj(x1)
    return normalize_np(-(p * cx0 + q * cx1), r * cx0 + s * cx1)


def solve_line_np(x0, x1, y0, y1, t):
    n = x0.shape[0]
    out = np.empty((n, SOLVE_COLS), np.complex128)
    R = np.abs(t) ** 2
    bn = (1.0 + R) * (x0 * y1 - x1 * y0)
    bd = np.conj(x0) * y0 + np.conj(x1) * y1
    mb0 = np.abs(bn)
    mb1 = np.abs(bd)
    diag = mb0 == 0.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        out[:, B0], out[:, B1] = normalize_np(bn, bd)
        sq = np.sqrt(mb0 * mb0 + 4.0 * R * mb1 * mb1)
        ph = bn / mb0
        sc0 = 2.0 * R * ph * np.conj(bd)
        sc1 = (mb0 + sq).astype(np.complex128)
        e = np.where(mb1 > 0.0, ph * np.conj(bd) / mb1, ph)
        lc0 = -e * (mb0 + sq)
        lc1 = (2.0 * mb1).astype(np.complex128)
        for base, c0, c1 in ((SMALL, sc0, sc1), (LARGE, lc0, lc1)):
            c0, c1 = normalize_np(c0, c1)
            d0, d1 = normalize_np(x0 * c1 + c0 * np.conj(x1), x1 * c1 - c0 * np.conj(x0))
            a0, a1 = normalize_np(d0 * x1 - x0 * d1, t * (x0 * np.conj(d0) + x1 * np.conj(d1)))
            out[:, base] = c0
            out[:, base + 1] = c1
            out[:, base + 2] = d0
            out[:, base + 3] = d1
            out[:, base + 4] = a0
            out[:, base + 5] = a1
    out[diag, :] = NAN
    return out


def jacobian_np(p, q, t, chart):
    R = np.abs(t) ** 2
    swap_q = (chart == CHART_DB) | (chart == CHART_EB)
    q = np.where(swap_q, np.conj(q), q)
    num = (1.0 + np.abs(p) ** 2) ** 2 * (1.0 + R) ** 2 * R * (np.abs(q) ** 4 - 1.0)
    e_chart = (chart == CHART_EA) | (chart == CHART_EB)
    den_d = np.abs(1.0 + q * np.conj(p) * t) ** 4 * np.abs(q + p * np.conj(t)) ** 4
    den_e = np.abs(p + q * t) ** 4 * np.abs(np.conj(q) * p + t) ** 4
    den = np.where(e_chart, den_e, den_d)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        val = np.where(den == 0.0, np.nan, num / den)
    return np.where(swap_q, -val, val)


def fiber_zero_np(d0, d1, a0, a1):
    n = np.abs(d0) ** 2 + np.abs(d1) ** 2
    v0, v1 = normalize_np(
        (n * (np.abs(a0) ** 2 - np.abs(a1) ** 2)).astype(np.complex128), a1 * np.conj(a0)
    )
    c1 = a0 == 0.0
    v0[c1] = 0.0
    v1[c1] = 1.0
    return v0, v1


def solve_fiber_zero_np(d0, d1, v0, v1, plus):
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        w = v0 / (v1 * (np.abs(d0) ** 2 + np.abs(d1) ** 2))
        mw = np.abs(w)
        sq = np.sqrt(mw * mw + 4.0)
        if plus:
            a = -(w / mw) * (2.0 / (mw + sq))
        else:
            a = (w / mw) * ((mw + sq) / 2.0)
    a0, a1 = normalize_np(a, np.ones_like(a))
    zero = v0 == 0.0
    a0[zero] = 0.0 if plus else 1.0
    a1[zero] = 1.0 if plus else 0.0
    on_q = (v1 == 0.0) & ~zero
    a0[on_q] = np.nan
    a1[on_q] = np.nan
    return a0, a1


# ------------------------------------------------------------- dispatch


def normalize(z0, z1):
    z0, z1 = _c(z0), _c(z1)
    return normalize_nb(z0, z1) if USE_NUMBA else normalize_np(z0, z1)


def chordal(p0, p1, q0, q1):
    args = tuple(_c(v) for v in (p0, p1, q0, q1))
    return chordal_nb(*args) if USE_NUMBA else chordal_np(*args)


def line_points(d0, d1, a0, a1, t0, t1):
    """Intersection of the line with parameters ``(d, a)`` and the fiber over ``t``."""
    args = tuple(_c(v) for v in (d0, d1, a0, a1, t0, t1))
    return line_points_nb(*args) if USE_NUMBA else line_points_np(*args)


def trajectory(d0, d1, R, x0, x1):
    """Image of ``x`` under the anti-holomorphic trajectory map for ``(d, |t|^2 = R)``."""
    d0, d1, x0, x1 = (_c(v) for v in (d0, d1, x0, x1))
    R = np.broadcast_to(_r(R), d0.shape).copy()
    return trajectory_nb(d0, d1, R, x0, x1) if USE_NUMBA else trajectory_np(d0, d1, R, x0, x1)


def solve_line(x0, x1, y0, y1, t):
    """Both preimages of ``(x, y)`` in the fiber over affine ``t``; see column constants."""
    args = tuple(_c(v) for v in (x0, x1, y0, y1, t))
    return solve_line_nb(*args) if USE_NUMBA else solve_line_np(*args)


def jacobian(p, q, t, chart):
    p, q, t = _c(p), _c(q), _c(t)
    chart = np.broadcast_to(np.asarray(chart, dtype=np.int64), p.shape).copy()
    return jacobian_nb(p, q, t, chart) if USE_NUMBA else jacobian_np(p, q, t, chart)


def fiber_zero(d0, d1, a0, a1):
    args = tuple(_c(v) for v in (d0, d1, a0, a1))
    return fiber_zero_nb(*args) if USE_NUMBA else fiber_zero_np(*args)


def solve_fiber_zero(d0, d1, v0, v1, plus):
    args = tuple(_c(v) for v in (d0, d1, v0, v1))
    return solve_fiber_zero_nb(*args, bool(plus)) if USE_NUMBA else solve_fiber_zero_np(*args, bool(plus))
