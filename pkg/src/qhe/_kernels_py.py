"""Pure-Python cycle kernels.

Line-for-line mirror of ``_kernels.pyx``; used when the compiled extension
is unavailable or ``QHE_PURE_PYTHON=1`` is set. Energies passed in must be
sorted ascending (ground first).
"""
import math

import numpy as np

FOUND = 0
NOT_FOUND = 1
MULTIPLE_ROOTS = 2

_MAX_BISECT = 200


def _pair_diff(x, s):
    """exp(-x) - exp(-(x - s)), accurate when s is small."""
    if s <= 0.0:
        return -math.exp(-x) * math.expm1(s)
    return math.exp(-(x - s)) * math.expm1(-s)


def otto_quantities(eh, el, t_h, t_l):
    """(net work, heat absorbed from the hot bath, heat released to the cold bath).

    Each population difference p_m^h - p_m^l is built from pairwise terms
    w_m^h w_k^l - w_m^l w_k^h, so it keeps full relative precision even when
    both baths are hot and the two populations agree to many digits.
    """
    n = len(eh)
    h0 = eh[0]
    l0 = el[0]
    rh = [e - h0 for e in eh]
    rl = [e - l0 for e in el]
    zh = 0.0
    zl = 0.0
    for m in range(n):
        zh += math.exp(-rh[m] / t_h)
        zl += math.exp(-rl[m] / t_l)
    w = 0.0
    qin = 0.0
    qout = 0.0
    for m in range(n):
        acc = 0.0
        for k in range(n):
            if k != m:
                x = rh[m] / t_h + rl[k] / t_l
                s = (rh[m] - rh[k]) / t_h - (rl[m] - rl[k]) / t_l
                acc += _pair_diff(x, s)
        dp = acc / (zh * zl)
        w += dp * (rh[m] - rl[m])
        qin += dp * rh[m]
        qout += dp * rl[m]
    return w, qin, qout


def net_work(eh, el, t_h, t_l):
    return otto_quantities(eh, el, t_h, t_l)[0]


def _bisect(eh, el, t_l, a, b, fa, rtol):
    for _ in range(_MAX_BISECT):
        if b - a <= rtol * a:
            break
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = net_work(eh, el, m, t_l)
        if fm == 0.0:
            return m
        if (fm < 0.0) == (fa < 0.0):
            a = m
            fa = fm
        else:
            b = m
    return 0.5 * (a + b)


def critical_temperature(eh, el, t_l, lo, hi, n_scan, rtol):
    """Locate the hot temperature where net work vanishes.

    A geometric pre-scan of `n_scan` points over [lo, hi] counts sign
    changes first. Returns ``(status, t_h)`` with status FOUND, NOT_FOUND
    (no sign change, or work identically zero) or MULTIPLE_ROOTS.
    """
    step = math.log(hi / lo) / (n_scan - 1)
    ts = [lo * math.exp(i * step) for i in range(n_scan)]
    ts[-1] = hi
    ws = [net_work(eh, el, t, t_l) for t in ts]
    roots = 0
    exact = -1
    bracket = -1
    all_zero = True
    for i in range(n_scan):
        if ws[i] == 0.0:
            roots += 1
            exact = i
        else:
            all_zero = False
        if i + 1 < n_scan and ws[i] * ws[i + 1] < 0.0:
            roots += 1
            bracket = i
    if all_zero or roots == 0:
        return NOT_FOUND, math.nan
    if roots > 1:
        return MULTIPLE_ROOTS, math.nan
    if exact >= 0:
        return FOUND, ts[exact]
    return FOUND, _bisect(eh, el, t_l, ts[bracket], ts[bracket + 1], ws[bracket], rtol)


def net_work3_batch(d1h, d2h, d1l, d2l, t_h, t_l):
    n = len(d1h)
    out = np.empty(n)
    for i in range(n):
        eh = (0.0, d1h[i], d1h[i] + d2h[i])
        el = (0.0, d1l[i], d1l[i] + d2l[i])
        out[i] = net_work(eh, el, t_h[i], t_l[i])
    return out


def critical_ratio3_batch(d1h, d2h, d1l, d2l, t_l, lo_factor, hi_factor, n_scan, rtol):
    """Critical T_h / T_l for many 3-level cycles; returns (status, ratio) arrays."""
    n = len(d1h)
    status = np.empty(n, dtype=np.int8)
    ratio = np.empty(n)
    for i in range(n):
        eh = (0.0, d1h[i], d1h[i] + d2h[i])
        el = (0.0, d1l[i], d1l[i] + d2l[i])
        tl = t_l[i]
        s, t = critical_temperature(eh, el, tl, tl * lo_factor, tl * hi_factor, n_scan, rtol)
        status[i] = s
        ratio[i] = t / tl
    return status, ratio
