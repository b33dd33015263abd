# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cycle kernels; same interface and arithmetic order as _kernels_py."""
from libc.math cimport exp, expm1, log, NAN
from libc.stdlib cimport malloc, free

import numpy as np

FOUND = 0
NOT_FOUND = 1
MULTIPLE_ROOTS = 2

cdef enum:
    C_FOUND = 0
    C_NOT_FOUND = 1
    C_MULTIPLE_ROOTS = 2
    MAX_BISECT = 200


cdef inline double _pair_diff(double x, double s) noexcept nogil:
    # exp(-x) - exp(-(x - s)), accurate when s is small
    if s <= 0.0:
        return -exp(-x) * expm1(s)
    return exp(-(x - s)) * expm1(-s)


cdef void _otto(const double* eh, const double* el, Py_ssize_t n, double t_h, double t_l,
                double* buf, double* out) noexcept nogil:
    # buf holds 2 * n doubles: rh, rl
    cdef double* rh = buf
    cdef double* rl = buf + n
    cdef Py_ssize_t m, k
    cdef double w = 0.0, qin = 0.0, qout = 0.0, dp, acc, x, s
    cdef double zh = 0.0, zl = 0.0
    for m in range(n):
        rh[m] = eh[m] - eh[0]
        rl[m] = el[m] - el[0]
    for m in range(n):
        zh += exp(-rh[m] / t_h)
        zl += exp(-rl[m] / t_l)
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
    out[0] = w
    out[1] = qin
    out[2] = qout


cdef inline double _work(const double* eh, const double* el, Py_ssize_t n, double t_h,
                         double t_l, double* buf) noexcept nogil:
    cdef double out[3]
    _otto(eh, el, n, t_h, t_l, buf, out)
    return out[0]


cdef int _critical(const double* eh, const double* el, Py_ssize_t n, double t_l,
                   double lo, double hi, int n_scan, double rtol,
                   double* buf, double* ts, double* ws, double* root) noexcept nogil:
    cdef int i, it
    cdef int roots = 0, exact = -1, bracket = -1
    cdef bint all_zero = True
    cdef double step = log(hi / lo) / (n_scan - 1)
    cdef double a, b, fa, m, fm
    for i in range(n_scan):
        ts[i] = lo * exp(i * step)
    ts[n_scan - 1] = hi
    for i in range(n_scan):
        ws[i] = _work(eh, el, n, ts[i], t_l, buf)
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
        root[0] = NAN
        return C_NOT_FOUND
    if roots > 1:
        root[0] = NAN
        return C_MULTIPLE_ROOTS
    if exact >= 0:
        root[0] = ts[exact]
        return C_FOUND
    a = ts[bracket]
    b = ts[bracket + 1]
    fa = ws[bracket]
    for it in range(MAX_BISECT):
        if b - a <= rtol * a:
            break
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = _work(eh, el, n, m, t_l, buf)
        if fm == 0.0:
            root[0] = m
            return C_FOUND
        if (fm < 0.0) == (fa < 0.0):
            a = m
            fa = fm
        else:
            b = m
    root[0] = 0.5 * (a + b)
    return C_FOUND


cdef double* _to_c(seq, Py_ssize_t n) except NULL:
    cdef double* arr = <double*> malloc(n * sizeof(double))
    if arr == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        arr[i] = seq[i]
    return arr


def otto_quantities(eh, el, double t_h, double t_l):
    """(net work, heat absorbed from the hot bath, heat released to the cold bath)."""
    cdef Py_ssize_t n = len(eh)
    cdef double out[3]
    cdef double* h = _to_c(eh, n)
    cdef double* l = NULL
    cdef double* buf = NULL
    try:
        l = _to_c(el, n)
        buf = <double*> malloc(2 * n * sizeof(double))
        if buf == NULL:
            raise MemoryError()
        _otto(h, l, n, t_h, t_l, buf, out)
    finally:
        free(h)
        free(l)
        free(buf)
    return out[0], out[1], out[2]


def net_work(eh, el, double t_h, double t_l):
    return otto_quantities(eh, el, t_h, t_l)[0]


def critical_temperature(eh, el, double t_l, double lo, double hi, int n_scan, double rtol):
    """Pre-scan + bisection for the zero of net work in T_h; returns (status, t_h)."""
    cdef Py_ssize_t n = len(eh)
    cdef double root
    cdef int status
    cdef double* h = _to_c(eh, n)
    cdef double* l = NULL
    cdef double* buf = NULL
    cdef double* ts = NULL
    cdef double* ws = NULL
    try:
        l = _to_c(el, n)
        buf = <double*> malloc(2 * n * sizeof(double))
        ts = <double*> malloc(n_scan * sizeof(double))
        ws = <double*> malloc(n_scan * sizeof(double))
        if buf == NULL or ts == NULL or ws == NULL:
            raise MemoryError()
        status = _critical(h, l, n, t_l, lo, hi, n_scan, rtol, buf, ts, ws, &root)
    finally:
        free(h)
        free(l)
        free(buf)
        free(ts)
        free(ws)
    return status, root


def net_work3_batch(const double[::1] d1h, const double[::1] d2h, const double[::1] d1l,
                    const double[::1] d2l, const double[::1] t_h, const double[::1] t_l):
    cdef Py_ssize_t i, n = d1h.shape[0]
    out_arr = np.empty(n)
    cdef double[::1] out = out_arr
    cdef double eh[3]
    cdef double el[3]
    cdef double buf[6]
    with nogil:
        for i in range(n):
            eh[0] = 0.0
            eh[1] = d1h[i]
            eh[2] = d1h[i] + d2h[i]
            el[0] = 0.0
            el[1] = d1l[i]
            el[2] = d1l[i] + d2l[i]
            out[i] = _work(eh, el, 3, t_h[i], t_l[i], buf)
    return out_arr


def critical_ratio3_batch(const double[::1] d1h, const double[::1] d2h, const double[::1] d1l,
                          const double[::1] d2l, const double[::1] t_l, double lo_factor,
                          double hi_factor, int n_scan, double rtol):
    """Critical T_h / T_l for many 3-level cycles; returns (status, ratio) arrays."""
    cdef Py_ssize_t i, n = d1h.shape[0]
    status_arr = np.empty(n, dtype=np.int8)
    ratio_arr = np.empty(n)
    cdef signed char[::1] status = status_arr
    cdef double[::1] ratio = ratio_arr
    cdef double eh[3]
    cdef double el[3]
    cdef double buf[6]
    cdef double root, tl
    cdef double* ts = <double*> malloc(n_scan * sizeof(double))
    cdef double* ws = <double*> malloc(n_scan * sizeof(double))
    if ts == NULL or ws == NULL:
        free(ts)
        free(ws)
        raise MemoryError()
    try:
        with nogil:
            for i in range(n):
                eh[0] = 0.0
                eh[1] = d1h[i]
                eh[2] = d1h[i] + d2h[i]
                el[0] = 0.0
                el[1] = d1l[i]
                el[2] = d1l[i] + d2l[i]
                tl = t_l[i]
                status[i] = _critical(eh, el, 3, tl, tl * lo_factor, tl * hi_factor,
                                      n_scan, rtol, buf, ts, ws, &root)
                ratio[i] = root / tl
    finally:
        free(ts)
        free(ws)
    return status_arr, ratio_arr
