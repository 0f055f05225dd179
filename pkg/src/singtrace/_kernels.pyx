# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled summation kernels.

Mirrors ``singtrace._kernels_py`` operation for operation: Neumaier
compensation in fixed chunks of 4096, chunk partials combined in order.
Compiled with -ffp-contract=off so results match the pure backend bit for
bit.
"""

from libc.math cimport exp, fabs, pow, INFINITY

DEF CHUNK = 4096
DEF EXP_OVERFLOW = 709.782712893384
DEF EXP_CUTOFF = 745.0


def sum_comp(double[::1] values not None):
    """Compensated sum of a float64 buffer, deterministic chunk order."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t start = 0, stop, i
    cdef double total = 0.0, tc = 0.0, s, c, x, t
    while start < n:
        stop = start + CHUNK
        if stop > n:
            stop = n
        s = 0.0
        c = 0.0
        for i in range(start, stop):
            x = values[i]
            t = s + x
            if fabs(s) >= fabs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        x = s + c
        t = total + x
        if fabs(total) >= fabs(x):
            tc += (total - t) + x
        else:
            tc += (x - t) + total
        total = t
        start = stop
    return total + tc


def pow_sum(double sigma, long long n0, long long n1):
    """Sum of n**(-sigma) for n in [n0, n1], compensated, fixed chunking."""
    if n1 < n0:
        return 0.0
    cdef double total = 0.0, tc = 0.0, s, c, x, t
    cdef long long start = n0, stop, n
    while start <= n1:
        stop = start + CHUNK - 1
        if stop > n1:
            stop = n1
        s = 0.0
        c = 0.0
        for n in range(start, stop + 1):
            x = pow(<double> n, -sigma)
            t = s + x
            if fabs(s) >= fabs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        x = s + c
        t = total + x
        if fabs(total) >= fabs(x):
            tc += (total - t) + x
        else:
            tc += (x - t) + total
        total = t
        start = stop + 1
    return total + tc


def exp_pow_sum(double w, double beta, long long n0, long long n1):
    """Sum of exp(-w * n**beta) for n in [n0, n1]; see the pure backend."""
    if n1 < n0:
        return 0.0, n0 - 1
    cdef double total = 0.0, tc = 0.0, s, c, x, t, e
    cdef long long start = n0, stop, n, n_last = n0 - 1
    cdef bint done = False
    while start <= n1 and not done:
        stop = start + CHUNK - 1
        if stop > n1:
            stop = n1
        s = 0.0
        c = 0.0
        for n in range(start, stop + 1):
            e = w * pow(<double> n, beta)
            if e > EXP_CUTOFF:
                done = True
                break
            x = exp(-e)
            n_last = n
            t = s + x
            if fabs(s) >= fabs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        x = s + c
        t = total + x
        if fabs(total) >= fabs(x):
            tc += (total - t) + x
        else:
            tc += (x - t) + total
        total = t
        start = stop + 1
    return total + tc, n_last


def exp_lincomb_sum(double a, double[::1] xs not None,
                    double b, double[::1] ys not None):
    """Sum of exp(a*xs[i] + b*ys[i]); -inf arguments contribute 0."""
    cdef Py_ssize_t n = xs.shape[0]
    cdef Py_ssize_t start = 0, stop, i
    cdef double total = 0.0, tc = 0.0, s, c, x, t, arg
    while start < n:
        stop = start + CHUNK
        if stop > n:
            stop = n
        s = 0.0
        c = 0.0
        for i in range(start, stop):
            arg = a * xs[i] + b * ys[i]
            if arg != arg or arg == -INFINITY:
                continue
            if arg > EXP_OVERFLOW:
                return INFINITY
            x = exp(arg)
            t = s + x
            if fabs(s) >= fabs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        x = s + c
        t = total + x
        if fabs(total) >= fabs(x):
            tc += (total - t) + x
        else:
            tc += (x - t) + total
        total = t
        start = stop
    return total + tc
