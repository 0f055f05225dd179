"""Pure-Python summation kernels.

Fallback for the compiled extension ``singtrace._kernels``.  Both backends
perform the identical sequence of floating-point operations (Neumaier
compensation in fixed chunks of 4096, chunk partials combined in order), so
results agree bit for bit; only speed differs.  See ``benchmarks/`` for the
comparison.
"""

import math

CHUNK = 4096
_EXP_OVERFLOW = 709.782712893384  # ln(largest double)
_EXP_CUTOFF = 745.0               # exp(-745) underflows to 0


def sum_comp(values) -> float:
    """Compensated sum of a float sequence, deterministic chunk order."""
    n = len(values)
    total = 0.0
    tc = 0.0
    start = 0
    while start < n:
        stop = min(start + CHUNK, n)
        s = 0.0
        c = 0.0
        for i in range(start, stop):
            x = float(values[i])
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        x = s + c
        t = total + x
        if abs(total) >= abs(x):
            tc += (total - t) + x
        else:
            tc += (x - t) + total
        total = t
        start = stop
    return total + tc


def pow_sum(sigma: float, n0: int, n1: int) -> float:
    """Sum of n**(-sigma) for n in [n0, n1], compensated, fixed chunking."""
    if n1 < n0:
        return 0.0
    total = 0.0
    tc = 0.0
    start = n0
    while start <= n1:
        stop = min(start + CHUNK - 1, n1)
        s = 0.0
        c = 0.0
        for n in range(start, stop + 1):
            x = float(n) ** (-sigma)
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        x = s + c
        t = total + x
        if abs(total) >= abs(x):
            tc += (total - t) + x
        else:
            tc += (x - t) + total
        total = t
        start = stop + 1
    return total + tc


def exp_pow_sum(w: float, beta: float, n0: int, n1: int):
    """Sum of exp(-w * n**beta) for n in [n0, n1].

    Terms are monotone decreasing in n; accumulation stops once the
    exponent falls below the double-precision floor.  Returns
    ``(total, n_last)`` where ``n_last`` is the last index actually added
    (``n0 - 1`` when no term contributed).
    """
    if n1 < n0:
        return 0.0, n0 - 1
    total = 0.0
    tc = 0.0
    n_last = n0 - 1
    start = n0
    done = False
    while start <= n1 and not done:
        stop = min(start + CHUNK - 1, n1)
        s = 0.0
        c = 0.0
        for n in range(start, stop + 1):
            e = w * (float(n) ** beta)
            if e > _EXP_CUTOFF:
                done = True
                break
            x = math.exp(-e)
            n_last = n
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        x = s + c
        t = total + x
        if abs(total) >= abs(x):
            tc += (total - t) + x
        else:
            tc += (x - t) + total
        total = t
        start = stop + 1
    return total + tc, n_last


def exp_lincomb_sum(a: float, xs, b: float, ys) -> float:
    """Sum of exp(a*xs[i] + b*ys[i]); -inf arguments contribute 0.

    Overflowing terms make the result +inf, mirroring C semantics.
    """
    n = len(xs)
    total = 0.0
    tc = 0.0
    start = 0
    while start < n:
        stop = min(start + CHUNK, n)
        s = 0.0
        c = 0.0
        for i in range(start, stop):
            arg = a * float(xs[i]) + b * float(ys[i])
            # nan arises only from 0*(-inf): a zero-weighted empty piece
            if arg != arg or arg == float("-inf"):
                continue
            if arg > _EXP_OVERFLOW:
                return float("inf")
            x = math.exp(arg)
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        x = s + c
        t = total + x
        if abs(total) >= abs(x):
            tc += (total - t) + x
        else:
            tc += (x - t) + total
        total = t
        start = stop
    return total + tc
