"""Deterministic series evaluation: exact compensated windows plus
Euler-Maclaurin continuations with tracked error bounds.

All power-law and exponential series used by the norm, zeta and heat
machinery reduce to the four primitives here.  Exact summation runs through
the backend kernels (compiled or pure, bit-identical); beyond the exact
window the series are continued analytically and the first omitted
correction term is returned as the error bound.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import gammaincc

from . import _backend

# Exact-summation windows.  Power series are summed term by term to 1e6
# before the analytic continuation takes over; exponential series need a
# much shorter window for the same accuracy.
POWER_EXACT_WINDOW = 10**6
EXP_EXACT_WINDOW = 10**5

_MAX_FLOOR = 2.0**53  # above this, floor(t) == t in double precision


def comp_sum(values) -> float:
    """Compensated sum of an array (deterministic chunk order)."""
    return _backend.sum_comp(values)


def power_tail_sum(sigma: float, start: int, window: int = POWER_EXACT_WINDOW):
    """Sum of n**(-sigma) for n >= start, with error bound.

    Requires sigma > 1.  Terms up to ``start + window - 1`` are summed
    exactly; the remainder is the integral plus half-term, first- and
    third-derivative corrections, with the next correction returned as the
    error bound.
    """
    if sigma <= 1.0:
        raise ValueError(f"power tail diverges for exponent {sigma} <= 1")
    m = start + window - 1
    exact = _backend.pow_sum(sigma, start, m)
    a = float(m + 1)
    rest, err = _power_remainder(sigma, a)
    return exact + rest, err


def _power_remainder(sigma: float, a: float):
    """Euler-Maclaurin tail of sum n**(-sigma) from n >= a (a real)."""
    f = a ** (-sigma)
    integral = a ** (1.0 - sigma) / (sigma - 1.0)
    d1 = sigma * a ** (-sigma - 1.0)
    d3 = sigma * (sigma + 1.0) * (sigma + 2.0) * a ** (-sigma - 3.0)
    value = integral + 0.5 * f + d1 / 12.0 + (-d3 / 720.0)
    err = (sigma * (sigma + 1.0) * (sigma + 2.0) * (sigma + 3.0)
           * (sigma + 4.0) * a ** (-sigma - 5.0) / 30240.0)
    return value, err


@lru_cache(maxsize=8)
def _prefix_array(alpha: float, window: int) -> np.ndarray:
    """Cumulative sums of n**(-alpha) for n = 1..window (curve evaluation
    cache; the compensated kernels stay in charge of one-shot sums)."""
    n = np.arange(1, window + 1, dtype=float)
    return np.cumsum(n ** (-alpha))


def power_prefix_sum(alpha: float, m: float,
                     window: int = POWER_EXACT_WINDOW) -> float:
    """Sum of n**(-alpha) for integer 1 <= n <= m (m real, possibly huge)."""
    if m < 1.0:
        return 0.0
    arr = _prefix_array(alpha, window)
    if m <= window:
        return float(arr[int(m) - 1])
    return float(arr[-1]) + _power_range_em(alpha, float(window), m)


def _power_range_em(alpha: float, a: float, b: float) -> float:
    """Euler-Maclaurin value of sum n**(-alpha) for a < n <= b (a,b real)."""
    if b <= a:
        return 0.0

    def f(x):
        return x ** (-alpha)

    def fp(x):
        return -alpha * x ** (-alpha - 1.0)

    if alpha == 1.0:
        integral = math.log(b / a)
    else:
        integral = (b ** (1.0 - alpha) - a ** (1.0 - alpha)) / (1.0 - alpha)
    # sum over (a, b] = integral + (f(b) - f(a))/2 + (f'(b) - f'(a))/12 - ...
    return integral + 0.5 * (f(b) - f(a)) + (fp(b) - fp(a)) / 12.0


def power_step_integral(alpha: float, t: float,
                        window: int = POWER_EXACT_WINDOW) -> float:
    """Integral over [0, t] of the step function equal to n**(-alpha) on
    [n-1, n), i.e. the partial sum with a fractional last piece."""
    if t <= 0.0:
        return 0.0
    if t >= _MAX_FLOOR:
        # fractional piece is below double resolution
        return power_prefix_sum(alpha, t, window)
    m = math.floor(t)
    s = power_prefix_sum(alpha, m, window) if m >= 1 else 0.0
    frac = t - m
    if frac > 0.0:
        s += frac * (m + 1.0) ** (-alpha)
    return s


def power_step_integral_ln(alpha: float, ln_t: float,
                           window: int = POWER_EXACT_WINDOW) -> float:
    """``power_step_integral`` with the abscissa given as ln t (handles
    abscissae beyond double range)."""
    if ln_t == float("-inf"):
        return 0.0
    ln_w = math.log(window)
    if ln_t <= ln_w:
        return power_step_integral(alpha, math.exp(ln_t), window)
    base = power_prefix_sum(alpha, float(window), window)
    a = float(window)
    if alpha == 1.0:
        integral = ln_t - math.log(a)
    else:
        hi_ln = (1.0 - alpha) * ln_t
        hi = math.inf if hi_ln > 709.78 else math.exp(hi_ln)
        integral = (hi - a ** (1.0 - alpha)) / (1.0 - alpha)
    f_t = math.exp(-alpha * ln_t) if alpha * ln_t < 745.0 else 0.0
    f_a = a ** (-alpha)
    d_t = -alpha * f_t * math.exp(-ln_t) if ln_t < 709.0 else 0.0
    d_a = -alpha * a ** (-alpha - 1.0)
    return base + integral + 0.5 * (f_t - f_a) + (d_t - d_a) / 12.0


def exp_power_tail_sum(w: float, beta: float, start: int,
                       window: int = EXP_EXACT_WINDOW):
    """Sum of exp(-w * n**beta) for n >= start, with error bound.

    Exact summation runs until the exponent underflows or the window is
    exhausted; any remaining mass is evaluated as an incomplete-gamma
    integral with Euler-Maclaurin corrections.  A short window is tried
    first and kept whenever its certified error bound is already at the
    rounding floor.
    """
    if w <= 0.0 or beta <= 0.0:
        raise ValueError("exponential tail needs w > 0 and beta > 0")
    for window_eff in (1024, window):
        hi = start + window_eff - 1
        exact, n_last = _backend.exp_pow_sum(w, beta, start, hi)
        if n_last < hi:
            # naturally exhausted: remainder below exp(-745)
            a = float(n_last + 1)
            _, rb = _exp_remainder_terms(w, beta, a)
            return exact, max(rb, 5e-324)
        a = float(hi + 1)
        rest, err = _exp_remainder_terms(w, beta, a)
        total = exact + rest
        if window_eff == window or err <= 1e-13 * max(abs(total), 1e-300):
            return total, err
    raise AssertionError("unreachable")


def _exp_remainder_terms(w: float, beta: float, a: float):
    """Euler-Maclaurin tail of sum exp(-w n**beta) from n >= a."""
    e = w * a ** beta
    if e > 745.0:
        return 0.0, 5e-324
    f = math.exp(-e)
    integral = exp_power_integral(w, beta, a)
    # tail = integral + f(a)/2 - f'(a)/12 + ..., and f'(a) = -beta w a^(b-1) f
    d1 = beta * w * a ** (beta - 1.0) * f
    value = integral + 0.5 * f + d1 / 12.0
    g = beta * w * a ** (beta - 1.0)
    b1 = abs(beta - 1.0)
    d3 = f * (g ** 3
              + 3.0 * beta * b1 * w * a ** (beta - 2.0) * g
              + beta * b1 * abs(beta - 2.0) * w * a ** (beta - 3.0))
    return value, d3 / 720.0


def exp_power_integral(w: float, beta: float, a: float) -> float:
    """Integral over [a, inf) of exp(-w x**beta)."""
    s = 1.0 / beta
    x = w * a ** beta
    # (1/beta) w**(-1/beta) Gamma(1/beta, x); computed in logs to dodge
    # overflow for very small w
    q = float(gammaincc(s, x))
    if q == 0.0:
        return 0.0
    ln = -math.log(beta) - s * math.log(w) + math.lgamma(s) + math.log(q)
    if ln > 709.782712893384:
        return math.inf
    return math.exp(ln)
