"""Decreasing rearrangements, distribution functions, partial integrals,
truncated traces and submajorization on step functions and spectra.

Breakpoints and values live in the natural-log domain so that abscissae
like 2**900 and values like 30 * 2**-900 are exact; every integral is
assembled from per-piece terms of the form exp(ln v + ln dt) with
compensated accumulation.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

from . import _backend, summation
from .errors import (DivergenceError, InputError, NonMonotoneError,
                     TailContinuityError, UnsupportedInputError)

NEG_INF = float("-inf")
_LN_OVERFLOW = 709.782712893384


def log_add_exp(la: float, lb: float) -> float:
    """ln(exp(la) + exp(lb)) without overflow."""
    if la == NEG_INF:
        return lb
    if lb == NEG_INF:
        return la
    hi, lo = (la, lb) if la >= lb else (lb, la)
    return hi + math.log1p(math.exp(lo - hi))

def log_diff_exp(la: float, lb: float) -> float:
    """ln(exp(la) - exp(lb)) for la > lb (-inf when the gap is below
    double resolution)."""
    if lb == NEG_INF:
        return la
    if not la > lb:
        raise ValueError("log_diff_exp needs la > lb")
    d = math.exp(lb - la)
    if d >= 1.0:
        return NEG_INF
    return la + math.log1p(-d)

def exp_guarded(a: float) -> float:
    if a == NEG_INF:
        return 0.0
    if a > _LN_OVERFLOW:
        return math.inf
    return math.exp(a)


def _log_or_neg_inf(v: float) -> float:
    if v < 0.0 or not math.isfinite(v):
        raise InputError(f"values must be finite and nonnegative, got {v}")
    return math.log(v) if v > 0.0 else NEG_INF


@dataclass(frozen=True)
class StepFunction:
    """Right-continuous nonnegative step function on [0, inf).

    Piece i carries value exp(log_values[i]) on the interval from the
    previous breakpoint (0 for the first piece) up to exp(log_breakpoints[i]);
    ``beyond_last`` is the constant value past the final breakpoint and must
    be 0 whenever integrability over [0, inf) is asserted.
    """

    log_breakpoints: tuple = ()
    log_values: tuple = ()
    beyond_last: float = 0.0
    rearranged: bool = False
    name: str = ""

    def __post_init__(self):
        lbp = tuple(float(b) for b in self.log_breakpoints)
        lv = tuple(float(v) for v in self.log_values)
        object.__setattr__(self, "log_breakpoints", lbp)
        object.__setattr__(self, "log_values", lv)
        if len(lbp) != len(lv):
            raise InputError("breakpoints and values must have equal length")
        for b in lbp:
            if not math.isfinite(b):
                raise InputError("log breakpoints must be finite")
        for i in range(1, len(lbp)):
            if not lbp[i] > lbp[i - 1]:
                raise NonMonotoneError(
                    f"log breakpoints must be strictly increasing at {i + 1}",
                    index=i + 1)
        for v in lv:
            if math.isnan(v) or v == math.inf:
                raise InputError("values must be finite")
        if not (math.isfinite(self.beyond_last) and self.beyond_last >= 0.0):
            raise InputError("beyond_last must be finite and nonnegative")
        if self.rearranged:
            if self.beyond_last != 0.0:
                raise InputError("a rearranged function must vanish at infinity")
            for i in range(1, len(lv)):
                if lv[i] > lv[i - 1]:
                    raise NonMonotoneError(
                        f"rearranged values must be non-increasing at {i + 1}",
                        index=i + 1)

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_values(cls, breakpoints, values, beyond_last=0.0, **kw):
        lbp = tuple(math.log(float(b)) for b in breakpoints)
        lv = tuple(_log_or_neg_inf(float(v)) for v in values)
        return cls(lbp, lv, float(beyond_last), **kw)

    @classmethod
    def from_unit_pieces(cls, values, **kw):
        """Values on (0,1], (1,2], ... (k-1, k]."""
        return cls.from_values(range(1, len(values) + 1), values, **kw)

    @classmethod
    def indicator(cls, a: float, b: float, value: float = 1.0):
        """value on (a, b], zero elsewhere (0 <= a < b)."""
        if not 0.0 <= a < b:
            raise InputError("indicator needs 0 <= a < b")
        if a == 0.0:
            return cls.from_values([b], [value])
        return cls.from_values([a, b], [0.0, value])

    # -- basic views ------------------------------------------------------

    @property
    def n_pieces(self) -> int:
        return len(self.log_breakpoints)

    @property
    def breakpoints(self):
        return tuple(math.exp(b) for b in self.log_breakpoints)

    @property
    def values(self):
        return tuple(exp_guarded(v) for v in self.log_values)

    def piece_log_lengths(self) -> list:
        """ln of each piece length (first piece starts at 0)."""
        out = []
        prev = NEG_INF
        for b in self.log_breakpoints:
            out.append(log_diff_exp(b, prev))
            prev = b
        return out

    def value_at_ln(self, ln_t: float) -> float:
        """Right-continuous evaluation at t = exp(ln_t)."""
        i = bisect_right(self.log_breakpoints, ln_t)
        if i < self.n_pieces:
            return exp_guarded(self.log_values[i])
        return self.beyond_last

    def value_at(self, t: float) -> float:
        if t < 0.0:
            raise InputError("t must be nonnegative")
        return self.value_at_ln(math.log(t) if t > 0.0 else NEG_INF)

    # -- algebra -----------------------------------------------------------

    def scaled(self, c: float) -> "StepFunction":
        if c <= 0.0 or not math.isfinite(c):
            raise InputError("scale factor must be positive and finite")
        ln_c = math.log(c)
        return StepFunction(self.log_breakpoints,
                            tuple(v + ln_c for v in self.log_values),
                            self.beyond_last * c, self.rearranged, self.name)

    def powered(self, s: float) -> "StepFunction":
        if s <= 0.0:
            raise InputError("power must be positive")
        return StepFunction(self.log_breakpoints,
                            tuple(s * v for v in self.log_values),
                            self.beyond_last ** s, self.rearranged, self.name)

    # -- cached per-piece data ----------------------------------------------

    def _piece_arrays(self):
        """(log_values, log_lengths, prefix_integrals) as numpy arrays."""
        cache = getattr(self, "_pieces_cache", None)
        if cache is None:
            lv = np.asarray(self.log_values, dtype=float)
            ll = np.asarray(self.piece_log_lengths(), dtype=float)
            with np.errstate(invalid="ignore", over="ignore"):
                contrib = np.exp(lv + ll)
            contrib = np.nan_to_num(contrib, nan=0.0, posinf=math.inf)
            prefix = np.concatenate(([0.0], np.cumsum(contrib)))
            cache = (lv, ll, prefix)
            object.__setattr__(self, "_pieces_cache", cache)
        return cache

    def total_integral(self) -> float:
        if self.beyond_last > 0.0:
            return math.inf
        return self._piece_arrays()[2][-1]

    def partial_integral_ln(self, ln_t: float) -> float:
        """Integral of the function over (0, exp(ln_t)]."""
        lbp = self.log_breakpoints
        _, _, prefix = self._piece_arrays()
        j = bisect_left(lbp, ln_t)
        if j >= self.n_pieces:
            total = prefix[-1]
            if ln_t <= (lbp[-1] if lbp else NEG_INF):
                return total
            if self.beyond_last == 0.0:
                return total
            extra_ln = log_diff_exp(ln_t, lbp[-1]) if lbp else ln_t
            return total + self.beyond_last * exp_guarded(extra_ln)
        s = prefix[j]
        prev = lbp[j - 1] if j > 0 else NEG_INF
        if ln_t > prev:
            lv = self.log_values[j]
            if lv != NEG_INF:
                s += exp_guarded(lv + log_diff_exp(ln_t, prev))
        return float(s)

    # -- whole-line integrals of powers / heat weights ----------------------

    def power_integral(self, s: float):
        """(integral of f**s over [0, inf), error bound)."""
        if s <= 0.0:
            raise InputError("power must be positive")
        if self.beyond_last > 0.0:
            raise DivergenceError("function does not vanish at infinity")
        lv, ll, _ = self._piece_arrays()
        return _backend.exp_lincomb_sum(s, lv, 1.0, ll), 0.0

    def exp_integral(self, w: float, q: float):
        """(integral of exp(-w * f(t)**-q) dt over the support, bound).

        Pieces where f vanishes contribute 0 (the weight is defined as 0 on
        the zero set); the region past the last breakpoint contributes 0
        when beyond_last is 0 and is rejected otherwise.
        """
        if self.beyond_last > 0.0:
            raise DivergenceError("function does not vanish at infinity")
        lv, ll, _ = self._piece_arrays()
        total = 0.0
        parts = []
        for i in range(self.n_pieces):
            if lv[i] == NEG_INF:
                continue
            e = -q * lv[i]
            winv = math.inf if e > _LN_OVERFLOW else w * math.exp(e)
            arg = ll[i] - winv
            parts.append(exp_guarded(arg) if arg != NEG_INF else 0.0)
        total = summation.comp_sum(np.asarray(parts, dtype=float))
        return total, 0.0


ZERO_FUNCTION = StepFunction((), (), 0.0, True, "zero")


@dataclass(frozen=True)
class PowerTail:
    """Analytic continuation mu_n = coefficient * n**-exponent for n >= start_index."""

    coefficient: float
    exponent: float
    start_index: int

    def __post_init__(self):
        if not (self.coefficient > 0.0 and math.isfinite(self.coefficient)):
            raise InputError("tail coefficient must be positive and finite")
        if not (self.exponent > 0.0 and math.isfinite(self.exponent)):
            raise InputError("tail exponent must be positive and finite")
        if int(self.start_index) != self.start_index or self.start_index < 1:
            raise InputError("tail start_index must be a positive integer")
        object.__setattr__(self, "start_index", int(self.start_index))

    def mu(self, n: int) -> float:
        return self.coefficient * float(n) ** (-self.exponent)


@dataclass(frozen=True)
class Spectrum:
    """Non-increasing singular values: explicit head, optional power tail.

    The head holds mu_1 >= ... >= mu_N; with a tail present,
    mu_n = c * n**-alpha for n > N, and the head must continue monotonely
    into the tail.  Bridged to a step function by mu(t) = mu_n on [n-1, n).
    """

    head: tuple = ()
    tail: PowerTail | None = None
    name: str = ""

    def __post_init__(self):
        head = tuple(float(v) for v in self.head)
        object.__setattr__(self, "head", head)
        for i, v in enumerate(head):
            if not (math.isfinite(v) and v >= 0.0):
                raise InputError(f"head value {i + 1} must be finite and >= 0")
            if i > 0 and v > head[i - 1]:
                raise NonMonotoneError(
                    f"head must be non-increasing at index {i + 1}",
                    index=i + 1)
        if self.tail is not None:
            n = len(head)
            if self.tail.start_index != n + 1:
                raise InputError(
                    f"tail start_index must be {n + 1}, got {self.tail.start_index}")
            first_tail = self.tail.mu(n + 1)
            if head and head[-1] < first_tail * (1.0 - 1e-12):
                raise TailContinuityError(
                    f"head value {head[-1]!r} at index {n} is below the tail "
                    f"continuation {first_tail!r} at index {n + 1}",
                    index=n + 1)

    # -- basic views -------------------------------------------------------

    @property
    def n_head(self) -> int:
        return len(self.head)

    def mu(self, n: int) -> float:
        """1-based singular value."""
        if n < 1:
            raise InputError("index must be >= 1")
        if n <= len(self.head):
            return self.head[n - 1]
        if self.tail is None:
            return 0.0
        return self.tail.mu(n)

    def head_step_function(self) -> StepFunction:
        """Materialize the head as a step function (tail dropped)."""
        vals = [v for v in self.head]
        return StepFunction.from_unit_pieces(vals, rearranged=True,
                                             name=self.name or "head")

    # -- algebra -----------------------------------------------------------

    def scaled(self, c: float) -> "Spectrum":
        if c <= 0.0 or not math.isfinite(c):
            raise InputError("scale factor must be positive and finite")
        tail = None
        if self.tail is not None:
            tail = PowerTail(self.tail.coefficient * c, self.tail.exponent,
                             self.tail.start_index)
        return Spectrum(tuple(v * c for v in self.head), tail, self.name)

    def powered(self, p: float) -> "Spectrum":
        if p <= 0.0:
            raise InputError("power must be positive")
        tail = None
        if self.tail is not None:
            tail = PowerTail(self.tail.coefficient ** p,
                             self.tail.exponent * p, self.tail.start_index)
        return Spectrum(tuple(v ** p for v in self.head), tail, self.name)

    # -- cached prefix sums --------------------------------------------------

    def _head_prefix(self):
        cache = getattr(self, "_prefix_cache", None)
        if cache is None:
            cache = np.concatenate(([0.0],
                                    np.cumsum(np.asarray(self.head, float))))
            object.__setattr__(self, "_prefix_cache", cache)
        return cache

    def partial_integral_ln(self, ln_t: float) -> float:
        if ln_t <= 700.0:
            return self.partial_sum(exp_guarded(ln_t))
        # abscissa beyond double range: the head is complete, the tail
        # continues in the log form
        total = float(self._head_prefix()[-1])
        if self.tail is None:
            return total
        c, alpha = self.tail.coefficient, self.tail.exponent
        extra = (summation.power_step_integral_ln(alpha, ln_t)
                 - summation.power_step_integral(alpha, float(len(self.head))))
        return total + c * extra

    def partial_sum(self, t: float) -> float:
        """Integral over [0, t] of the bridged step function."""
        if t <= 0.0:
            return 0.0
        prefix = self._head_prefix()
        n = len(self.head)
        if t <= n:
            j = math.floor(t)
            s = float(prefix[int(j)])
            if j < n and t > j:
                s += (t - j) * self.head[int(j)]
            return s
        total = float(prefix[-1])
        if self.tail is None:
            return total
        c, alpha = self.tail.coefficient, self.tail.exponent
        extra = (summation.power_step_integral(alpha, t)
                 - summation.power_step_integral(alpha, float(n)))
        return total + c * extra

    def power_integral(self, s: float):
        """(sum of mu_n**s over all n, error bound)."""
        if s <= 0.0:
            raise InputError("power must be positive")
        lv = self._log_head()
        head = _backend.exp_lincomb_sum(s, lv, 0.0, self._zeros_like_head())
        if self.tail is None:
            return head, 0.0
        c, alpha = self.tail.coefficient, self.tail.exponent
        sigma = alpha * s
        if sigma <= 1.0:
            raise DivergenceError(
                f"power sum diverges: needs s > {1.0 / alpha:.6g}",
                abscissa=1.0 / alpha)
        tail, err = summation.power_tail_sum(sigma, self.tail.start_index)
        scale = c ** s
        return head + scale * tail, scale * err

    def exp_integral(self, w: float, q: float):
        """(sum of exp(-w * mu_n**-q) over all n, error bound)."""
        parts = []
        for v in self.head:
            if v <= 0.0:
                continue
            e = w * v ** (-q)
            if e <= 745.0:
                parts.append(math.exp(-e))
        head = summation.comp_sum(np.asarray(parts, dtype=float))
        if self.tail is None:
            return head, 0.0
        c, alpha = self.tail.coefficient, self.tail.exponent
        tail, err = summation.exp_power_tail_sum(w * c ** (-q), alpha * q,
                                                 self.tail.start_index)
        return head + tail, err

    def _log_head(self):
        cache = getattr(self, "_log_head_cache", None)
        if cache is None:
            head = np.asarray(self.head, dtype=float)
            with np.errstate(divide="ignore"):
                cache = np.log(head)
            object.__setattr__(self, "_log_head_cache", cache)
        return cache

    def _zeros_like_head(self):
        cache = getattr(self, "_zeros_cache", None)
        if cache is None:
            cache = np.zeros(len(self.head))
            object.__setattr__(self, "_zeros_cache", cache)
        return cache


@dataclass(frozen=True)
class DistributionCurve:
    """The map t -> measure of {f > t}: right-continuous, non-increasing.

    Stored as strictly decreasing log-thresholds with the corresponding
    strictly increasing log-levels (cumulative lengths).
    """

    log_thresholds: tuple = ()
    log_levels: tuple = ()

    def __post_init__(self):
        if len(self.log_thresholds) != len(self.log_levels):
            raise InputError("thresholds and levels must have equal length")
        for i in range(1, len(self.log_thresholds)):
            if not self.log_thresholds[i] < self.log_thresholds[i - 1]:
                raise NonMonotoneError("thresholds must be strictly decreasing",
                                       index=i + 1)
            if not self.log_levels[i] > self.log_levels[i - 1]:
                raise NonMonotoneError("levels must be strictly increasing",
                                       index=i + 1)

    def log_level_at_ln(self, ln_t: float) -> float:
        """ln of the measure of {f > t} for t = exp(ln_t) (-inf when 0)."""
        # thresholds are descending; count how many exceed ln_t
        lo, hi = 0, len(self.log_thresholds)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.log_thresholds[mid] > ln_t:
                lo = mid + 1
            else:
                hi = mid
        if lo == 0:
            return NEG_INF
        return self.log_levels[lo - 1]

    def value_at(self, t: float) -> float:
        if t < 0.0:
            raise InputError("level must be nonnegative")
        ln_t = math.log(t) if t > 0.0 else NEG_INF
        return exp_guarded(self.log_level_at_ln(ln_t))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def _value_groups(f: StepFunction):
    """Positive-value groups of f sorted by descending value.

    Returns (group_log_values, group_log_cum_lengths) where the cumulative
    lengths are folded in a canonical order (stable sort by value, ties in
    original order), shared by rearrangement and distribution so the two
    agree exactly.
    """
    lengths = f.piece_log_lengths()
    idx = [i for i in range(f.n_pieces) if f.log_values[i] != NEG_INF]
    idx.sort(key=lambda i: (-f.log_values[i], i))
    glv, gcum = [], []
    cum = NEG_INF
    for j, i in enumerate(idx):
        cum = log_add_exp(cum, lengths[i])
        last_of_group = (j + 1 == len(idx)
                         or f.log_values[idx[j + 1]] != f.log_values[i])
        if last_of_group:
            # groups of sub-resolution length cannot advance the abscissa
            if gcum and not cum > gcum[-1]:
                continue
            if cum == NEG_INF:
                continue
            glv.append(f.log_values[i])
            gcum.append(cum)
    return glv, gcum


def decreasing_rearrangement(f: StepFunction) -> StepFunction:
    """Non-increasing, right-continuous rearrangement of f.

    The input must vanish past its last breakpoint.  Ties keep their
    original order; adjacent equal values are merged, so the result is
    canonical.
    """
    if not isinstance(f, StepFunction):
        raise UnsupportedInputError("rearrangement is defined for step functions")
    if f.beyond_last != 0.0:
        raise InputError("cannot rearrange a function with mass at infinity")
    if f.rearranged:
        return f
    nonincreasing = all(f.log_values[i] <= f.log_values[i - 1]
                        for i in range(1, f.n_pieces))
    if nonincreasing:
        # exact path: drop zero-valued trailing pieces, merge equal runs
        lbp, lv = [], []
        for i in range(f.n_pieces):
            if f.log_values[i] == NEG_INF:
                break
            if lv and f.log_values[i] == lv[-1]:
                lbp[-1] = f.log_breakpoints[i]
            else:
                lbp.append(f.log_breakpoints[i])
                lv.append(f.log_values[i])
        return StepFunction(tuple(lbp), tuple(lv), 0.0, True, f.name)
    glv, gcum = _value_groups(f)
    return StepFunction(tuple(gcum), tuple(glv), 0.0, True, f.name)


def distribution_function(f: StepFunction) -> DistributionCurve:
    """Distribution curve t -> measure of {f > t}."""
    fr = decreasing_rearrangement(f)
    return DistributionCurve(tuple(fr.log_values), tuple(fr.log_breakpoints))


def mu_from_distribution(lam: DistributionCurve) -> StepFunction:
    """Generalized inverse mu_s = inf{t >= 0 : lambda_t <= s}."""
    return StepFunction(tuple(lam.log_levels), tuple(lam.log_thresholds),
                        0.0, True)


def partial_integral(x, t: float | None = None, *, ln_t: float | None = None) -> float:
    """Integral of the rearranged data over (0, t]; t may be +inf.

    Pass ``ln_t`` for abscissae beyond double range.  Step functions are
    rearranged internally when unflagged.
    """
    if (t is None) == (ln_t is None):
        raise InputError("pass exactly one of t and ln_t")
    if t is not None:
        if t == math.inf:
            if isinstance(x, StepFunction):
                if x.beyond_last > 0.0:
                    return math.inf
                return decreasing_rearrangement(x).total_integral() \
                    if not x.rearranged else x.total_integral()
            return _total_of(x)
        if t < 0.0:
            raise InputError("t must be nonnegative")
        if t == 0.0:
            return 0.0
        ln_t = math.log(t)
    if isinstance(x, StepFunction):
        xr = x if x.rearranged else decreasing_rearrangement(x)
        return xr.partial_integral_ln(ln_t)
    if hasattr(x, "partial_integral_ln"):
        return x.partial_integral_ln(ln_t)
    raise UnsupportedInputError(f"no partial integral for {type(x).__name__}")


def _total_of(x) -> float:
    if isinstance(x, Spectrum):
        if x.tail is not None:
            if x.tail.exponent <= 1.0:
                return math.inf
            v, _ = summation.power_tail_sum(x.tail.exponent, x.tail.start_index)
            return float(np.sum(np.asarray(x.head))) + x.tail.coefficient * v
        return float(np.sum(np.asarray(x.head)))
    if hasattr(x, "total_integral"):
        return x.total_integral()
    return x.partial_integral_ln(math.inf)


def _head_count_above(head, a: float) -> int:
    """How many leading head values exceed a (head is non-increasing)."""
    lo, hi = 0, len(head)
    while lo < hi:
        mid = (lo + hi) // 2
        if head[mid] > a:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _tail_count_above_ln(tail: PowerTail, ln_a: float) -> float:
    """Largest n with tail value above exp(ln_a), as a float (may be huge);
    0.0 when even the first tail value is at or below the level."""
    c, alpha = tail.coefficient, tail.exponent
    ln_first = math.log(c) - alpha * math.log(tail.start_index)
    if ln_first <= ln_a:
        return 0.0
    ln_bound = (math.log(c) - ln_a) / alpha
    if ln_bound > 700.0:
        return math.exp(700.0)  # saturates; callers treat as "huge"
    bound = math.exp(ln_bound)
    n_hi = math.floor(bound)
    if bound < 2.0**53:
        # refine the integer boundary exactly
        while n_hi >= tail.start_index and \
                math.log(c) - alpha * math.log(n_hi) <= ln_a:
            n_hi -= 1
        while math.log(c) - alpha * math.log(n_hi + 1) > ln_a:
            n_hi += 1
    return float(max(n_hi, tail.start_index - 1))


def distribution_at_ln(x, ln_a: float) -> float:
    """Measure of {x > a} for a = exp(ln_a) > 0."""
    if isinstance(x, StepFunction):
        xr = x if x.rearranged else decreasing_rearrangement(x)
        lam = NEG_INF
        for i in range(xr.n_pieces):
            if xr.log_values[i] > ln_a:
                lam = xr.log_breakpoints[i]
            else:
                break
        return exp_guarded(lam)
    if isinstance(x, Spectrum):
        a = exp_guarded(ln_a)
        count = _head_count_above(x.head, a)
        if x.tail is not None and count == len(x.head):
            n_hi = _tail_count_above_ln(x.tail, ln_a)
            return max(float(count), n_hi)
        return float(count)
    if hasattr(x, "distribution_at_ln"):
        return x.distribution_at_ln(ln_a)
    raise UnsupportedInputError(f"no distribution for {type(x).__name__}")


def distribution_at(x, a: float) -> float:
    if a <= 0.0:
        raise InputError("level must be positive")
    return distribution_at_ln(x, math.log(a))


def truncated_trace_ln(x, ln_a: float) -> float:
    """Sum/integral of the singular values strictly above exp(ln_a)."""
    if isinstance(x, StepFunction):
        xr = x if x.rearranged else decreasing_rearrangement(x)
        _, _, prefix = xr._piece_arrays()
        j = 0
        while j < xr.n_pieces and xr.log_values[j] > ln_a:
            j += 1
        return float(prefix[j])
    if isinstance(x, Spectrum):
        a = exp_guarded(ln_a)
        prefix = x._head_prefix()
        count = _head_count_above(x.head, a)
        s = float(prefix[count])
        if x.tail is not None and count == len(x.head):
            c, alpha = x.tail.coefficient, x.tail.exponent
            n_hi = _tail_count_above_ln(x.tail, ln_a)
            start = x.tail.start_index
            if n_hi >= start:
                ln_hi = math.log(n_hi) if n_hi < 2.0**53 else \
                    (math.log(c) - ln_a) / alpha
                s += c * (summation.power_step_integral_ln(alpha, ln_hi)
                          - summation.power_step_integral(alpha, float(start - 1)))
        return s
    if hasattr(x, "truncated_trace_ln"):
        return x.truncated_trace_ln(ln_a)
    lam = distribution_at_ln(x, ln_a)
    if lam == 0.0:
        return 0.0
    return partial_integral(x, ln_t=math.log(lam))


def truncated_trace(x, a: float) -> float:
    """Sum/integral of the singular values strictly above the level a."""
    if a <= 0.0:
        raise InputError("level must be positive")
    return truncated_trace_ln(x, math.log(a))


@dataclass(frozen=True)
class SubmajorizationResult:
    holds: bool
    worst_ln_t: float | None
    worst_gap: float

    def __bool__(self):
        return self.holds


def submajorization_leq(x: StepFunction, y: StepFunction) -> SubmajorizationResult:
    """Whether the partial integrals of x* stay below those of y*.

    Both partial integrals are piecewise linear in t, so the comparison at
    the merged breakpoints (plus slopes near 0, covered by the first merged
    kink) is exact.
    """
    xr = decreasing_rearrangement(x)
    yr = decreasing_rearrangement(y)
    kinks = sorted(set(xr.log_breakpoints) | set(yr.log_breakpoints))
    worst_gap = -math.inf
    worst = None
    if not kinks:
        return SubmajorizationResult(True, None, 0.0)
    for lt in kinks:
        gap = xr.partial_integral_ln(lt) - yr.partial_integral_ln(lt)
        if gap > worst_gap:
            worst_gap = gap
            worst = lt
    return SubmajorizationResult(worst_gap <= 0.0, worst, worst_gap)


def pointwise_product(f: StepFunction, g: StepFunction) -> StepFunction:
    """Pointwise product on the merged breakpoint grid."""
    if not (isinstance(f, StepFunction) and isinstance(g, StepFunction)):
        raise UnsupportedInputError("product is defined for step functions")
    merged = sorted(set(f.log_breakpoints) | set(g.log_breakpoints))
    lv = []
    for b in merged:
        fi = bisect_left(f.log_breakpoints, b)
        fv = f.log_values[fi] if fi < f.n_pieces else _log_or_neg_inf(f.beyond_last)
        gi = bisect_left(g.log_breakpoints, b)
        gv = g.log_values[gi] if gi < g.n_pieces else _log_or_neg_inf(g.beyond_last)
        lv.append(fv + gv if NEG_INF not in (fv, gv) else NEG_INF)
    beyond = f.beyond_last * g.beyond_last
    flag = (f.rearranged and g.rearranged)
    return StepFunction(tuple(merged), tuple(lv), beyond, flag)
