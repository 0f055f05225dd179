"""Concave normalizing functions, Marcinkiewicz norms, weak quasinorms,
fundamental functions, residue-type seminorms and growth diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, InputError, UnsupportedInputError
from .rearrange import (NEG_INF, Spectrum, StepFunction,
                        decreasing_rearrangement, exp_guarded, partial_integral)

_LN2 = math.log(2.0)


def _softplus(u: float) -> float:
    """ln(1 + e^u), stable for any u."""
    if u > 0.0:
        return u + math.log1p(math.exp(-u))
    return math.log1p(math.exp(u))


@dataclass(frozen=True)
class PsiFunction:
    """A normalizing weight psi: nondecreasing, vanishing at 0, unbounded.

    Catalog kinds carry exact closed forms; ``custom`` interpolates a table
    log-linearly and extrapolates the end slopes.
    """

    kind: str
    p: float | None = None
    table_ln_t: tuple = ()
    table_ln_psi: tuple = ()
    name: str = ""

    def __post_init__(self):
        if self.kind not in ("psi1", "psi_p", "psi0", "log_sq", "custom"):
            raise InputError(f"unknown psi kind {self.kind!r}")
        if self.kind == "psi_p":
            if self.p is None or not self.p > 1.0:
                raise InputError("psi_p needs p > 1")
        if self.kind == "custom":
            if len(self.table_ln_t) < 2 or len(self.table_ln_t) != len(self.table_ln_psi):
                raise InputError("custom psi needs a table of at least 2 nodes")
            for i in range(1, len(self.table_ln_t)):
                if not self.table_ln_t[i] > self.table_ln_t[i - 1]:
                    raise InputError("custom psi abscissae must increase")
                if self.table_ln_psi[i] < self.table_ln_psi[i - 1]:
                    raise InputError("custom psi must be nondecreasing")
        if not self.name:
            object.__setattr__(self, "name", _default_psi_name(self))

    # -- evaluation --------------------------------------------------------

    def log_value_ln(self, u: float) -> float:
        """ln psi(e^u)."""
        k = self.kind
        if k == "psi1":
            if u <= 0.0:
                return u + math.log(_LN2)
            return math.log(u + math.log1p(math.exp(-u)))
        if k == "psi_p":
            return u if u <= 0.0 else u * (1.0 - 1.0 / self.p)
        if k == "psi0":
            return math.log(_softplus(u))
        if k == "log_sq":
            return 2.0 * math.log(_softplus(u))
        lt, lp = self.table_ln_t, self.table_ln_psi
        if u <= lt[0]:
            # continue proportionally to t below the table
            return lp[0] + (u - lt[0])
        if u >= lt[-1]:
            slope = ((lp[-1] - lp[-2]) / (lt[-1] - lt[-2]))
            return lp[-1] + slope * (u - lt[-1])
        j = int(np.searchsorted(np.asarray(lt), u, side="right")) - 1
        w = (u - lt[j]) / (lt[j + 1] - lt[j])
        return lp[j] + w * (lp[j + 1] - lp[j])

    def value_ln(self, u: float) -> float:
        """psi(e^u) as a float (inf on overflow)."""
        if self.kind == "psi1":
            return math.exp(u) * _LN2 if u <= 0.0 else u + math.log1p(math.exp(-u))
        if self.kind == "psi0":
            return _softplus(u)
        if self.kind == "log_sq":
            return _softplus(u) ** 2
        return exp_guarded(self.log_value_ln(u))

    def value(self, t: float) -> float:
        if t < 0.0:
            raise InputError("psi is defined on [0, inf)")
        if t == 0.0:
            return 0.0
        return self.value_ln(math.log(t))

    __call__ = value

    @property
    def slope_at_zero(self) -> float:
        """lim psi(t)/t as t -> 0 (0 means t/psi diverges there)."""
        if self.kind == "psi1":
            return _LN2
        if self.kind in ("psi_p", "psi0"):
            return 1.0
        if self.kind == "log_sq":
            return 0.0
        u = self.table_ln_t[0] - 30.0
        return math.exp(self.log_value_ln(u) - u)

    @property
    def t_over_psi_monotone(self) -> bool:
        """Whether t/psi(t) is nondecreasing (true for the catalog kinds
        with linear behaviour at 0)."""
        return self.kind in ("psi1", "psi_p", "psi0")

    def sup_ln_t_over_psi(self, ln_a: float, ln_b: float):
        """(ln sup, ln argmax) of t/psi(t) over (a, b] (ln_a may be -inf)."""
        if self.t_over_psi_monotone:
            return ln_b - self.log_value_ln(ln_b), ln_b
        kappa = self.slope_at_zero
        if ln_a == NEG_INF:
            if kappa == 0.0:
                return math.inf, NEG_INF
            return -math.log(kappa), NEG_INF
        cand = [(ln_b - self.log_value_ln(ln_b), ln_b),
                (ln_a - self.log_value_ln(ln_a), ln_a)]
        # scan for an interior maximum
        for u in np.linspace(ln_a, ln_b, 33)[1:-1]:
            cand.append((u - self.log_value_ln(u), float(u)))
        return max(cand, key=lambda c: c[0])


def _default_psi_name(psi: PsiFunction) -> str:
    if psi.kind == "psi_p":
        return f"psi_p(p={psi.p:g})"
    return {"psi1": "psi1", "psi0": "log(1+t)",
            "log_sq": "log^2(1+t)", "custom": "custom"}.get(psi.kind, psi.kind)


def make_psi(kind: str, p: float | None = None, table=None,
             name: str = "") -> PsiFunction:
    """Catalog constructor; ``table`` is a (ln_t, ln_psi) pair for custom."""
    if kind == "psi_p" and (p is None or p <= 1.0):
        raise InputError("psi_p needs p > 1")
    if kind == "custom":
        if table is None:
            raise InputError("custom psi needs a table")
        lt, lp = table
        return PsiFunction("custom", None, tuple(map(float, lt)),
                           tuple(map(float, lp)), name)
    return PsiFunction(kind, p, (), (), name)


PSI_1 = make_psi("psi1")
PSI_0 = make_psi("psi0")
LOG_SQ = make_psi("log_sq")


# ---------------------------------------------------------------------------
# weighted means and norms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupResult:
    """A supremum with its witness abscissa (ln t; None if at infinity)."""

    value: float
    witness_ln_t: float | None = None
    note: str = ""

    def __float__(self):
        return float(self.value)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)


def weighted_mean(x, psi: PsiFunction, t: float | None = None, *,
                  ln_t: float | None = None) -> float:
    """Average of the rearrangement over [0, t], normalized by psi(t)."""
    if (t is None) == (ln_t is None):
        raise InputError("pass exactly one of t and ln_t")
    if ln_t is None:
        if not t > 0.0:
            raise InputError("t must be positive")
        ln_t = math.log(t)
    num = partial_integral(x, ln_t=ln_t)
    den = psi.value_ln(ln_t)
    if num == 0.0:
        return 0.0
    return num / den


def _candidate_stream(x, psi: PsiFunction):
    """Yield (ratio, ln_t) candidates for sup_t weighted_mean(x, psi, t)."""
    if isinstance(x, StepFunction):
        xr = x if x.rearranged else decreasing_rearrangement(x)
        if xr.n_pieces == 0:
            return
        kappa = psi.slope_at_zero
        v1 = exp_guarded(xr.log_values[0])
        if v1 > 0.0:
            yield (math.inf if kappa == 0.0 else v1 / kappa), NEG_INF
        _, _, prefix = xr._piece_arrays()
        for i, lb in enumerate(xr.log_breakpoints):
            yield float(prefix[i + 1]) / psi.value_ln(lb), lb
        if not psi.t_over_psi_monotone:
            # interior maxima possible: scan each piece
            prev = xr.log_breakpoints[0] - 20.0
            for i, lb in enumerate(xr.log_breakpoints):
                for u in np.linspace(prev, lb, 17)[1:-1]:
                    yield (xr.partial_integral_ln(float(u))
                           / psi.value_ln(float(u))), float(u)
                prev = lb
    elif isinstance(x, Spectrum):
        kappa = psi.slope_at_zero
        if x.head and x.head[0] > 0.0:
            yield (math.inf if kappa == 0.0 else x.head[0] / kappa), NEG_INF
        prefix = x._head_prefix()
        for n in range(1, len(x.head) + 1):
            yield float(prefix[n]) / psi.value_ln(math.log(n)), math.log(n)
        if x.tail is not None:
            n0 = max(1, x.n_head)
            u0 = math.log(n0)
            for u in np.linspace(u0, 690.0, 200)[1:]:
                t = math.exp(float(u))
                yield x.partial_sum(t) / psi.value_ln(float(u)), float(u)
            lim = _tail_mean_limit(x.tail, psi)
            yield lim, None
    elif hasattr(x, "mean_candidates"):
        yield from x.mean_candidates(psi)
    else:
        raise UnsupportedInputError(
            f"no norm candidates for {type(x).__name__}")


def _tail_mean_limit(tail, psi: PsiFunction) -> float:
    """Limit of the psi-weighted mean along a power tail."""
    alpha, c = tail.exponent, tail.coefficient
    if psi.kind in ("psi1", "psi0"):
        if alpha > 1.0:
            return 0.0
        if alpha == 1.0:
            return c
        return math.inf
    if psi.kind == "psi_p":
        growth = 1.0 - 1.0 / psi.p
        if alpha > 1.0:
            return 0.0
        mass_growth = 1.0 - alpha
        if mass_growth > growth:
            return math.inf
        if mass_growth == growth:
            return c / (1.0 - alpha)
        return 0.0
    if psi.kind == "log_sq":
        return math.inf if alpha < 1.0 else 0.0
    # custom: compare asymptotic slopes numerically
    u = 500.0
    slope = (psi.log_value_ln(u + 1.0) - psi.log_value_ln(u))
    mass_growth = max(0.0, 1.0 - alpha)
    if mass_growth > slope + 1e-9:
        return math.inf
    return 0.0


def marcinkiewicz_norm(x, psi: PsiFunction) -> SupResult:
    """Supremum over t of the psi-weighted mean of the rearrangement."""
    best, witness = 0.0, None
    for ratio, ln_t in _candidate_stream(x, psi):
        if ratio > best:
            best, witness = ratio, ln_t
            if best == math.inf:
                break
    return SupResult(best, witness)


def marcinkiewicz_norm_from_one(x, psi: PsiFunction = PSI_1) -> SupResult:
    """The norm variant restricted to t >= 1.

    The canonical norm takes the supremum over all t > 0; this variant
    drops the (0, 1] normalization region.  The two can genuinely differ
    (a bounded profile pushes the unrestricted supremum toward t -> 0), so
    both are reported rather than silently identified.
    """
    best, witness = 0.0, None
    for ratio, ln_t in _candidate_stream(x, psi):
        if ln_t is not None and ln_t < 0.0:   # covers the t -> 0 candidate
            continue
        if ratio > best:
            best, witness = ratio, ln_t
            if best == math.inf:
                break
    at_one = weighted_mean(x, psi, ln_t=0.0)
    if at_one > best:
        best, witness = at_one, 0.0
    return SupResult(best, witness, note="supremum restricted to t >= 1")


def norm_convention_ratio(x, psi: PsiFunction = PSI_1):
    """(canonical norm, restricted norm, their ratio) for the same weight."""
    full = marcinkiewicz_norm(x, psi)
    restricted = marcinkiewicz_norm_from_one(x, psi)
    ratio = (full.value / restricted.value
             if restricted.value not in (0.0, math.inf) else math.nan)
    return full, restricted, ratio


def quasinorm(x, psi: PsiFunction, max_witnesses: int = 64) -> SupResult:
    """sup_t t*x(t)/psi(t) over the rearrangement, with witness."""
    witnesses = []
    if isinstance(x, StepFunction):
        xr = x if x.rearranged else decreasing_rearrangement(x)
        prev = NEG_INF
        for i in range(xr.n_pieces):
            s, arg = psi.sup_ln_t_over_psi(prev, xr.log_breakpoints[i])
            lv = xr.log_values[i]
            if lv != NEG_INF:
                witnesses.append((exp_guarded(lv + s) if s != math.inf
                                  else math.inf, arg))
            prev = xr.log_breakpoints[i]
    elif isinstance(x, Spectrum):
        prev = NEG_INF
        for n in range(1, len(x.head) + 1):
            s, arg = psi.sup_ln_t_over_psi(prev, math.log(n))
            if x.head[n - 1] > 0.0:
                witnesses.append((x.head[n - 1] * exp_guarded(s)
                                  if s != math.inf else math.inf, arg))
            prev = math.log(n)
        if x.tail is not None:
            witnesses.append((_tail_quasinorm_limit(x.tail, psi), None))
            n0 = x.tail.start_index
            for u in np.linspace(math.log(n0), 690.0, 100)[1:]:
                s, arg = psi.sup_ln_t_over_psi(float(u) - 1e-9, float(u))
                mu = x.tail.coefficient * math.exp(-x.tail.exponent * float(u))
                witnesses.append((mu * exp_guarded(s), arg))
    elif hasattr(x, "quasinorm_candidates"):
        witnesses.extend(x.quasinorm_candidates(psi))
    else:
        raise UnsupportedInputError(f"no quasinorm for {type(x).__name__}")
    if not witnesses:
        return SupResult(0.0, None)
    value, arg = max(witnesses, key=lambda w: w[0])
    return SupResult(value, arg)


def _tail_quasinorm_limit(tail, psi: PsiFunction) -> float:
    alpha, c = tail.exponent, tail.coefficient
    if psi.kind in ("psi1", "psi0"):
        if alpha < 1.0:
            return math.inf
        return 0.0
    if psi.kind == "psi_p":
        target = 1.0 / psi.p
        if alpha < target:
            return math.inf
        if alpha == target:
            return c
        return 0.0
    if psi.kind == "log_sq":
        return math.inf if alpha <= 1.0 else 0.0
    u = 500.0
    slope = psi.log_value_ln(u + 1.0) - psi.log_value_ln(u)
    return math.inf if 1.0 - alpha > slope + 1e-9 else 0.0


def fundamental_function(psi: PsiFunction, t: float, p: float = 1.0) -> float:
    """Norm of the indicator of [0, t): sup_s min(s, t)/psi(s), optionally
    raised to 1/p for the p-convexified scale."""
    if not t > 0.0:
        raise InputError("t must be positive")
    ln_t = math.log(t)
    s, _ = psi.sup_ln_t_over_psi(NEG_INF, ln_t)
    left = exp_guarded(s) if s != math.inf else math.inf
    right = t / psi.value_ln(ln_t)
    base = max(left, right)
    return base if p == 1.0 else base ** (1.0 / p)


# ---------------------------------------------------------------------------
# residue-type seminorms
# ---------------------------------------------------------------------------

S_GRID_DEFAULT = tuple(2.0 ** -k for k in range(3, 21))


@dataclass(frozen=True)
class SeminormReport:
    value: float
    limsup_band: tuple
    s_grid: tuple
    samples: tuple
    error_bounds: tuple
    notes: str = ""

    @property
    def lo(self):
        return self.limsup_band[0]

    @property
    def hi(self):
        return self.limsup_band[1]


def power_integral(x, s: float):
    """(integral of the rearrangement to the power s, error bound)."""
    if isinstance(x, StepFunction):
        xr = x if x.rearranged else decreasing_rearrangement(x)
        return xr.power_integral(s)
    if hasattr(x, "power_integral"):
        return x.power_integral(s)
    raise UnsupportedInputError(f"no power integral for {type(x).__name__}")


def scaled_power_integral(x, s: float):
    """s * integral(x^(1+s)), the raw residue-seminorm sample at s."""
    v, err = power_integral(x, 1.0 + s)
    return s * v, s * err


def residue_seminorm(x, s_grid=None) -> SeminormReport:
    """limsup as s -> 0 of s * integral(x*(t)^(1+s) dt).

    Samples a geometric s-grid, extrapolates to 0 with an affine fit on the
    smallest-s half, and reports a band spanning the grid extremes (widened
    by the summation error bounds and to contain the extrapolated value).
    """
    grid = tuple(sorted(s_grid if s_grid is not None else S_GRID_DEFAULT,
                        reverse=True))
    if len(grid) < 2:
        raise InputError("need at least two grid points")
    scale = _natural_scale(x)
    xn = x if scale == 1.0 else _scaled(x, 1.0 / scale)
    samples, errs = [], []
    for s in grid:
        v, e = scaled_power_integral(xn, s)
        if not math.isfinite(v):
            raise DivergenceError(f"power integral diverges at s={s:g}")
        samples.append(v)
        errs.append(e)
    k = max(2, len(grid) // 2)
    a, b, resid = _affine_fit(np.asarray(grid[-k:]), np.asarray(samples[-k:]))
    lo = min(min(samples), a) - max(errs)
    hi = max(max(samples), a) + max(errs)
    value = scale * a
    return SeminormReport(value, (scale * lo, scale * hi), grid,
                          tuple(scale * v for v in samples),
                          tuple(scale * e for e in errs),
                          notes=f"affine fit on {k} points, residual {scale * resid:.3g}")


def _natural_scale(x) -> float:
    """Leading value, used to normalize before extrapolating (keeps the
    seminorms positively homogeneous to rounding)."""
    try:
        if isinstance(x, StepFunction) and x.n_pieces:
            v = exp_guarded(max(x.log_values))
        elif isinstance(x, Spectrum) and x.head:
            v = x.head[0]
        elif hasattr(x, "natural_scale"):
            v = x.natural_scale()
        else:
            return 1.0
    except Exception:
        return 1.0
    return v if v > 0.0 and math.isfinite(v) else 1.0


def _scaled(x, c: float):
    return x.scaled(c)


def _affine_fit(xs, ys):
    """Least-squares a + b*x; returns (a, b, max |residual|)."""
    A = np.vstack([np.ones_like(xs), xs]).T
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    resid = ys - A @ coef
    return float(coef[0]), float(coef[1]), float(np.max(np.abs(resid)))


@dataclass(frozen=True)
class PowerSeminormReport:
    """The order-q residue seminorm in both normalizations.

    No universal constant ties the two; the empirical ratio (q^(1/q)) is
    exposed instead of asserted.
    """

    value: float          # (q * base)^(1/q)
    plus_variant: float   # base^(1/q)
    q: float
    base: SeminormReport

    @property
    def variant_ratio(self) -> float:
        if self.plus_variant in (0.0, math.inf):
            return math.nan
        return self.value / self.plus_variant


def power_residue_seminorm(x, q: float, s_grid=None) -> PowerSeminormReport:
    """Residue seminorm of the pointwise q-th power, reported both as the
    canonical (q * .)^(1/q) scaling and the convenient ^(1/q) variant."""
    if q < 1.0:
        raise InputError("q must be >= 1")
    xq = x.powered(q) if q != 1.0 else x
    base = residue_seminorm(xq, s_grid=s_grid)
    return PowerSeminormReport((q * base.value) ** (1.0 / q),
                               base.value ** (1.0 / q), q, base)


# ---------------------------------------------------------------------------
# psi diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PsiDiagnostics:
    doubling_limit: float
    doubling_band: tuple
    doubling_is_one: bool
    substitution_sups: dict            # beta -> (A(beta), witness ln t)
    power_bounds: dict                 # alpha -> (C(alpha), witness ln t)
    nondecreasing: bool
    concave_on_grid: bool
    unbounded: bool


def psi_diagnostics(psi: PsiFunction, betas=(1.25, 1.5, 2.0),
                    alphas=(0.25, 0.5, 0.75), tol: float = 1e-3) -> PsiDiagnostics:
    """Growth diagnostics: doubling ratio limit, the power-substitution
    suprema A(beta) = sup psi(t^beta)/psi(t), and C(alpha) = sup psi(t)/t^alpha."""
    for b in betas:
        if not b > 1.0:
            raise InputError("substitution exponents must exceed 1")
    for a in alphas:
        if not 0.0 < a < 1.0:
            raise InputError("power-bound exponents must lie in (0, 1)")
    us = np.linspace(1.0, 600.0, 240)
    ratios = np.array([math.exp(psi.log_value_ln(u + _LN2)
                                - psi.log_value_ln(u)) for u in us])
    tail = ratios[len(ratios) // 2:]
    a_fit, _, resid = _affine_fit(1.0 / us[len(us) // 2:], tail)
    band = (float(tail.min()), float(tail.max()))
    doubling = a_fit
    is_one = abs(doubling - 1.0) <= max(tol, 10.0 * resid)

    subs = {}
    for b in betas:
        best, wit = 0.0, None
        for u in np.concatenate((np.linspace(-60.0, -1e-3, 60),
                                 np.geomspace(1e-3, 690.0 / b, 200))):
            r = math.exp(psi.log_value_ln(b * u) - psi.log_value_ln(u))
            if r > best:
                best, wit = r, float(u)
        subs[b] = (best, wit)

    powers = {}
    for a in alphas:
        best, wit = 0.0, None
        for u in np.linspace(-600.0, 600.0, 1200):
            r = math.exp(psi.log_value_ln(u) - a * u)
            if r > best:
                best, wit = r, float(u)
        powers[a] = (best, wit)

    grid_u = np.linspace(-13.8, 13.8, 121)
    ts = np.exp(grid_u)
    vals = np.array([psi.value(t) for t in ts])
    nondec = bool(np.all(np.diff(vals) >= -1e-12 * vals[1:]))
    concave = True
    for i in range(1, len(ts) - 1):
        chord = vals[i - 1] + (vals[i + 1] - vals[i - 1]) * \
            (ts[i] - ts[i - 1]) / (ts[i + 1] - ts[i - 1])
        if vals[i] < chord * (1.0 - 1e-9):
            concave = False
            break
    unbounded = psi.value_ln(600.0) > psi.value_ln(60.0) * 1.0001

    return PsiDiagnostics(doubling, band, is_one, subs, powers,
                          nondec, concave, unbounded)
