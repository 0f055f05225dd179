"""Heat-trace profiles, the exponential-average transform, the gamma-factor
identity, the small ideal, and the heat-to-residue bridge."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import summation
from .corpus import RuleStepFunction
from .errors import DivergenceError, InputError, UnsupportedInputError
from .means import (LOG, LimitConfig, LimitEstimate, SampledFunction,
                    dixmier_estimate, limit_estimate)
from .rearrange import Spectrum, StepFunction, exp_guarded
from .spaces import PSI_1, SupResult
from .zeta import ZetaLimitReport, residue_estimate, zeta_limit


def gamma(z: float) -> float:
    """Gamma function on the positive axis (relative error < 1e-12)."""
    if not z > 0.0:
        raise InputError("gamma is restricted to z > 0")
    return math.gamma(z)


def heat_trace(x, q: float, t: float):
    """(trace of the heat weight exp(-t * mu**-q), error bound).

    Zero singular values carry weight 0.  Terms below the double-precision
    floor are dropped; the drop is covered by the error bound.
    """
    if not t > 0.0:
        raise InputError("t must be positive")
    if not q > 0.0:
        raise InputError("q must be positive")
    if hasattr(x, "exp_integral"):
        return x.exp_integral(t, q)
    raise UnsupportedInputError(f"no heat trace for {type(x).__name__}")


@dataclass(frozen=True)
class HeatProfile:
    """F(lambda) = trace(exp(-T**-q * lambda**(-q/p))) / lambda."""

    p: float
    q: float
    lambda_grid: tuple
    values: tuple
    error_bounds: tuple

    def sampled(self) -> SampledFunction:
        return SampledFunction(LOG, np.log(np.asarray(self.lambda_grid)),
                               np.asarray(self.values))


LAMBDA_GRID_DEFAULT = tuple(float(v) for v in
                            np.geomspace(2.0, 2.0 ** 24, 47))

HEAT_LIMIT_CONFIG = LimitConfig(model="inv_exp_abscissa", tolerance=2e-3)


def heat_profile(x, p: float, q: float, lambda_grid=None) -> HeatProfile:
    if not p >= 1.0:
        raise InputError("p must be >= 1")
    if not q > 0.0:
        raise InputError("q must be positive")
    grid = tuple(sorted(float(v) for v in (lambda_grid or LAMBDA_GRID_DEFAULT)))
    vals, errs = [], []
    for lam in grid:
        t = math.exp(-(q / p) * math.log(lam))
        v, e = heat_trace(x, q, t)
        vals.append(v / lam)
        errs.append(e / lam)
    return HeatProfile(p, q, grid, tuple(vals), tuple(errs))


@dataclass(frozen=True)
class HeatLimitReport:
    """The heat-profile limit against its two companion quantities."""

    p: float
    q: float
    estimate: LimitEstimate
    profile: HeatProfile
    gamma_factor: float                  # Gamma(p/q)
    zeta: ZetaLimitReport
    zeta_side_band: tuple                # (1/q) Gamma(p/q) * zeta band
    dixmier: LimitEstimate
    dixmier_side_band: tuple             # (p/q) Gamma(p/q) * dixmier band
    max_gap: float
    band_only: bool
    passed: bool | None

    @property
    def value(self):
        return self.estimate.value


def heat_profile_limit(x, p: float, q: float,
                       config: LimitConfig | None = None,
                       lambda_grid=None, r_grid=None, *,
                       horizon_ln: float | None = None,
                       tolerance: float = 4e-3) -> HeatLimitReport:
    """Limit of the heat profile, cross-checked against the zeta limit
    scaled by Gamma(p/q)/q and the averaged trace scaled by (p/q)Gamma(p/q).

    Passes when all three bands overlap within the tolerance; degrades to a
    band-only report when any side fails to converge.
    """
    prof = heat_profile(x, p, q, lambda_grid)
    est = limit_estimate(prof.sampled(), config or HEAT_LIMIT_CONFIG)
    g = gamma(p / q)
    zl = zeta_limit(x, p, r_grid=r_grid)
    zb = ((g / q) * zl.estimate.liminf, (g / q) * zl.estimate.limsup)
    xp = x.powered(p) if p != 1.0 else x
    dix = dixmier_estimate(xp, PSI_1, horizon_ln=horizon_ln)
    db = ((p / q) * g * dix.liminf, (p / q) * g * dix.limsup)
    gaps = [_interval_gap(est.band, zb), _interval_gap(est.band, db),
            _interval_gap(zb, db)]
    band_only = not (est.converged and zl.converged and dix.converged)
    passed = None if band_only else max(gaps) <= tolerance
    return HeatLimitReport(p, q, est, prof, g, zl, zb, dix, db,
                           max(gaps), band_only, passed)


def _interval_gap(b1, b2) -> float:
    return max(0.0, b1[0] - b2[1], b2[0] - b1[1])


# ---------------------------------------------------------------------------
# the exponential-average (Tauberian) transform
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BetaFunction:
    """Sampled nondecreasing weight on [0, U] with beta(0) = 0."""

    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or len(g) < 2:
            raise InputError("grid and values must be 1-d, equal length >= 2")
        if g[0] != 0.0 or v[0] != 0.0:
            raise InputError("the weight must start at (0, 0)")
        if not np.all(np.diff(g) > 0.0):
            raise InputError("grid must be strictly increasing")
        if np.any(np.diff(v) < 0.0):
            raise InputError("the weight must be nondecreasing")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    @property
    def domain_end(self) -> float:
        return float(self.grid[-1])


_KARAMATA_COVERAGE = math.log(1e12)


def karamata_transform(beta: BetaFunction, r: float) -> float:
    """h(r)/r where h(r) integrates exp(-t/r) against the weight increments.

    The sampled domain must extend past the point where the exponential
    factor drops below 1e-12.
    """
    if not r > 0.0:
        raise InputError("r must be positive")
    if beta.domain_end < _KARAMATA_COVERAGE * r:
        raise InputError(
            f"weight sampled only to {beta.domain_end:g}; needs "
            f">= {_KARAMATA_COVERAGE * r:.6g} for r = {r:g}")
    mids = 0.5 * (beta.grid[:-1] + beta.grid[1:])
    h = summation.comp_sum(np.exp(-mids / r) * np.diff(beta.values))
    return h / r


def shanks_extrapolate(seq) -> float:
    """Iterated Shanks transform; exact on a + b*rho^k sequences."""
    cur = [float(v) for v in seq]
    if not cur:
        raise InputError("empty sequence")
    while len(cur) >= 3:
        nxt = []
        for y0, y1, y2 in zip(cur, cur[1:], cur[2:]):
            den = (y2 - y1) - (y1 - y0)
            if abs(den) < 1e-300:
                nxt.append(y2)
            else:
                nxt.append(y2 - (y2 - y1) ** 2 / den)
        cur = nxt
    return cur[-1]


def karamata_limit(beta: BetaFunction, r_grid) -> tuple:
    """(extrapolated limit of h(r)/r, the sampled values)."""
    vals = [karamata_transform(beta, r) for r in r_grid]
    return shanks_extrapolate(vals), tuple(vals)


# ---------------------------------------------------------------------------
# small-time asymptotics and the residue bridge
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HeatFitReport:
    """Power-law fit of the small-time heat trace and its residue bridge."""

    accepted: bool
    coefficient: float                  # C in C * t**(-p/2)
    p_hat: float
    predicted_residue: float            # 2 C / Gamma(p_hat / 2)
    fit_residual: float
    t_grid: tuple
    log_trace: tuple
    residue_check: float | None         # short-window residue estimate
    residue_gap: float | None
    dixmier_check: float | None         # p_hat * averaged trace midpoint
    note: str = ""


def heat_asymptotic_fit(x, k_range=(4, 16), shanks_points: int = 5,
                        r_check=(2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0),
                        *, horizon_ln: float | None = None) -> HeatFitReport:
    """Fit trace(exp(-t T**-2)) ~ C t**(-p/2) on a dyadic small-t grid.

    The exponent comes from extrapolating successive dyadic log-slopes
    (exact for a power law with one subleading power); the coefficient is
    anchored at the smallest t.  The predicted residue 2C/Gamma(p/2) is
    cross-checked against a short-window residue estimate and the averaged
    trace of the fitted power.
    """
    k_lo, k_hi = k_range
    ts = [2.0 ** -k for k in range(k_lo, k_hi + 1)]
    ys = []
    for t in ts:
        v, _ = heat_trace(x, 2.0, t)
        if v <= 0.0:
            return HeatFitReport(False, math.nan, math.nan, math.nan,
                                 math.nan, tuple(ts), (), None, None, None,
                                 note="heat trace vanished on the grid")
        ys.append(math.log(v))
    # successive dyadic slopes dy/d(ln t); a clean power law gives -p/2
    slopes = [(ys[i] - ys[i + 1]) / math.log(2.0)
              for i in range(len(ys) - 1)]
    tail = slopes[-shanks_points:]
    slope = shanks_extrapolate(tail)
    p_hat = -2.0 * slope
    resid = max(abs(s - slope) for s in tail[-2:])
    if not (p_hat > 0.05 and resid < 0.05 * max(1.0, abs(p_hat))):
        return HeatFitReport(False, math.nan, p_hat, math.nan, resid,
                             tuple(ts), tuple(ys), None, None, None,
                             note="no power-law behaviour detected")
    coeff = math.exp(ys[-1] + (p_hat / 2.0) * math.log(ts[-1]))
    predicted = 2.0 * coeff / gamma(p_hat / 2.0)

    res = residue_estimate(x, p_hat, r_grid=r_check,
                           config=LimitConfig(model="inv_exp_abscissa",
                                              tolerance=math.inf,
                                              max_smoothing=0,
                                              min_tail_points=3,
                                              min_tail_span=1.0))
    res_val = res.estimate.value
    res_gap = abs(predicted - res_val) / max(abs(res_val), 1e-300) \
        if res_val is not None else None

    dix_val = None
    try:
        xp = x.powered(p_hat)
        dix = dixmier_estimate(xp, PSI_1, horizon_ln=horizon_ln)
        dix_val = p_hat * dix.midpoint()
    except (DivergenceError, UnsupportedInputError, AttributeError):
        pass
    return HeatFitReport(True, coeff, p_hat, predicted, resid, tuple(ts),
                         tuple(ys), res_val, res_gap, dix_val)


def small_ideal_constant(x) -> SupResult:
    """sup of s * mu_s: finite exactly on the small ideal.

    For step data each piece peaks at its right endpoint; power tails
    contribute their analytic limit (infinite for sub-1/s decay, with the
    diverging witness reported).
    """
    if hasattr(x, "small_ideal_constant"):
        v, w = x.small_ideal_constant()
        return SupResult(v, w)
    if isinstance(x, StepFunction):
        best, wit = 0.0, None
        for lb, lv in zip(x.log_breakpoints, x.log_values):
            c = exp_guarded(lb + lv)
            if c > best:
                best, wit = c, lb
        return SupResult(best, wit)
    if isinstance(x, Spectrum):
        best, wit = 0.0, None
        for n, v in enumerate(x.head, start=1):
            if n * v > best:
                best, wit = n * v, math.log(n)
        if x.tail is not None:
            c, alpha = x.tail.coefficient, x.tail.exponent
            if alpha < 1.0:
                return SupResult(math.inf, None,
                                 note="tail grows like s**(1-alpha)")
            first = c * float(x.tail.start_index) ** (1.0 - alpha)
            lim = c if alpha == 1.0 else 0.0
            for cand in (first, lim):
                if cand > best:
                    best, wit = cand, (math.log(x.tail.start_index)
                                       if cand == first else None)
        return SupResult(best, wit)
    if isinstance(x, RuleStepFunction):
        return _rule_small_ideal(x)
    raise UnsupportedInputError(
        f"no small-ideal constant for {type(x).__name__}")


def _rule_small_ideal(x) -> SupResult:
    x._ensure(max(x.n_hint, 64))
    n = len(x._lbp)
    x._ensure(min(4 * n, 8192))
    cands = [exp_guarded(lb + lv) for lb, lv in zip(x._lbp, x._lv)]
    best = max(cands)
    wit = x._lbp[cands.index(best)]
    far = cands[n:]
    if far and far[-1] > 1.02 * max(cands[:n]):
        tail = far[len(far) // 2:]
        if all(tail[i + 1] >= tail[i] for i in range(len(tail) - 1)):
            return SupResult(math.inf, wit,
                             note="per-piece peaks grow without bound")
    return SupResult(best, wit)
