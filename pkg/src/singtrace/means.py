"""Averaging transforms on sampled functions and the limit-band estimator.

The estimator reports, for a bounded diagnostic curve, an extrapolated
limit when the tail is explained by a decaying model, and otherwise only
the tail band [liminf, limsup]: exactly the constraint any admissible
averaging state places on the value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DivergenceError, DomainMismatchError, HypothesisError,
                     InputError)
from .rearrange import StepFunction, truncated_trace_ln
from .spaces import (PsiFunction, marcinkiewicz_norm, psi_diagnostics,
                     weighted_mean)

REAL = "real"
LOG = "log"


@dataclass(frozen=True)
class SampledFunction:
    """Function samples on a sorted grid.

    ``domain`` records the abscissa meaning: ``real`` for the additive line
    (abscissa u), ``log`` for the multiplicative half-line (abscissa ln t).
    """

    domain: str
    grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.domain not in (REAL, LOG):
            raise InputError(f"unknown domain {self.domain!r}")
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape or len(g) < 2:
            raise InputError("grid and values must be 1-d, equal length >= 2")
        if not np.all(np.diff(g) > 0.0):
            raise InputError("grid must be strictly increasing")
        if not np.all(np.isfinite(g)) or not np.all(np.isfinite(v)):
            raise InputError("grid and values must be finite")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.grid)


def _cumtrapz(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))
    return out


def _interp_subset(f: SampledFunction, abscissae: np.ndarray, domain: str):
    mask = (abscissae >= f.grid[0]) & (abscissae <= f.grid[-1])
    if mask.sum() < 2:
        raise InputError("transform leaves fewer than 2 grid points")
    vals = np.interp(abscissae[mask], f.grid, f.values)
    return SampledFunction(domain, f.grid[mask], vals)


def apply_transform(f: SampledFunction, op: str, a: float | None = None,
                    b: float | None = None) -> SampledFunction:
    """Apply one of the averaging/symmetry operators.

    ``H``: additive Cesaro mean (domain real, grid starting at 0);
    ``M``: multiplicative Cesaro mean (domain log, grid starting at ln 1);
    ``D``: dilation by a; ``T``: shift by b (real); ``P``: power
    substitution by a (log); ``L``/``L_inv``: the change of variables
    between the two domains.
    """
    if op == "H":
        _need(f, REAL, op)
        if f.grid[0] != 0.0:
            raise InputError("H needs a grid starting at 0")
        cum = _cumtrapz(f.grid, f.values)
        return SampledFunction(REAL, f.grid[1:], cum[1:] / f.grid[1:])
    if op == "M":
        _need(f, LOG, op)
        if f.grid[0] != 0.0:
            raise InputError("M needs a grid starting at ln t = 0")
        du = np.diff(f.grid)
        ed = np.exp(du)
        gi, gj = f.values[:-1], f.values[1:]
        # trapezoid of g(s)/s in s, factored to avoid forming s itself
        seg = 0.5 * (gi * (ed - 1.0) + gj * (1.0 - 1.0 / ed))
        cum = np.concatenate(([0.0], np.cumsum(seg)))
        return SampledFunction(LOG, f.grid[1:], cum[1:] / f.grid[1:])
    if op == "D":
        if a is None or not a > 0.0:
            raise InputError("dilation needs a > 0")
        if f.domain == REAL:
            return _interp_subset(f, f.grid * a, REAL)
        return _interp_subset(f, f.grid + math.log(a), LOG)
    if op == "T":
        _need(f, REAL, op)
        if b is None:
            raise InputError("shift needs b")
        return _interp_subset(f, f.grid - b, REAL)
    if op == "P":
        _need(f, LOG, op)
        if a is None or not a > 0.0:
            raise InputError("power substitution needs a > 0")
        return _interp_subset(f, f.grid / a, LOG)
    if op == "L":
        _need(f, REAL, op)
        return SampledFunction(LOG, f.grid, f.values)
    if op == "L_inv":
        _need(f, LOG, op)
        return SampledFunction(REAL, f.grid, f.values)
    raise InputError(f"unknown transform {op!r}")


def _need(f: SampledFunction, domain: str, op: str):
    if f.domain != domain:
        raise DomainMismatchError(f"{op} expects a {domain}-domain function")


def cesaro_smooth(f: SampledFunction) -> SampledFunction:
    """Running mean from the grid start; limit-preserving smoothing."""
    cum = _cumtrapz(f.grid, f.values)
    span = f.grid[1:] - f.grid[0]
    return SampledFunction(f.domain, f.grid[1:], cum[1:] / span)


# ---------------------------------------------------------------------------
# limit estimation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LimitConfig:
    tail_fraction: float = 0.5
    tolerance: float = 1e-3
    max_smoothing: int = 3
    model: str = "inv_abscissa"   # or "inv_exp_abscissa"
    min_tail_points: int = 6
    min_tail_span: float = 2.0 * math.log(10.0)


DEFAULT_LIMIT_CONFIG = LimitConfig()


@dataclass(frozen=True)
class LimitEstimate:
    """Numerical surrogate for an averaged limit at infinity.

    When ``converged``, every admissible averaging state assigns the same
    value (up to the residual); otherwise only the tail band is meaningful
    and ``value`` is None.
    """

    value: float | None
    liminf: float
    limsup: float
    converged: bool
    model: str
    samples: SampledFunction
    smoothing_used: int = 0
    residual: float = math.nan
    raw_band: tuple = ()

    @property
    def band(self):
        return (self.liminf, self.limsup)

    @property
    def width(self):
        return self.limsup - self.liminf

    def midpoint(self) -> float:
        return self.value if self.value is not None \
            else 0.5 * (self.liminf + self.limsup)


def _regressor(model: str, grid: np.ndarray) -> np.ndarray:
    if model == "inv_abscissa":
        return 1.0 / grid
    if model == "inv_exp_abscissa":
        return np.exp(-(grid - grid[0]))
    raise InputError(f"unknown fit model {model!r}")


def _tail_slice(f: SampledFunction, frac: float):
    cut = f.grid[-1] - frac * (f.grid[-1] - f.grid[0])
    mask = f.grid >= cut
    return f.grid[mask], f.values[mask]


def limit_estimate(g: SampledFunction,
                   config: LimitConfig = DEFAULT_LIMIT_CONFIG) -> LimitEstimate:
    """Band plus model-fit extrapolation of g at the far end of its grid."""
    tg, tv = _tail_slice(g, config.tail_fraction)
    if len(tg) < config.min_tail_points or \
            (tg[-1] - tg[0]) < config.min_tail_span:
        raise InputError(
            f"tail too short for a limit estimate: {len(tg)} points over "
            f"span {tg[-1] - tg[0]:.3g} (need {config.min_tail_points} over "
            f"{config.min_tail_span:.3g})")
    raw_lo, raw_hi = float(tv.min()), float(tv.max())
    h = g
    resid = math.nan
    for k in range(config.max_smoothing + 1):
        hg, hv = _tail_slice(h, config.tail_fraction)
        if len(hg) >= config.min_tail_points:
            x = _regressor(config.model, hg)
            A = np.vstack([np.ones_like(x), x]).T
            coef, *_ = np.linalg.lstsq(A, hv, rcond=None)
            resid = float(np.max(np.abs(hv - A @ coef)))
            if resid < config.tolerance:
                a = float(coef[0])
                delta = max(resid, 1e-15)
                return LimitEstimate(a, a - delta, a + delta, True,
                                     config.model, g, k, resid,
                                     (raw_lo, raw_hi))
        if k < config.max_smoothing:
            h = cesaro_smooth(h)
    return LimitEstimate(None, raw_lo, raw_hi, False, config.model, g,
                         config.max_smoothing, resid, (raw_lo, raw_hi))


def band_gap(e1: LimitEstimate, e2: LimitEstimate) -> float:
    """Distance between two band intervals (0 when they overlap)."""
    return max(0.0, e1.liminf - e2.limsup, e2.liminf - e1.limsup)


# ---------------------------------------------------------------------------
# weighted-mean curves and their limits
# ---------------------------------------------------------------------------


def weighted_mean_curve(x, psi: PsiFunction, ln_grid) -> SampledFunction:
    ln_grid = np.asarray(ln_grid, dtype=float)
    vals = np.array([weighted_mean(x, psi, ln_t=float(u)) for u in ln_grid])
    return SampledFunction(LOG, ln_grid, vals)


def _default_grid(x, horizon_ln: float | None, n_points: int):
    h = 40.0
    if isinstance(x, StepFunction) and x.n_pieces:
        h = max(h, x.log_breakpoints[-1])
    suggested = getattr(x, "suggested_horizon_ln", None)
    if suggested is not None:
        h = max(h, suggested)
    if horizon_ln is not None:
        h = horizon_ln
    if not h > 1.0:
        raise InputError("horizon must exceed ln t = 1")
    return np.linspace(1.0, h, n_points)


def dixmier_estimate(x, psi: PsiFunction,
                     config: LimitConfig = DEFAULT_LIMIT_CONFIG, *,
                     horizon_ln: float | None = None,
                     n_points: int = 2048) -> LimitEstimate:
    """Limit band of the psi-weighted mean along the far tail.

    Requires finite Marcinkiewicz norm; the horizon extends automatically
    to cover step functions with huge breakpoints.
    """
    norm = marcinkiewicz_norm(x, psi)
    if not norm.finite:
        raise DivergenceError("weighted means are unbounded for this input")
    grid = _default_grid(x, horizon_ln, n_points)
    return limit_estimate(weighted_mean_curve(x, psi, grid), config)


@dataclass(frozen=True)
class TripleResult:
    """The three equivalent trace averages and their agreement."""

    mean: LimitEstimate            # partial integrals of the rearrangement
    truncated: LimitEstimate       # trace above the level 1/t
    windowed: LimitEstimate        # trace over levels (1/t, 1)
    max_band_gap: float
    max_value_spread: float | None
    converged_agree: bool


def dixmier_triple(x, psi: PsiFunction,
                   config: LimitConfig = DEFAULT_LIMIT_CONFIG, *,
                   horizon_ln: float | None = None,
                   n_points: int = 2048) -> TripleResult:
    """Evaluate the weighted mean against its two truncated-trace forms.

    The normalizing function must have doubling ratio 1 (power-scale
    weights are rejected: the equivalence fails for them).
    """
    diag = psi_diagnostics(psi)
    if not diag.doubling_is_one:
        raise HypothesisError(
            f"{psi.name} has doubling limit {diag.doubling_limit:.6g} != 1; "
            "the truncated-trace equivalence requires doubling ratio 1")
    norm = marcinkiewicz_norm(x, psi)
    if not norm.finite:
        raise DivergenceError("weighted means are unbounded for this input")
    grid = _default_grid(x, horizon_ln, n_points)
    mean_curve = weighted_mean_curve(x, psi, grid)
    psis = np.array([psi.value_ln(float(u)) for u in grid])
    trunc_vals = np.array([truncated_trace_ln(x, -float(u)) for u in grid])
    window_offset = truncated_trace_ln(x, 0.0)
    truncated = SampledFunction(LOG, grid, trunc_vals / psis)
    windowed = SampledFunction(LOG, grid, (trunc_vals - window_offset) / psis)
    e1 = limit_estimate(mean_curve, config)
    e2 = limit_estimate(truncated, config)
    e3 = limit_estimate(windowed, config)
    gaps = [band_gap(e1, e2), band_gap(e1, e3), band_gap(e2, e3)]
    spread = None
    if e1.converged and e2.converged and e3.converged:
        vals = [e1.value, e2.value, e3.value]
        spread = max(vals) - min(vals)
    agree = (e1.converged == e2.converged == e3.converged)
    return TripleResult(e1, e2, e3, max(gaps), spread, agree)
