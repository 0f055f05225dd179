"""Zeta-type power sums of singular values and their scaled limits near
the abscissa of convergence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError, InputError
from .means import (LOG, LimitConfig, LimitEstimate, SampledFunction,
                    dixmier_estimate, limit_estimate)
from .rearrange import Spectrum
from .spaces import PSI_1, PsiFunction, marcinkiewicz_norm, power_integral

# The grids probe to within 1/r of the abscissa, so only outright
# non-convergence is rejected; the tracked summation error bounds cover
# the near-abscissa evaluations.
ABSCISSA_MARGIN = 1e-12

R_GRID_DEFAULT = tuple(float(r) for r in np.geomspace(2.0, 2.0 ** 20, 19))

ZETA_LIMIT_CONFIG = LimitConfig(model="inv_exp_abscissa", tolerance=2e-3)


def _abscissa_of(x) -> float:
    if isinstance(x, Spectrum) and x.tail is not None:
        return 1.0 / x.tail.exponent
    return float(getattr(x, "power_abscissa", 0.0))


def zeta_value(x, s: float):
    """(sum of the s-th powers of the singular values, error bound).

    Requires s to clear the abscissa of convergence of the input's tail
    model by a safety margin.
    """
    if not s > 0.0:
        raise InputError("s must be positive")
    abscissa = _abscissa_of(x)
    if s < abscissa + ABSCISSA_MARGIN:
        raise DivergenceError(
            f"s = {s:g} is below the abscissa of convergence "
            f"{abscissa:g} (+ {ABSCISSA_MARGIN:g} margin)",
            abscissa=abscissa)
    return power_integral(x, s)


@dataclass(frozen=True)
class ZetaCurve:
    """(1/r) * zeta(p + 1/r) on a geometric grid of r."""

    p: float
    r_grid: tuple
    values: tuple
    error_bounds: tuple

    @property
    def s_grid(self):
        return tuple(self.p + 1.0 / r for r in self.r_grid)

    def sampled(self) -> SampledFunction:
        return SampledFunction(LOG, np.log(np.asarray(self.r_grid)),
                               np.asarray(self.values))


def zeta_curve(x, p: float, r_grid=None) -> ZetaCurve:
    grid = tuple(sorted(float(r) for r in (r_grid or R_GRID_DEFAULT)))
    if len(grid) < 2 or grid[0] <= 0.0:
        raise InputError("the r grid must be positive and have >= 2 points")
    vals, errs = [], []
    for r in grid:
        v, e = zeta_value(x, p + 1.0 / r)
        vals.append(v / r)
        errs.append(e / r)
    return ZetaCurve(p, grid, tuple(vals), tuple(errs))


@dataclass(frozen=True)
class ZetaLimitReport:
    """Limit of (1/r) zeta(p + 1/r) with the summability side-check."""

    p: float
    estimate: LimitEstimate
    curve: ZetaCurve
    marcinkiewicz_finite: bool | None = None

    @property
    def value(self):
        return self.estimate.value

    @property
    def converged(self):
        return self.estimate.converged


def zeta_limit(x, p: float, config: LimitConfig | None = None,
               r_grid=None) -> ZetaLimitReport:
    """Estimate the limit of (1/r) zeta(p + 1/r) as r grows.

    A converged limit at p = 1 certifies membership in the weighted-mean
    space for the logarithmic weight; the certificate is recomputed and
    reported alongside.
    """
    curve = zeta_curve(x, p, r_grid)
    cfg = config or ZETA_LIMIT_CONFIG
    est = limit_estimate(curve.sampled(), cfg)
    marc = None
    if est.converged and p == 1.0:
        marc = marcinkiewicz_norm(x, PSI_1).finite
    return ZetaLimitReport(p, est, curve, marc)


@dataclass(frozen=True)
class ResidueReport:
    """(s - p) zeta(s) along s = p + 1/r; identical samples to the r-form."""

    p: float
    s_grid: tuple
    estimate: LimitEstimate
    curve: ZetaCurve

    @property
    def value(self):
        return self.estimate.value


def residue_estimate(x, p: float, config: LimitConfig | None = None,
                     r_grid=None) -> ResidueReport:
    """Limit of (s - p) zeta(s) as s decreases to p.

    This is the same curve as ``zeta_limit`` under s = p + 1/r (the values
    agree exactly, not merely to tolerance); it is kept as a separate entry
    point for the heat-side workflow.
    """
    rep = zeta_limit(x, p, config, r_grid)
    return ResidueReport(p, rep.curve.s_grid, rep.estimate, rep.curve)


@dataclass(frozen=True)
class ZetaDixmierReport:
    """Agreement between the zeta limit and p times the averaged trace."""

    p: float
    zeta: ZetaLimitReport
    dixmier: LimitEstimate
    scaled_dixmier_band: tuple
    gap: float
    max_power_identity_error: float
    band_only: bool
    passed: bool | None


def zeta_vs_dixmier_check(x, p: float, psi: PsiFunction = PSI_1,
                          config: LimitConfig | None = None,
                          r_grid=None, *, horizon_ln: float | None = None,
                          tolerance: float = 2e-3) -> ZetaDixmierReport:
    """Check that the zeta limit equals p times the averaged trace of the
    p-th power, and that the power-substitution identity holds exactly.

    The identity check rewrites (1/r) zeta(p + 1/r) as
    p * (1/(p r)) zeta_of_power(1 + 1/(p r)) and verifies the samples agree
    to rounding (the rewrite is exact algebra, but rounding in the exponent
    is amplified by 1/(s - p) near the pole, so the allowance grows with
    the largest r on the grid); the limit comparison passes when the bands
    overlap within the tolerance.  Non-converged sides degrade to a
    band-only report.
    """
    zl = zeta_limit(x, p, config, r_grid)
    xp = x.powered(p) if p != 1.0 else x
    dix = dixmier_estimate(xp, psi, horizon_ln=horizon_ln)

    ident_err = 0.0
    ident_allow = 0.0
    if p != 1.0:
        for r, v in zip(zl.curve.r_grid, zl.curve.values):
            w, _ = zeta_value(xp, 1.0 + 1.0 / (p * r))
            rhs = p * (w / (p * r))
            scale = max(abs(v), abs(rhs), 1e-300)
            ident_err = max(ident_err, abs(v - rhs) / scale)
        ident_allow = 64.0 * 2.22e-16 * max(zl.curve.r_grid)

    lo, hi = dix.liminf * p, dix.limsup * p
    band_only = not (zl.converged and dix.converged)
    gap = max(0.0, zl.estimate.liminf - hi, lo - zl.estimate.limsup)
    passed = None
    if not band_only:
        passed = gap <= tolerance and ident_err <= max(1e-12, ident_allow)
    return ZetaDixmierReport(p, zl, dix, (lo, hi), gap, ident_err,
                             band_only, passed)
