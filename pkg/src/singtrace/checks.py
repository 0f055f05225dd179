"""Named verification suites over the built-in corpus.

Each suite exercises one of the cross-identities the library computes and
returns machine-readable per-case verdicts; the CLI exposes them under
``singtrace check``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import corpus, heat, means, zeta
from .means import LOG, SampledFunction, apply_transform, limit_estimate
from .rearrange import (StepFunction, decreasing_rearrangement,
                        distribution_function, mu_from_distribution,
                        partial_integral, pointwise_product)
from .spaces import (PSI_0, PSI_1, marcinkiewicz_norm, quasinorm,
                     residue_seminorm)

E = math.e


@dataclass(frozen=True)
class CheckCase:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)


def _case(name, passed, **details):
    return CheckCase(name, bool(passed), details)


# ---------------------------------------------------------------------------
# corpus builders
# ---------------------------------------------------------------------------


def random_step_function(rng, max_pieces: int = 24,
                         allow_ties: bool = True) -> StepFunction:
    k = int(rng.integers(1, max_pieces + 1))
    lbp = np.sort(rng.normal(scale=2.0, size=k))
    lbp = np.unique(lbp)
    if allow_ties and rng.random() < 0.5:
        vals = rng.integers(0, 6, size=len(lbp)) * 0.75
    else:
        vals = rng.exponential(scale=2.0, size=len(lbp))
    lv = tuple(math.log(v) if v > 0 else -math.inf for v in vals)
    return StepFunction(tuple(float(b) for b in lbp), lv)


def random_spectrum(rng, max_head: int = 40):
    n = int(rng.integers(3, max_head + 1))
    head = np.sort(rng.exponential(scale=1.0, size=n))[::-1]
    roll = rng.random()
    if roll < 0.3:
        return corpus.Spectrum(tuple(head), None, name="random-finite")
    alpha = float(rng.choice([1.0, 1.5, 2.0]))
    c = float(head[-1]) * (n + 1.0) ** alpha * float(rng.uniform(0.3, 1.0))
    tail = corpus.PowerTail(c, alpha, n + 1)
    return corpus.Spectrum(tuple(head), tail, name=f"random-tail{alpha:g}")


def seminorm_chain_corpus(seed: int = 20260515, n_random: int = 14):
    """Named plus random members admissible for the order-1 seminorm."""
    rng = np.random.default_rng(seed)
    members = [
        corpus.gen_spectrum("harmonic"),
        corpus.gen_spectrum("small_ideal"),
        corpus.gen_spectrum("counterexample_z", 700),
        corpus.gen_spectrum("finite", [3.0, 1.0, 0.25]),
        corpus.gen_spectrum("harmonic").scaled(2.5),
        corpus.gen_spectrum("power", 0.5),   # fast decay: seminorm 0
    ]
    members += [random_spectrum(rng) for _ in range(n_random)]
    return members


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def log_average_limsup(x, horizon_ln: float | None = None,
                       n_points: int = 2048):
    """Band of (1/ln u) * integral of the rearrangement up to u."""
    h = 40.0
    if isinstance(x, StepFunction) and x.n_pieces:
        h = max(h, x.log_breakpoints[-1])
    suggested = getattr(x, "suggested_horizon_ln", None)
    if suggested is not None:
        h = max(h, suggested)
    if horizon_ln is not None:
        h = horizon_ln
    grid = np.linspace(2.0, h, n_points)
    vals = np.array([partial_integral(x, ln_t=float(u)) / float(u)
                     for u in grid])
    return limit_estimate(SampledFunction(LOG, grid, vals))


def run_seminorm_chain(seed: int = 20260515) -> list:
    """Order-1 seminorm below the weighted-mean norm, and the log-average
    band below e times the seminorm, across the corpus."""
    cases = []
    for x in seminorm_chain_corpus(seed):
        name = getattr(x, "name", "") or type(x).__name__
        z1 = residue_seminorm(x)
        norm = marcinkiewicz_norm(x, PSI_1)
        ok_a = z1.value <= norm.value + 1e-6
        band = log_average_limsup(x)
        ok_b = band.limsup <= E * z1.value + 1e-3
        cases.append(_case(f"chain[{name}]", ok_a and ok_b,
                           seminorm=z1.value, norm=norm.value,
                           log_average_hi=band.limsup,
                           e_times_seminorm=E * z1.value))
    return cases


def run_zeta_dixmier(tolerances=None) -> list:
    """Scaled zeta limits against the averaged traces of the powers."""
    members = [
        ("harmonic", corpus.gen_spectrum("harmonic"), 1.0, 1.0, 2e-3),
        ("power(2)", corpus.gen_spectrum("power", 2), 2.0, 2.0, 2e-3),
        ("power(3)", corpus.gen_spectrum("power", 3), 3.0, 3.0, 2e-3),
        ("counterexample_z", corpus.gen_spectrum("counterexample_z", 700),
         1.0, 1.0 / (2.0 * math.log(2.0)), 1e-2),
    ]
    cases = []
    for name, x, p, expected, tol in members:
        psi = PSI_0 if name == "counterexample_z" else PSI_1
        rep = zeta.zeta_vs_dixmier_check(x, p, psi, tolerance=tol)
        zl = rep.zeta.value
        ok = (rep.passed is True and zl is not None
              and abs(zl - expected) <= tol)
        cases.append(_case(f"zeta=p*dixmier[{name}]", ok,
                           p=p, zeta_limit=zl, expected=expected,
                           gap=rep.gap, identity_error=rep.max_power_identity_error))
    return cases


def run_heat_gamma(tolerance: float = 4e-3) -> list:
    """Three-way overlap of the heat limit, the scaled zeta limit, and the
    scaled averaged trace, for several (p, q)."""
    members = [
        ("harmonic", corpus.gen_spectrum("harmonic"), 1.0, 2.0,
         math.sqrt(math.pi) / 2.0),
        ("power(2)", corpus.gen_spectrum("power", 2), 2.0, 2.0, 1.0),
        ("power(2)", corpus.gen_spectrum("power", 2), 2.0, 1.0, 2.0),
        ("power(3)", corpus.gen_spectrum("power", 3), 3.0, 2.0,
         0.75 * math.sqrt(math.pi)),
    ]
    cases = []
    for name, x, p, q, expected in members:
        rep = heat.heat_profile_limit(x, p, q, tolerance=tolerance)
        ok = (rep.passed is True and rep.value is not None
              and abs(rep.value - expected) <= tolerance)
        cases.append(_case(f"heat[{name},p={p:g},q={q:g}]", ok,
                           value=rep.value, expected=expected,
                           max_gap=rep.max_gap))
    return cases


def run_heat_residue_bridge() -> list:
    """Small-time power-law fits recover the exponent, the coefficient and
    the residue."""
    members = [
        ("harmonic", corpus.gen_spectrum("harmonic"), 1.0,
         math.sqrt(math.pi) / 2.0, 1.0),
        ("power(2)", corpus.gen_spectrum("power", 2), 2.0, 1.0, 2.0),
    ]
    cases = []
    for name, x, p_true, c_true, res_true in members:
        fit = heat.heat_asymptotic_fit(x)
        ok = (fit.accepted
              and abs(fit.p_hat - p_true) <= 0.02
              and abs(fit.coefficient - c_true) <= 0.02 * c_true
              and abs(fit.predicted_residue - res_true) <= 0.02 * res_true
              and fit.residue_gap is not None and fit.residue_gap <= 0.02)
        cases.append(_case(f"heat-fit[{name}]", ok, p_hat=fit.p_hat,
                           coefficient=fit.coefficient,
                           predicted_residue=fit.predicted_residue,
                           residue_check=fit.residue_check,
                           residue_gap=fit.residue_gap))
    single = corpus.gen_spectrum("finite", [1.0])
    fit = heat.heat_asymptotic_fit(single)
    cases.append(_case("heat-fit[single-value-rejected]", not fit.accepted,
                       note=fit.note))
    return cases


def run_karamata(n_grid: int = 1 << 22) -> list:
    """Linear weights pass through exactly; a square-root perturbation
    extrapolates away."""
    cases = []
    for c in (1.0, 2.5):
        r = 4.0
        upper = math.log(1e12) * 16.0
        g = np.linspace(0.0, upper, n_grid)
        b = heat.BetaFunction(g, c * g)
        got = heat.karamata_transform(b, r)
        exact = c * (1.0 - math.exp(-upper / r))
        err = abs(got - exact)
        cases.append(_case(f"karamata[linear c={c:g}]", err < 1e-8,
                           value=got, quadrature_error=err))
    upper = math.log(1e12) * 256.0
    g = np.linspace(0.0, upper, n_grid)
    b = heat.BetaFunction(g, g + np.sqrt(g))
    val, samples = heat.karamata_limit(
        b, [4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0])
    cases.append(_case("karamata[t+sqrt(t)]", abs(val - 1.0) <= 1e-3,
                       extrapolated=val, samples=list(samples)))
    return cases


def _smooth_test_functions(u: np.ndarray):
    return [
        ("const", np.full_like(u, 2.5)),
        ("lorentz", 1.0 / (1.0 + u ** 2) + 0.3),
        ("damped-sine", np.sin(u) * np.exp(-0.2 * u) + 2.0),
        ("log-ratio", np.log1p(u) / (1.0 + 0.5 * u)),
        ("cosine", 1.0 + 0.5 * np.cos(0.7 * u)),
    ]


def run_intertwine(n_points: int = 1 << 16, tolerance: float = 1e-6) -> list:
    """The change of variables carries one averaging mean to the other."""
    u = np.linspace(0.0, 3.0 * math.log(10.0), n_points)
    cases = []
    for name, vals in _smooth_test_functions(u):
        f = SampledFunction(LOG, u, vals)
        lhs = apply_transform(apply_transform(
            apply_transform(f, "L_inv"), "H"), "L")
        rhs = apply_transform(f, "M")
        d = float(np.max(np.abs(lhs.values - rhs.values)))
        cases.append(_case(f"intertwine[{name}]", d < tolerance, sup_diff=d))
    return cases


def run_holder(seed: int = 1234, n_pairs: int = 200) -> list:
    """Product partial integrals below the conjugate-power bound at every
    merged kink."""
    rng = np.random.default_rng(seed)
    worst = -math.inf
    failures = 0
    for _ in range(n_pairs):
        f = random_step_function(rng)
        g = random_step_function(rng)
        p = float(rng.uniform(1.1, 4.0))
        q = p / (p - 1.0)
        fg = decreasing_rearrangement(pointwise_product(
            decreasing_rearrangement(f), decreasing_rearrangement(g)))
        fp = decreasing_rearrangement(f).powered(p)
        gq = decreasing_rearrangement(g).powered(q)
        kinks = sorted(set(fg.log_breakpoints) | set(fp.log_breakpoints)
                       | set(gq.log_breakpoints))
        for lt in kinks:
            lhs = fg.partial_integral_ln(lt)
            rhs = (fp.partial_integral_ln(lt) ** (1.0 / p)
                   * gq.partial_integral_ln(lt) ** (1.0 / q))
            gap = lhs - rhs
            worst = max(worst, gap / max(rhs, 1e-300))
            if gap > 1e-9 * max(rhs, 1.0):
                failures += 1
    return [_case("holder[random-pairs]", failures == 0,
                  pairs=n_pairs, failures=failures, worst_rel_gap=worst)]


def run_galois(seed: int = 4321, n_funcs: int = 100) -> list:
    """Level/measure duality, measure preservation, and the inverse
    composition, on random step functions."""
    rng = np.random.default_rng(seed)
    galois_bad = equi_bad = comp_bad = 0
    for _ in range(n_funcs):
        f = random_step_function(rng)
        fr = decreasing_rearrangement(f)
        lam = distribution_function(f)
        if distribution_function(fr) != lam:
            equi_bad += 1
        if mu_from_distribution(lam) != fr:
            comp_bad += 1
        # sample levels and abscissae around the stored knots
        for lt in list(lam.log_thresholds[:8]):
            for dt in (-0.3, 0.0, 0.25):
                ln_t = lt + dt
                ln_lam = lam.log_level_at_ln(ln_t)
                for ds in (-0.4, 0.0, 0.35):
                    ln_s = (ln_lam if ln_lam != -math.inf else 0.0) + ds
                    s_ge = ln_s >= ln_lam
                    mu_val = fr.value_at_ln(ln_s)
                    t_val = math.exp(ln_t)
                    if s_ge != (mu_val <= t_val):
                        galois_bad += 1
    return [_case("galois[duality]", galois_bad == 0, violations=galois_bad),
            _case("galois[equimeasurable-exact]", equi_bad == 0,
                  violations=equi_bad),
            _case("galois[inverse-composition-exact]", comp_bad == 0,
                  violations=comp_bad)]


SUITES = {
    "thm44": run_seminorm_chain,
    "thm47": run_zeta_dixmier,
    "thm51": run_heat_gamma,
    "prop52": run_heat_residue_bridge,
    "karamata": run_karamata,
    "intertwine": run_intertwine,
    "holder": run_holder,
    "galois": run_galois,
}


def run_suite(name: str) -> list:
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
