"""Heat traces, profile limits, the exponential-average transform, the
small-time fit, and the small ideal."""

import math

import numpy as np

from conftest import trapezoid
import pytest

from singtrace import (BetaFunction, InputError, Spectrum, gamma,
                       heat_asymptotic_fit, heat_profile_limit, heat_trace,
                       karamata_limit, karamata_transform,
                       shanks_extrapolate, small_ideal_constant, zeta_value)
from singtrace.corpus import gen_spectrum

SQRT_PI = math.sqrt(math.pi)


class TestGamma:
    def test_integers(self):
        assert gamma(1.0) == 1.0
        assert gamma(5.0) == 24.0

    def test_half_integer(self):
        assert gamma(1.5) == pytest.approx(SQRT_PI / 2.0, rel=1e-13)
        assert gamma(0.5) == pytest.approx(SQRT_PI, rel=1e-13)

    def test_domain(self):
        with pytest.raises(InputError):
            gamma(0.0)
        with pytest.raises(InputError):
            gamma(-1.5)

    @pytest.mark.parametrize("z", [0.1, 0.75, 2.3, 17.0, 49.5])
    def test_recurrence(self, z):
        assert gamma(z + 1.0) == pytest.approx(z * gamma(z), rel=1e-12)


class TestHeatTrace:
    def test_single_value(self):
        v, _ = heat_trace(gen_spectrum("finite", [1.0]), 2.0, 1.0)
        assert v == pytest.approx(math.exp(-1.0), rel=1e-15)

    def test_harmonic_direct_sum(self):
        v, err = heat_trace(gen_spectrum("harmonic"), 2.0, 1.0)
        brute = sum(math.exp(-n * n) for n in range(1, 40))
        assert v == pytest.approx(brute, rel=1e-14)
        assert v == pytest.approx(0.386319, abs=1e-6)

    def test_zero_values_skipped(self):
        v, _ = heat_trace(gen_spectrum("finite", [1.0, 0.0, 0.0]), 2.0, 1.0)
        assert v == pytest.approx(math.exp(-1.0), rel=1e-15)

    def test_laplace_consistency(self):
        # zeta(s) equals the gamma-normalized Laplace integral of the trace
        x = gen_spectrum("harmonic")
        q, s = 2.0, 2.0
        u = np.linspace(-40.0, 8.0, 3000)
        vals = np.array([heat_trace(x, q, math.exp(float(w)))[0] for w in u])
        integrand = np.exp(u * (s / q)) * vals  # t^(s/q-1) dt = e^(u s/q) du
        integral = float(trapezoid(integrand, u)) / math.gamma(s / q)
        expected, _ = zeta_value(x, s)
        assert integral == pytest.approx(expected, abs=1e-4)

    def test_far_part_contributes_no_residue(self):
        # the t > 1 part of the Laplace integral stays bounded, so its
        # (s - p)-scaled contribution vanishes near the abscissa
        x = gen_spectrum("harmonic")
        u = np.linspace(0.0, 8.0, 500)
        vals = np.array([heat_trace(x, 2.0, math.exp(float(w)))[0] for w in u])
        for s in (1.5, 1.1, 1.01):
            part = float(trapezoid(np.exp(u * (s / 2.0)) * vals, u))
            part /= math.gamma(s / 2.0)
            assert (s - 1.0) * part <= (s - 1.0) * 10.0


class TestHeatProfileLimit:
    def test_harmonic_gamma_factor(self):
        rep = heat_profile_limit(gen_spectrum("harmonic"), 1.0, 2.0)
        assert rep.passed is True
        assert rep.value == pytest.approx(SQRT_PI / 2.0, abs=1e-3)
        assert rep.gamma_factor == pytest.approx(gamma(0.5), rel=1e-12)

    @pytest.mark.parametrize("kind,p,q,expected", [
        (("power", 2), 2.0, 2.0, 1.0),
        (("power", 2), 2.0, 1.0, 2.0),
        (("power", 3), 3.0, 2.0, 0.75 * SQRT_PI),
    ])
    def test_three_way_overlap(self, kind, p, q, expected):
        rep = heat_profile_limit(gen_spectrum(*kind), p, q, tolerance=4e-3)
        assert rep.passed is True
        assert rep.value == pytest.approx(expected, abs=4e-3)
        assert rep.max_gap <= 4e-3

    def test_small_ideal_member(self):
        rep = heat_profile_limit(gen_spectrum("small_ideal"), 1.0, 2.0)
        assert rep.passed is True
        assert rep.value == pytest.approx(gamma(1.5), abs=2e-3)


class TestKaramata:
    def test_linear_weight_exact(self):
        upper = math.log(1e12) * 16.0
        g = np.linspace(0.0, upper, 1 << 22)
        for c in (1.0, 2.5):
            beta = BetaFunction(g, c * g)
            got = karamata_transform(beta, 4.0)
            assert got == pytest.approx(c, abs=1e-8 * c)

    def test_sqrt_perturbation_extrapolates(self):
        upper = math.log(1e12) * 256.0
        g = np.linspace(0.0, upper, 1 << 22)
        beta = BetaFunction(g, g + np.sqrt(g))
        r_grid = [4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0]
        val, samples = karamata_limit(beta, r_grid)
        assert val == pytest.approx(1.0, abs=1e-3)
        # raw samples follow 1 + sqrt(pi)/(2 sqrt(r))
        for r, s in zip(r_grid, samples):
            assert s == pytest.approx(1.0 + SQRT_PI / (2.0 * math.sqrt(r)),
                                      abs=1e-5)

    def test_domain_too_short_rejected(self):
        g = np.linspace(0.0, 10.0, 100)
        beta = BetaFunction(g, g)
        with pytest.raises(InputError):
            karamata_transform(beta, 5.0)

    def test_heat_substitution_consistency(self):
        # weight built from the heat trace: its transform agrees with the
        # closed-form weight sqrt(pi)/2 v - (1 - e^-v)/2 at every r, and the
        # extrapolated limit approaches the heat-profile limit sqrt(pi)/2
        x = gen_spectrum("harmonic")
        r_grid = [1.5, 3.0, 6.0, 12.0]
        upper = math.log(1e12) * r_grid[-1]  # keeps exp(-2v) above tiny
        v = np.linspace(0.0, upper, 1 << 13)
        dv = v[1] - v[0]
        integrand = np.array(
            [math.exp(-w) * heat_trace(x, 2.0, math.exp(-2.0 * w))[0]
             for w in v])
        vals = np.concatenate(([0.0], np.cumsum(
            0.5 * (integrand[1:] + integrand[:-1]) * dv)))
        beta = BetaFunction(v, vals)
        closed = BetaFunction(v, SQRT_PI / 2.0 * v - 0.5 * (-np.expm1(-v)))
        for r in r_grid:
            assert karamata_transform(beta, r) == pytest.approx(
                karamata_transform(closed, r), abs=2e-3)
        val, _ = karamata_limit(beta, r_grid)
        assert val == pytest.approx(SQRT_PI / 2.0, abs=0.02)

    def test_nondecreasing_enforced(self):
        g = np.linspace(0.0, 10.0, 50)
        with pytest.raises(InputError):
            BetaFunction(g, -g)


class TestShanks:
    def test_exact_on_geometric(self):
        seq = [3.0 + 2.0 * 0.5 ** k for k in range(6)]
        assert shanks_extrapolate(seq) == pytest.approx(3.0, abs=1e-12)

    def test_constant(self):
        assert shanks_extrapolate([1.5, 1.5, 1.5]) == 1.5


class TestHeatAsymptoticFit:
    def test_harmonic(self):
        fit = heat_asymptotic_fit(gen_spectrum("harmonic"))
        assert fit.accepted
        assert fit.p_hat == pytest.approx(1.0, abs=0.02)
        assert fit.coefficient == pytest.approx(SQRT_PI / 2.0, rel=0.02)
        assert fit.predicted_residue == pytest.approx(1.0, rel=0.02)
        assert fit.residue_gap is not None and fit.residue_gap <= 0.02
        assert fit.dixmier_check == pytest.approx(1.0, rel=0.02)

    def test_power2(self):
        fit = heat_asymptotic_fit(gen_spectrum("power", 2))
        assert fit.accepted
        assert fit.p_hat == pytest.approx(2.0, abs=0.02)
        assert fit.coefficient == pytest.approx(1.0, rel=0.02)
        assert fit.predicted_residue == pytest.approx(2.0, rel=0.02)

    def test_single_value_rejected(self):
        fit = heat_asymptotic_fit(gen_spectrum("finite", [1.0]))
        assert not fit.accepted


class TestSmallIdeal:
    def test_harmonic(self):
        res = small_ideal_constant(gen_spectrum("harmonic"))
        assert res.value == 1.0
        assert res.witness_ln_t == 0.0

    def test_slow_log_decay(self):
        x = Spectrum(tuple(1.0 / (n * math.log(n + 1.0))
                           for n in range(1, 200)))
        res = small_ideal_constant(x)
        assert res.value == pytest.approx(1.0 / math.log(2.0), rel=1e-12)
        assert res.witness_ln_t == 0.0  # attained at the first index

    def test_counterexample_diverges(self):
        x = gen_spectrum("counterexample_x", 2, 30)
        assert small_ideal_constant(x).value == math.inf

    def test_small_ideal_member_is_one(self):
        assert small_ideal_constant(gen_spectrum("small_ideal")).value == 1.0

    def test_sub_one_alpha_tail_diverges(self):
        x = gen_spectrum("power", 2)  # mu ~ n^(-1/2)
        assert small_ideal_constant(x).value == math.inf
