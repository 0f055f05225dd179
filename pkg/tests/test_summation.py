"""Euler-Maclaurin continuations against brute-force and library oracles."""

import math

import numpy as np

from conftest import trapezoid
import pytest
from scipy.special import zeta as riemann_zeta

from singtrace import summation


@pytest.mark.parametrize("sigma", [1.1, 1.5, 2.0, 3.0, 4.5])
def test_power_tail_sum_matches_riemann_zeta(sigma):
    v, err = summation.power_tail_sum(sigma, 1)
    assert v == pytest.approx(float(riemann_zeta(sigma)), abs=1e-12)
    assert 0.0 <= err < 1e-12


def test_power_tail_sum_near_abscissa():
    s = 2.0 ** -20
    v, err = summation.power_tail_sum(1.0 + s, 1)
    # s * zeta(1+s) -> 1 + gamma * s + O(s^2)
    assert s * v == pytest.approx(1.0 + 0.5772156649015329 * s, rel=1e-9)
    assert err < 1e-12


def test_power_tail_sum_from_offset():
    v, _ = summation.power_tail_sum(2.0, 11)
    brute = float(np.sum(np.arange(11, 10**6) ** -2.0)) + 1e-6
    assert v == pytest.approx(brute, rel=1e-9)


def test_power_tail_divergent_rejected():
    with pytest.raises(ValueError):
        summation.power_tail_sum(1.0, 1)


def test_power_prefix_sum_small_exact():
    assert summation.power_prefix_sum(1.0, 10.0) == \
        pytest.approx(sum(1.0 / n for n in range(1, 11)), rel=1e-15)


def test_power_prefix_sum_beyond_window():
    got = summation.power_prefix_sum(1.0, 10.0**7)
    brute = float(np.sum(1.0 / np.arange(1, 10**7 + 1)))
    assert got == pytest.approx(brute, abs=1e-10)


def test_power_prefix_alpha_below_one():
    got = summation.power_prefix_sum(0.5, 2.0 * 10**6)
    brute = float(np.sum(np.arange(1, 2 * 10**6 + 1) ** -0.5))
    assert got == pytest.approx(brute, rel=1e-12)


def test_power_step_integral_fractional():
    # mu = n^-1 on [n-1, n): integral to 10.5 adds half of the 11th value
    expected = sum(1.0 / n for n in range(1, 11)) + 0.5 / 11.0
    assert summation.power_step_integral(1.0, 10.5) == \
        pytest.approx(expected, rel=1e-14)


def test_power_step_integral_ln_consistency():
    for alpha in (0.5, 1.0, 1.7):
        t = 123456.789
        a = summation.power_step_integral(alpha, t)
        b = summation.power_step_integral_ln(alpha, math.log(t))
        assert b == pytest.approx(a, rel=1e-12)


def test_power_step_integral_ln_huge():
    # alpha = 1: behaves like ln t + gamma for huge t
    got = summation.power_step_integral_ln(1.0, 1.0e5)
    assert got == pytest.approx(1.0e5 + 0.5772156649015329, rel=1e-10)


@pytest.mark.parametrize("w,beta", [(1e-4, 2.0), (0.05, 1.0), (0.2, 0.5)])
def test_exp_power_tail_sum_vs_brute(w, beta):
    v, err = summation.exp_power_tail_sum(w, beta, 1)
    n_cut = int((745.0 / w) ** (1.0 / beta)) + 2
    n = np.arange(1, n_cut, dtype=float)
    brute = float(np.sum(np.exp(-w * n ** beta)))
    assert v == pytest.approx(brute, rel=1e-10)
    assert err >= 0.0


def test_exp_power_tail_sum_small_w_asymptotics():
    # too many terms to sum directly; compare with the integral asymptotics
    w, beta = 1e-7, 2.0 / 3.0
    v, err = summation.exp_power_tail_sum(w, beta, 1)
    expected = 1.5 * math.gamma(1.5) * w ** -1.5 - 0.5
    assert v == pytest.approx(expected, rel=1e-9)
    assert err < 1e-3 * v


def test_exp_power_tail_gaussian_asymptotics():
    # sum exp(-(n/lambda)^2) = lambda sqrt(pi)/2 - 1/2 + (exp small)
    lam = 2.0 ** 24
    v, err = summation.exp_power_tail_sum(lam ** -2.0, 2.0, 1)
    expected = lam * math.sqrt(math.pi) / 2.0 - 0.5
    assert v == pytest.approx(expected, rel=1e-12)
    assert err < 1e-6


def test_exp_power_integral_matches_quadrature():
    # integral of exp(-0.3 sqrt(x)) from 4: substitute and compare brute
    xs = np.linspace(4.0, 4000.0, 4_000_001)
    brute = float(trapezoid(np.exp(-0.3 * np.sqrt(xs)), xs))
    got = summation.exp_power_integral(0.3, 0.5, 4.0)
    assert got == pytest.approx(brute, rel=1e-6)
