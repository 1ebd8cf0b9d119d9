import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from fisher_renyi import specfun
from fisher_renyi.errors import DomainError

# mpmath (30 digits) values, frozen
LGAMMA_10_3 = 13.48203678613835691        # Gamma(1.3) by quadrature, then the recurrence
ZETA_3 = 1.2020569031595942854
# Gamma(s)^-1 int x^(s-1) e^(-a x) (1 - e^-x)^(-lam) dx
MZ_7_2_2 = 0.0089937846025263128747
MZ_4P5_0P7_2P5 = 5.2996895055108739101
MZ_3_1_0P5 = 1.0867664774967903504


def test_log_gamma_values():
    assert specfun.log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), rel=1e-14)
    assert specfun.log_gamma(5) == pytest.approx(math.log(24), rel=1e-14)
    assert specfun.log_gamma(10.3) == pytest.approx(LGAMMA_10_3, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5])
def test_log_gamma_domain(x):
    with pytest.raises(DomainError):
        specfun.log_gamma(x)


def test_beta_values():
    assert specfun.beta(1, 1) == pytest.approx(1.0, rel=1e-14)
    assert specfun.beta(0.5, 2) == pytest.approx(4.0 / 3.0, rel=1e-14)
    with pytest.raises(DomainError):
        specfun.beta(0.0, 1.0)


@given(st.floats(0.05, 30), st.floats(0.05, 30))
def test_beta_symmetric(a, b):
    assert specfun.beta(a, b) == pytest.approx(specfun.beta(b, a), rel=1e-13)


def test_riemann_zeta():
    assert specfun.riemann_zeta(2) == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
    assert specfun.riemann_zeta(4) == pytest.approx(math.pi ** 4 / 90, rel=1e-15)
    assert specfun.riemann_zeta(3) == pytest.approx(ZETA_3, rel=1e-14)
    with pytest.raises(DomainError):
        specfun.riemann_zeta(1.0)


def bernoulli(n):
    """Exact B_n (Akiyama-Tanigawa)."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


@pytest.mark.parametrize("k", range(1, 9))
def test_zeta_even_bernoulli(k):
    b = abs(bernoulli(2 * k))
    exact = float(b / (2 * math.factorial(2 * k))) * (2 * math.pi) ** (2 * k)
    assert specfun.riemann_zeta(2 * k) == pytest.approx(exact, rel=1e-12)


def test_gen_binomial_values():
    assert all(specfun.gen_binomial(n, 1) == pytest.approx(1.0) for n in range(20))
    assert specfun.gen_binomial(3, 2) == pytest.approx(4.0, rel=1e-14)
    assert specfun.gen_binomial(2, 2.5) == pytest.approx(4.375, rel=1e-14)
    with pytest.raises(DomainError):
        specfun.gen_binomial(2, 0.0)
    with pytest.raises(DomainError):
        specfun.gen_binomial(-1, 2.0)


@given(st.integers(0, 500), st.floats(0.01, 20))
def test_gen_binomial_recurrence(n, lam):
    lhs = specfun.gen_binomial(n + 1, lam)
    rhs = specfun.gen_binomial(n, lam) * (n + lam) / (n + 1)
    assert lhs == pytest.approx(rhs, rel=1e-11)


def test_modified_zeta_oracles():
    assert specfun.modified_zeta(2, 1, 1).value == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
    assert specfun.modified_zeta(7, 2, 2).value == pytest.approx(MZ_7_2_2, rel=1e-14)
    assert specfun.modified_zeta(4.5, 0.7, 2.5).value == pytest.approx(MZ_4P5_0P7_2P5, rel=1e-14)
    assert specfun.modified_zeta(3, 1, 0.5).value == pytest.approx(MZ_3_1_0P5, rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.2, 12), st.floats(0.1, 10))
def test_modified_zeta_hurwitz(s, a):
    res = specfun.modified_zeta(s, a, 1.0)
    assert res.value == pytest.approx(float(special.zeta(s, a)), rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.1, 6), st.floats(0.1, 5), st.floats(0.05, 8))
def test_modified_zeta_result_invariants(lam, a, excess):
    res = specfun.modified_zeta(lam + excess, a, lam)
    assert res.value > 0
    assert res.terms_used >= 1
    assert res.tail_bound >= 0


def test_modified_zeta_divergent():
    with pytest.raises(DomainError, match="s > lambda"):
        specfun.modified_zeta(2.0, 1.0, 2.0)
    with pytest.raises(DomainError):
        specfun.modified_zeta(3.0, 0.0, 1.0)


def test_log_modified_zeta_consistent():
    log_value, terms, rel = specfun.log_modified_zeta(7.0, 2.0, 2.0)
    assert math.exp(log_value) == pytest.approx(MZ_7_2_2, rel=1e-14)
    assert terms >= 1 and rel >= 0
    # far below the double range, still representable as a log
    log_small, _, _ = specfun.log_modified_zeta(800.0, 3.0, 2.0)
    assert log_small == pytest.approx(-800.0 * math.log(3.0), rel=1e-12)


def test_log_gamma_ratio_large_argument():
    t = np.array([3.0, 25.0, 1e4, 1e12])
    with mpmath.workdps(40):
        expected = [float(mpmath.loggamma(mpmath.mpf(v) + 0.5) - mpmath.loggamma(mpmath.mpf(v) + 0.2))
                    for v in t]
    assert specfun.log_gamma_ratio(t, 0.5, 0.2) == pytest.approx(expected, rel=1e-13)


def test_q_exponential_values():
    assert specfun.q_exponential(0.5, 2) == pytest.approx(2.0)
    assert specfun.q_exponential(1, 0.5) == pytest.approx(2.25)
    assert specfun.q_exponential(0.7, 1.0) == pytest.approx(math.exp(0.7), rel=1e-15)
    # clamp to zero past the cut-off
    assert specfun.q_exponential(-3.0, 0.5) == 0.0


@pytest.mark.parametrize("lam", [1 - 1e-6, 1 + 1e-6, 1 + 5e-10])
def test_q_exponential_limit(lam):
    x = np.linspace(-2, 2, 81)
    e = np.exp(x)
    assert np.all(np.abs(specfun.q_exponential(x, lam) - e) <= 1e-4 * e)
