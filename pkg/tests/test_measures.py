import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fisher_renyi.density import (BlackbodySpec, GenGaussianSpec, StepDensity, affine, blackbody, gaussian,
                                  gen_gaussian, step_model, uniform)
from fisher_renyi.errors import DomainError
from fisher_renyi.measures import (ParamPair, classic_fisher, disequilibrium, fisher_biparam,
                                   fisher_biparam_estimate, fisher_total_variation, power_integral,
                                   renyi_entropy, renyi_entropy_estimate, renyi_power, shannon_entropy,
                                   total_variation_power)

# reduced d=3 blackbody Shannon entropy, mpmath quadrature, frozen
SHANNON_BB3 = 2.0365478034341686661


def gaussian_renyi(sigma2, lam):
    return 0.5 * math.log(2 * math.pi * sigma2) + math.log(lam) / (2 * (lam - 1))


@pytest.mark.parametrize("sigma2", [0.5, 1.0, 4.0])
def test_gaussian_entropies(sigma2):
    rho = gaussian(sigma2)
    assert shannon_entropy(rho).value == pytest.approx(0.5 * math.log(2 * math.pi * math.e * sigma2), rel=1e-12)
    for lam in (0.5, 2.0, 3.5):
        assert renyi_entropy(rho, lam) == pytest.approx(gaussian_renyi(sigma2, lam), rel=1e-11)
    assert disequilibrium(rho) == pytest.approx(1 / (2 * math.sqrt(math.pi * sigma2)), rel=1e-12)
    assert classic_fisher(rho) == pytest.approx(1 / sigma2, rel=1e-11)


def test_blackbody_shannon():
    assert shannon_entropy(blackbody(BlackbodySpec(3))).value == pytest.approx(SHANNON_BB3, rel=1e-11)


def test_shannon_branch():
    rho = gaussian(1.0)
    assert renyi_entropy(rho, 1.0) == shannon_entropy(rho).value
    assert renyi_entropy(rho, 1 + 1e-7) == shannon_entropy(rho).value
    with pytest.raises(DomainError):
        renyi_entropy(rho, 0.0)


def test_renyi_power_of_uniform_is_length():
    for lam in (0.5, 1.0, 2.0, 7.0):
        assert renyi_power(uniform(0, 3), lam) == pytest.approx(3.0, rel=1e-13)


@settings(max_examples=20, deadline=None)
@given(st.floats(0.3, 5.0), st.floats(0.1, 10), st.floats(-20, 20))
def test_renyi_power_scales_with_length(lam, a, b):
    rho = gen_gaussian(GenGaussianSpec(2, 0.9))
    n0 = renyi_power(rho, lam)
    assert renyi_power(affine(rho, a, b), lam) == pytest.approx(n0 / a, rel=1e-9)


def test_renyi_error_estimate_is_small():
    est = renyi_entropy_estimate(blackbody(BlackbodySpec(4)), 2.5)
    assert 0 <= est.error < 1e-10


def test_power_integral_singular_edge():
    # G_{2,3} vanishes like r^(1/2) at its edges; rho^0.8 stays integrable
    rho = gen_gaussian(GenGaussianSpec(2, 3))
    assert power_integral(rho, 1.0).value == pytest.approx(1.0, abs=1e-11)


def test_fisher_standard_gaussian():
    for sigma2 in (0.5, 1.0, 4.0):
        phi = fisher_biparam(gaussian(sigma2), ParamPair(2, 1))
        assert phi ** 2 == pytest.approx(1 / sigma2, rel=1e-10)


def test_fisher_scaling():
    # phi_{p,lam} scales like one over a length
    rho = blackbody(BlackbodySpec(3))
    for p, lam in [(2, 2), (3, 1.5), (1.5, 1.2)]:
        base = fisher_biparam(rho, ParamPair(p, lam))
        assert fisher_biparam(affine(rho, 3.5, 2.0), ParamPair(p, lam)) == pytest.approx(3.5 * base, rel=1e-9)


def test_fisher_sup_branch():
    # p = 1: sup |rho^(lam-2) rho'|; for N(0,1) at lam = 1 it is unbounded
    with pytest.raises(DomainError):
        fisher_biparam(gaussian(1.0), ParamPair(1, 1))
    # G_{1,2} = a/(1+|x|)^... has |rho^(0) rho'| maximal at the centre
    rho = gen_gaussian(GenGaussianSpec(2, 2))
    est = fisher_biparam_estimate(rho, ParamPair(1, 2))
    assert est.value > 0 and est.error == 0.0


def test_fisher_rejects_infinite_p():
    with pytest.raises(DomainError):
        fisher_biparam(gaussian(1.0), ParamPair(math.inf, 2))


def test_fisher_divergent_reported():
    with pytest.raises(DomainError, match="diverges|unbounded"):
        fisher_biparam(blackbody(BlackbodySpec(3)), ParamPair(1.2, 0.5))


def test_total_variation_uniform():
    # two jumps of height (1/L)^lam
    for lam in (0.5, 1.0, 2.0):
        tv = total_variation_power(uniform(0, 2), lam).value
        assert tv == pytest.approx(2 * 0.5 ** lam / lam, rel=1e-14)


def test_total_variation_steps():
    sd = StepDensity((0, 1, 2, 3), (0.2, 0.5, 0.3))
    tv = total_variation_power(step_model(sd), 1.0).value
    assert tv == pytest.approx(1.0, rel=1e-14)  # 0.2 + 0.3 + 0.2 + 0.3
    assert fisher_total_variation(step_model(sd), 2.0) == pytest.approx(
        math.sqrt((2 * 0.5 ** 2) / 2), rel=1e-14)


def test_total_variation_smooth_density():
    # a unimodal smooth density rises and falls by its peak value
    rho = gaussian(1.0)
    peak = float(rho(0.0))
    assert total_variation_power(rho, 1.0).value == pytest.approx(2 * peak, rel=1e-11)
    assert total_variation_power(rho, 2.0).value == pytest.approx(peak ** 2, rel=1e-11)
    with pytest.raises(DomainError):
        total_variation_power(rho, 0.0)


def test_param_pair():
    assert ParamPair(2, 1).q == 2
    assert ParamPair(1, 1).q == math.inf
    assert ParamPair(math.inf, 1).q == 1
    assert ParamPair(3, 1).q == pytest.approx(1.5)
    with pytest.raises(DomainError):
        ParamPair(0.5, 1)


def test_vectorized_density_call():
    rho = gaussian(2.0)
    x = np.linspace(-1, 1, 7)
    assert rho(x).shape == x.shape
