import math

import pytest
from hypothesis import given, settings, strategies as st

from fisher_renyi import blackbody as bb
from fisher_renyi.complexity import complexity
from fisher_renyi.density import BlackbodySpec, blackbody
from fisher_renyi.errors import DomainError
from fisher_renyi.measures import ParamPair, fisher_biparam, renyi_entropy
from fisher_renyi.specfun import riemann_zeta

# mpmath (30 digits), frozen
A_R = {
    (2.0, 3): 0.15355307403660025407,
    (2.5, 4): 0.052712300009436024182,
    (3.0, 5): 0.017229255413867509405,
    (0.7, 3): 1.9001879747414788751,
    (1.2, 4): 0.65448511474386952067,
}
A_F = {
    (2.0, 2.0, 3): 0.0032576847106368401865,
    (2.0, 2.0, 4): 0.0018328123217206949151,
    (1.5, 1.5, 4): 0.0039997310692748203521,
    (3.0, 1.5, 4): 0.043784272412079838003,
    (5.0, 0.9, 3): 0.58072247472022134026,
    (2.0, 1.0, 3): 0.55531326766307405859,
}
I_2_1_3 = 3.6061707094787828562  # 3 zeta(3)
C = {
    (2.0, 2.0, 3): 1.139769074845457691,
    (3.0, 1.5, 4): 1.1349247775288000663,
    (2.0, 1.0, 3): 1.3819531589626070244,
    (5.0, 0.9, 3): 1.2183854564230918174,
    (1.5, 2.5, 5): 1.1383363587285100629,
    (1.0, 2.0, 3): 1.5483489773131018847,
    (math.inf, 2.0, 3): 1.4254776171979059231,
}
SHANNON_3 = 2.0365478034341686661


@pytest.mark.parametrize("key", sorted(A_R))
def test_a_r_series(key):
    lam, d = key
    assert bb.a_r(lam, d) == pytest.approx(A_R[key], rel=1e-13)
    assert bb.a_r_quadrature(lam, d) == pytest.approx(A_R[key], rel=1e-11)


def test_a_r_domain():
    with pytest.raises(DomainError):
        bb.a_r(0.0, 3)
    with pytest.raises(DomainError):
        bb.a_r(2.0, 1.0)


@pytest.mark.parametrize("key", sorted(A_F))
def test_a_f_quadrature(key):
    assert bb.a_f_quadrature(*key) == pytest.approx(A_F[key], rel=1e-11)


@pytest.mark.parametrize("key", [(2.0, 2.0, 3), (2.0, 2.0, 4), (2.0, 1.0, 3)])
def test_a_f_closed(key):
    assert bb.closed_form_applies(*key)
    assert bb.a_f_closed(*key) == pytest.approx(A_F[key], rel=1e-13)


def test_standard_case():
    assert bb.a_f_standard(3) == pytest.approx(riemann_zeta(3) / (2 * riemann_zeta(4)), rel=1e-15)
    assert bb.a_f_standard(3) == pytest.approx(A_F[(2.0, 1.0, 3)], rel=1e-14)
    for d in (4, 5, 6, 9):
        assert bb.a_f_closed(2, 1, d) == pytest.approx(bb.a_f_standard(d), rel=1e-12)
    with pytest.raises(DomainError):
        bb.a_f_standard(2.0)


def test_i_integral():
    assert bb.i_integral(2, 1, 3) == pytest.approx(I_2_1_3, rel=1e-12)
    assert bb.i_integral(2, 1, 3) == pytest.approx(3 * riemann_zeta(3), rel=1e-12)
    with pytest.raises(DomainError, match="λp > d/\\(d−1\\)"):
        bb.i_integral(2, 0.7, 3)
    with pytest.raises(DomainError):
        bb.i_integral(1, 2, 3)


@pytest.mark.parametrize("args", [(3.0, 1.5, 4), (2.0, 1.25, 3), (2.0, 2.0, 3.5)])
def test_closed_form_gating(args):
    # odd or non-integer q, non-integer q*lam, or non-integer d
    assert not bb.closed_form_applies(*args)
    with pytest.raises(DomainError):
        bb.a_f_closed(*args)


@pytest.mark.parametrize("key", sorted(C, key=str))
def test_complexity_values(key):
    assert bb.complexity_analytic(*key) == pytest.approx(C[key], rel=1e-12)


def test_methods_reported():
    assert bb.blackbody_constants(2, 2, 3).method == "closed_form"
    assert bb.blackbody_constants(3, 1.5, 4).method == "quadrature"
    assert bb.blackbody_constants(1, 2, 3).method == "supremum"
    assert bb.blackbody_constants(math.inf, 2, 3).method == "total_variation"
    consts = bb.blackbody_constants(2, 1, 3)
    assert consts.a_r == 1.0 and 0 < consts.rel_error < 1e-10


def test_shannon_and_renyi_constants():
    assert bb.shannon_reduced(3) == pytest.approx(SHANNON_3, rel=1e-13)
    assert bb.renyi_constant(1.0, 3) == bb.shannon_reduced(3)
    assert bb.renyi_constant(2.0, 3) == pytest.approx(-math.log(A_R[(2.0, 3)]), rel=1e-13)


@pytest.mark.parametrize("theta", [1.0, 1e3, 3e-4])
def test_analytic_matches_numeric(theta):
    rho = blackbody(BlackbodySpec(4, theta))
    for p, lam in [(2, 2), (3, 1.5)]:
        assert bb.renyi_analytic(lam, 4, theta) == pytest.approx(renyi_entropy(rho, lam), rel=1e-10)
        assert bb.fisher_analytic(p, lam, 4, theta) == pytest.approx(
            fisher_biparam(rho, ParamPair(p, lam)), rel=1e-9)
        assert complexity(rho, ParamPair(p, lam)).value == pytest.approx(
            bb.complexity_analytic(p, lam, 4), rel=1e-9)


def test_report():
    rep = bb.complexity_report(2, 2, 3, theta=50.0)
    assert rep.path == "analytic"
    assert rep.value == pytest.approx(C[(2.0, 2.0, 3)], rel=1e-13)
    assert rep.value == pytest.approx(rep.k_fr * rep.fisher * rep.n_power, rel=1e-13)
    assert 0 < rep.error_estimate < 1e-10


def test_invalid_region():
    with pytest.raises(DomainError, match="λp > d/\\(d−1\\)"):
        bb.complexity_analytic(1.2, 1.0, 3)


@settings(max_examples=25, deadline=None)
@given(st.floats(1.1, 6), st.floats(0.8, 5), st.sampled_from([2.5, 3, 4, 6]))
def test_complexity_at_least_one(p, lam, d):
    if not lam * p > d / (d - 1) * 1.01:
        return
    assert bb.complexity_analytic(p, lam, d) >= 1.0


def test_dimensional_decrease():
    values = [bb.complexity_analytic(2, 2, d) for d in (3, 4, 5, 6)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_large_dimension_is_finite():
    for d in (40, 200):
        c = bb.complexity_analytic(2, 2, d)
        assert math.isfinite(c) and c > 1
