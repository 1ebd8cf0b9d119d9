import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fisher_renyi.density import (BlackbodySpec, DensityModel, GenGaussianSpec, Segment, StepDensity,
                                  Support, affine, blackbody, blackbody_mode, blackbody_pdf,
                                  blackbody_reduced_pdf, blackbody_reduced_score, gaussian, gen_gaussian,
                                  gen_gaussian_pdf, grid_model, load_grid_csv, load_step_csv,
                                  permute_heights, replicate, step_model, step_pdf, uniform)
from fisher_renyi.errors import CompositionError, DomainError

# Wien peaks (root of d(1 - e^-x) = x), mpmath, frozen
MODES = {2: 1.5936242600400400923, 3: 2.8214393721220788934, 4: 3.9206903948728863436}


@pytest.mark.parametrize("d", [2, 3, 4])
def test_blackbody_mode(d):
    assert blackbody_mode(d) == pytest.approx(MODES[d], rel=1e-13)


def test_blackbody_mode_domain():
    with pytest.raises(DomainError):
        blackbody_mode(1.0)


@pytest.mark.parametrize("d", [1.5, 3, 4.5, 8])
def test_blackbody_normalized(d):
    assert blackbody(BlackbodySpec(d)).normalization() == pytest.approx(1.0, abs=1e-12)


def test_blackbody_spec_validation():
    with pytest.raises(DomainError):
        BlackbodySpec(1.0)
    with pytest.raises(DomainError):
        BlackbodySpec(3, theta=0.0)


def test_blackbody_pdf_scaling():
    nu = np.array([0.5, 2.0, 30.0])
    spec = BlackbodySpec(3, theta=250.0)
    assert blackbody_pdf(nu * 250.0, spec) == pytest.approx(blackbody_reduced_pdf(nu, 3) / 250.0, rel=1e-14)
    with pytest.raises(DomainError):
        blackbody_pdf(np.array([0.0]), spec)


def test_reduced_pdf_values():
    # x^3/(e^x - 1) / (6 zeta(4)) at x = 1
    expected = 1.0 / math.expm1(1.0) / (math.pi ** 4 / 15)
    assert float(blackbody_reduced_pdf(1.0, 3)) == pytest.approx(expected, rel=1e-14)
    assert float(blackbody_reduced_pdf(-1.0, 3)) == 0.0
    # no overflow far in the tail
    assert float(blackbody_reduced_pdf(1e4, 3)) == 0.0


def test_reduced_score_matches_derivative():
    x = np.array([0.3, 1.0, 2.8, 7.0, 40.0])
    h = 1e-6 * x
    num = (np.log(blackbody_reduced_pdf(x + h, 3)) - np.log(blackbody_reduced_pdf(x - h, 3))) / (2 * h)
    assert blackbody_reduced_score(x, 3) == pytest.approx(num, rel=1e-7)
    assert float(blackbody_reduced_score(MODES[3], 3)) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("p, lam", [(1, 1), (2, 1), (2, 0.7), (3, 1.5), (1.5, 2), (5, 3), (2, 0.9)])
def test_gen_gaussian_normalized(p, lam):
    assert gen_gaussian(GenGaussianSpec(p, lam)).normalization() == pytest.approx(1.0, abs=1e-10)


def test_gen_gaussian_limits():
    # lambda = 1, p = 2: a standard normal with variance 1/2
    x = np.linspace(-3, 3, 13)
    assert gen_gaussian_pdf(x, GenGaussianSpec(2, 1)) == pytest.approx(np.exp(-x * x) / math.sqrt(math.pi))
    spec = GenGaussianSpec(2, 3)
    assert spec.half_width == pytest.approx(2 ** -0.5)
    assert float(gen_gaussian_pdf(0.8, spec)) == 0.0
    assert math.isinf(GenGaussianSpec(2, 0.8).half_width)


def test_gen_gaussian_validation():
    with pytest.raises(DomainError):
        GenGaussianSpec(0.5, 1)
    with pytest.raises(DomainError):
        GenGaussianSpec(2, -1.5)


def test_gen_gaussian_infinite_p_is_uniform():
    rho = gen_gaussian(GenGaussianSpec(math.inf, 2))
    assert rho.support == Support(-1.0, 1.0)
    assert float(rho(0.3)) == 0.5


def test_gaussian():
    rho = gaussian(4.0, mean=1.0)
    assert float(rho(1.0)) == pytest.approx(1 / math.sqrt(8 * math.pi))
    assert float(rho.pdf_score(3.0)) == pytest.approx(-0.5)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 20), st.floats(-10, 10))
def test_affine_preserves_mass(a, b):
    rho = affine(gaussian(1.0), a, b)
    assert rho.normalization() == pytest.approx(1.0, abs=1e-10)


def test_affine_score_and_support():
    base = blackbody(BlackbodySpec(3))
    moved = affine(base, 2.0, -5.0)
    assert moved.support.lower == -5.0
    x = np.array([-4.0, -3.0, 0.0])
    assert moved.pdf_score(x) == pytest.approx(2.0 * base.pdf_score(2.0 * (x + 5.0)))
    with pytest.raises(DomainError):
        affine(base, -1.0)


def test_step_density():
    sd = StepDensity((0, 1, 3), (0.5, 0.25))
    assert step_pdf(np.array([-1, 0.5, 2, 3.5]), sd) == pytest.approx([0, 0.5, 0.25, 0])
    assert sd.widths == (1.0, 2.0)
    assert step_model(sd).normalization() == pytest.approx(1.0)
    with pytest.raises(DomainError):
        StepDensity((0, 1), (0.5,))
    with pytest.raises(DomainError):
        StepDensity((0, 1, 1), (1.0, 0.0))
    with pytest.raises(DomainError):
        StepDensity((0, 1), (-1.0,))


def test_permute_heights_keeps_widths():
    sd = StepDensity((0, 1, 3, 3.5), (0.5, 0.125, 0.5))
    out = permute_heights(sd, [2, 0, 1])
    assert out.widths == pytest.approx((0.5, 1.0, 2.0))
    assert out.heights == pytest.approx((0.5, 0.5, 0.125))
    with pytest.raises(DomainError):
        permute_heights(sd, [0, 0, 1])


def test_uniform():
    rho = uniform(2, 6)
    assert float(rho(3.0)) == 0.25
    assert rho.support == Support(2.0, 6.0)


def test_replicate():
    base = gen_gaussian(GenGaussianSpec(2, 1.5))
    rep = replicate(base, 3, [0.0, 10.0, 20.0])
    assert rep.normalization() == pytest.approx(1.0, abs=1e-10)
    assert len(rep.segments) == 3 * len(base.segments)
    with pytest.raises(CompositionError):
        replicate(base, 2, [0.0, 0.1])
    with pytest.raises(CompositionError):
        replicate(gaussian(1.0), 2, [0.0, 100.0])
    with pytest.raises(CompositionError):
        replicate(base, 2, [0.0])


def test_unnormalized_density_rejected():
    with pytest.raises(DomainError, match="integrates to"):
        DensityModel(pdf=lambda x: np.where((x > 0) & (x < 1), 2.0, 0.0), segments=(Segment(0, 1),))


def test_overlapping_segments_rejected():
    with pytest.raises(CompositionError):
        DensityModel(pdf=lambda x: x, segments=(Segment(0, 2), Segment(1, 3)), check=False)


def test_grid_model_renormalizes(tmp_path):
    x = np.linspace(0, 2, 5)
    y = np.array([0.0, 1.0, 2.0, 1.0, 0.0])
    rho = grid_model(x, y)
    assert rho.normalization() == pytest.approx(1.0, abs=1e-12)
    path = tmp_path / "g.csv"
    path.write_text("x,pdf\n" + "".join(f"{a},{b}\n" for a, b in zip(x, y)))
    assert float(load_grid_csv(path)(1.0)) == pytest.approx(float(rho(1.0)))
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b\n0,1\n1,1\n")
    with pytest.raises(DomainError):
        load_grid_csv(bad)


def test_grid_model_validation():
    with pytest.raises(DomainError):
        grid_model([0, 1], [1, -1])
    with pytest.raises(DomainError):
        grid_model([1, 0], [1, 1])
    with pytest.raises(DomainError):
        grid_model([0, 1], [0, 0])


def test_load_step_csv(tmp_path):
    path = tmp_path / "s.csv"
    path.write_text("edge,height\n0,2\n1,6\n2,\n")
    sd = load_step_csv(path)
    assert sd.edges == (0.0, 1.0, 2.0)
    assert sd.heights == pytest.approx((0.25, 0.75))
