"""Invariant suite run by ``fisher-renyi verify``.

Each check computes a worst-case deviation (or, for yes/no properties, a
count of violations) and compares it with its own tolerance. ``rel_tol``
is the quadrature tolerance used by the numeric checks; a check's
threshold is never tighter than ``10 * rel_tol``, so a looser integration
setting weakens the suite instead of breaking it.

``inject_fault`` perturbs one library constant for the duration of a run,
to confirm the suite notices.
"""

from __future__ import annotations

import contextlib
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional

import numpy as np
from scipy import special

from . import blackbody as bb
from . import charts, complexity as cx, reference, specfun
from .density import (BlackbodySpec, GenGaussianSpec, StepDensity, affine, blackbody,
                      blackbody_pdf, blackbody_reduced_pdf, gaussian, gen_gaussian,
                      permute_heights, step_model, uniform)
from .measures import (ParamPair, disequilibrium, fisher_biparam, renyi_entropy, renyi_power,
                       shannon_entropy)
from .quadrature import QuadConfig, integrate

FAULTS = ("k_fr", "a_r", "zeta")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    tol: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<34s} worst={self.worst:.3e}  tol={self.tol:.1e}"


def _bernoulli(n):
    """Exact Bernoulli number (Akiyama-Tanigawa); scipy's float recursion drifts by 1e-12."""
    a = [Fraction(0)] * (n + 1)
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
    return a[0]


def _rel(a, b):
    return abs(a - b) / abs(b)


class _Suite:
    def __init__(self, rel_tol: float):
        self.cfg = QuadConfig(abs_tol=1e-15, rel_tol=rel_tol)
        self.floor = 10.0 * rel_tol

    def tol(self, base):
        return max(base, self.floor)

    # specfun ---------------------------------------------------------------
    def binomial_recurrence(self):
        rng = np.random.default_rng(1)
        worst = 0.0
        for _ in range(50):
            n, lam = int(rng.integers(0, 200)), float(rng.uniform(0.1, 6))
            lhs = specfun.gen_binomial(n + 1, lam)
            worst = max(worst, _rel(lhs, specfun.gen_binomial(n, lam) * (n + lam) / (n + 1)))
        return worst, 1e-12

    def hurwitz_agreement(self):
        worst = 0.0
        for s, a in [(2.0, 1.0), (3.5, 0.3), (5.0, 2.5), (1.7, 4.0)]:
            worst = max(worst, _rel(specfun.modified_zeta(s, a, 1.0).value, float(special.zeta(s, a))))
        return worst, 1e-10

    def zeta_even_integers(self):
        worst = 0.0
        for k in range(1, 8):
            b = abs(_bernoulli(2 * k))
            exact = float(b / (2 * math.factorial(2 * k))) * (2 * math.pi) ** (2 * k)
            worst = max(worst, _rel(specfun.riemann_zeta(2 * k), exact))
        return worst, 1e-12

    def q_exponential_limit(self):
        x = np.linspace(-2, 2, 41)
        worst = 0.0
        for lam in (1 - 1e-6, 1 + 1e-6):
            worst = max(worst, float(np.max(np.abs(specfun.q_exponential(x, lam) - np.exp(x)) / np.exp(x))))
        return worst, 1e-4

    # quadrature ------------------------------------------------------------
    def integration_additivity(self):
        f = lambda x: np.exp(-x) * np.cos(x) ** 2
        whole = integrate(f, (0.0, math.inf), self.cfg).value
        worst = 0.0
        for b in (0.3, 1.7, 9.0):
            parts = integrate(f, (0.0, b), self.cfg).value + integrate(f, (b, math.inf), self.cfg).value
            worst = max(worst, _rel(parts, whole))
        return worst, 1e-10

    # density ---------------------------------------------------------------
    def blackbody_temperature_free(self):
        x = np.linspace(0.01, 30, 200)
        worst = 0.0
        for theta in (0.5, 3.0, 1e3):
            lhs = blackbody_pdf(x * theta, BlackbodySpec(3.0, theta))
            rhs = blackbody_reduced_pdf(x, 3.0) / theta
            worst = max(worst, float(np.max(np.abs(lhs - rhs) / rhs)))
        return worst, 1e-13

    def gen_gaussian_support(self):
        worst = 0.0
        spec = GenGaussianSpec(2.0, 2.0)
        outside = gen_gaussian(spec).pdf(np.array([1.0 + 1e-9, 2.0, 50.0]))
        worst = max(worst, float(np.max(np.abs(outside))))
        inside = gen_gaussian(GenGaussianSpec(2.0, 0.8)).pdf(np.array([0.0, 10.0, 1e3]))
        worst = max(worst, 0.0 if np.all(inside > 0) else 1.0)
        return worst, 0.0

    # measures --------------------------------------------------------------
    def renyi_disequilibrium(self):
        worst = 0.0
        for rho in (gaussian(1.3), gen_gaussian(GenGaussianSpec(3.0, 1.5))):
            worst = max(worst, abs(renyi_power(rho, 2.0, self.cfg) * disequilibrium(rho, self.cfg) - 1.0))
        return worst, 1e-8

    def shannon_continuity(self):
        worst = 0.0
        for rho in (gaussian(1.0), gen_gaussian(GenGaussianSpec(3.0, 1.5))):
            s = shannon_entropy(rho, self.cfg).value
            for lam in (1 - 1e-4, 1 + 1e-4):
                worst = max(worst, abs(renyi_entropy(rho, lam, self.cfg) - s))
        return worst, 1e-3

    def gaussian_fisher(self):
        worst = 0.0
        for s2 in (0.5, 1.0, 4.0):
            phi = fisher_biparam(gaussian(s2), ParamPair(2.0, 1.0), self.cfg)
            worst = max(worst, _rel(phi ** 2, 1.0 / s2))
        return worst, 1e-8

    # reference -------------------------------------------------------------
    def k_fr_forms(self):
        worst = 0.0
        for p in np.linspace(1.0, 8.0, 8):
            for lam in np.linspace(0.6, 4.0, 8):
                if not lam > 1.0 / (1.0 + p):
                    continue
                k = reference.k_fr(p, lam)
                worst = max(worst, _rel(reference.k_fr_product_form(p, lam), k))
                if abs(lam - 1.0) > 1e-9:
                    worst = max(worst, _rel(reference.k_fr_algebraic_form(p, lam), k))
        return worst, 1e-12

    def reference_product(self):
        worst = 0.0
        for p, lam in [(1.0, 2.0), (2.0, 1.0), (3.0, 0.5), (math.inf, 1.5), (5.0, 3.0)]:
            c = reference.reference_constants(p, lam)
            worst = max(worst, abs(c.k_fr * c.fisher * c.n_power - 1.0))
        return worst, 1e-12

    def support_half_length(self):
        peak = math.exp(1.0 / math.e)
        worst = max(reference.minimizer_support_half_length(p) - peak for p in (1.0, 2.0, 4.0, 10.0))
        return max(worst, 0.0), 0.0

    # complexity ------------------------------------------------------------
    def minimizer_identity(self):
        worst = 0.0
        for p, lam in [(1.0, 2.0), (2.0, 1.0), (2.0, 2.0), (3.0, 0.7), (5.0, 1.5)]:
            rho = gen_gaussian(GenGaussianSpec(p, lam))
            worst = max(worst, abs(cx.complexity(rho, ParamPair(p, lam), self.cfg).value - 1.0))
        return worst, 1e-6

    def lower_bound(self):
        worst = 0.0
        rhos = [gaussian(1.0), gen_gaussian(GenGaussianSpec(3.0, 1.5)), blackbody(BlackbodySpec(3.0, 1.0))]
        for rho, (p, lam) in itertools.product(rhos, [(2.0, 2.0), (3.0, 1.5), (1.5, 3.0)]):
            worst = max(worst, 1.0 - cx.complexity(rho, ParamPair(p, lam), self.cfg).value)
        return max(worst, 0.0), 1e-6

    def affine_invariance(self):
        rho = gen_gaussian(GenGaussianSpec(3.0, 1.5))
        params = ParamPair(2.0, 2.0)
        base = cx.complexity(rho, params, self.cfg).value
        worst = 0.0
        for a, b in [(0.1, 0.0), (7.3, 0.0), (1.0, -5.0), (1.0, 11.0)]:
            worst = max(worst, _rel(cx.complexity(affine(rho, a, b), params, self.cfg).value, base))
        return worst, 1e-6

    def replication_law(self):
        # edge exponent 2 keeps the lambda = 1 Fisher integral finite
        rho = gen_gaussian(GenGaussianSpec(2.0, 1.5))
        worst = 0.0
        for n, lam in [(2, 1.0), (3, 2.0)]:
            ratio = cx.replication_factor_check(rho, n, lam, 2.0, self.cfg)
            worst = max(worst, _rel(ratio, n ** (1.0 / lam)))
        return worst, 1e-4

    def uniform_infinity(self):
        worst = max(abs(cx.complexity_infty(uniform(), lam, self.cfg).value - 1.0) for lam in (0.5, 1.0, 2.0))
        return worst, 1e-9

    def monotone_rearrangement(self):
        # violations of: monotone arrangements attain the minimum over all 24
        # permutations, and sorting heights never increases C
        sd = StepDensity([0.0, 1.0, 2.0, 3.0, 4.0], [0.1, 0.4, 0.3, 0.2])
        values = {perm: cx.complexity_infty(step_model(permute_heights(sd, perm)), 2.0, self.cfg).value
                  for perm in itertools.permutations(range(4))}
        best = min(values.values())
        order = np.argsort(sd.heights)
        monotone = [tuple(order), tuple(order[::-1])]
        violations = sum(values[m] > best * (1 + 1e-12) for m in monotone)
        rng = np.random.default_rng(3)
        for _ in range(6):
            n = int(rng.integers(4, 7))
            heights = rng.uniform(0.1, 1.0, n)
            widths = rng.uniform(0.5, 2.0, n)
            heights /= float(np.dot(heights, widths))
            step = StepDensity(np.concatenate([[0.0], np.cumsum(widths)]), heights)
            for lam in (1.0, 2.0, 3.0):
                c = cx.complexity_infty(step_model(step), lam, self.cfg).value
                c_sorted = cx.complexity_infty(
                    step_model(permute_heights(step, np.argsort(-heights))), lam, self.cfg).value
                violations += c_sorted > c * (1 + 1e-12)
        return float(violations), 0.0

    # blackbody -------------------------------------------------------------
    def a_r_oracle(self):
        worst = 0.0
        for lam, d in itertools.product((2.0, 2.5, 3.0), (3.0, 4.0, 5.0)):
            worst = max(worst, _rel(bb.a_r(lam, d), bb.a_r_quadrature(lam, d)))
        return worst, 1e-10

    def a_f_oracle(self):
        worst = 0.0
        for d in (3.0, 4.0, 5.0, 6.0):
            worst = max(worst, _rel(bb.a_f_closed(2.0, 1.0, d), bb.a_f_standard(d)),
                        _rel(bb.a_f_closed(2.0, 1.0, d), bb.a_f_quadrature(2.0, 1.0, d)))
        for d in (3.0, 4.0):
            worst = max(worst, _rel(bb.a_f_closed(2.0, 2.0, d), bb.a_f_quadrature(2.0, 2.0, d)))
        return worst, 1e-8

    def temperature_independence(self):
        worst = 0.0
        for p, lam, d in [(2.0, 2.0, 3.0), (3.0, 1.5, 4.0)]:
            analytic = bb.complexity_analytic(p, lam, d)
            for theta in (1.0, 1e3):
                numeric = cx.complexity(blackbody(BlackbodySpec(d, theta)), ParamPair(p, lam), self.cfg).value
                worst = max(worst, _rel(numeric, analytic))
        return worst, 1e-6

    def dimensional_decrease(self):
        c = [bb.complexity_analytic(2.0, 2.0, d) for d in (3.0, 4.0, 5.0, 6.0)]
        return float(sum(b >= a for a, b in zip(c, c[1:]))), 0.0

    def constraint_equivalence(self):
        rng = np.random.default_rng(7)
        mismatches = 0
        for _ in range(200):
            p, lam, d = rng.uniform(1, 8), rng.uniform(0.2, 4), rng.uniform(1.05, 10)
            if lam * p <= 1:
                continue
            mismatches += (lam * p > d / (d - 1)) != (d > lam * p / (lam * p - 1))
        return float(mismatches), 0.0

    def large_lambda_trend(self):
        violations = 0
        for p in (1.2, 2.0, 5.0):
            c = [bb.complexity_analytic(p, lam, 3.0) for lam in (10.0, 20.0, 40.0)]
            violations += sum(b >= a for a, b in zip(c, c[1:])) + sum(v < 1.0 for v in c)
        return float(violations), 0.0

    def chart_minimum(self):
        p, lam, _ = charts.refine_extremum("min", 2.2, 1.75, 3.0, (2.0, 2.4), (1.55, 1.95))
        return max(abs(p - 2.20), abs(lam - 1.74)), 0.1


_CHECKS = [
    ("specfun.binomial_recurrence", "binomial_recurrence"),
    ("specfun.hurwitz_agreement", "hurwitz_agreement"),
    ("specfun.zeta_even_integers", "zeta_even_integers"),
    ("specfun.q_exponential_limit", "q_exponential_limit"),
    ("quadrature.additivity", "integration_additivity"),
    ("density.blackbody_temperature_free", "blackbody_temperature_free"),
    ("density.gen_gaussian_support", "gen_gaussian_support"),
    ("measures.renyi_disequilibrium", "renyi_disequilibrium"),
    ("measures.shannon_continuity", "shannon_continuity"),
    ("measures.gaussian_fisher", "gaussian_fisher"),
    ("reference.k_fr_forms", "k_fr_forms"),
    ("reference.constants_product", "reference_product"),
    ("reference.support_half_length", "support_half_length"),
    ("complexity.minimizer_identity", "minimizer_identity"),
    ("complexity.lower_bound", "lower_bound"),
    ("complexity.affine_invariance", "affine_invariance"),
    ("complexity.replication_law", "replication_law"),
    ("complexity.uniform_infinity", "uniform_infinity"),
    ("complexity.monotone_rearrangement", "monotone_rearrangement"),
    ("blackbody.a_r_oracle", "a_r_oracle"),
    ("blackbody.a_f_oracle", "a_f_oracle"),
    ("blackbody.temperature_independence", "temperature_independence"),
    ("blackbody.dimensional_decrease", "dimensional_decrease"),
    ("blackbody.constraint_equivalence", "constraint_equivalence"),
    ("blackbody.large_lambda_trend", "large_lambda_trend"),
    ("blackbody.chart_minimum", "chart_minimum"),
]

CHECK_NAMES = [name for name, _ in _CHECKS]


@contextlib.contextmanager
def inject_fault(name: Optional[str]) -> Iterator[None]:
    """Temporarily corrupt one constant: ``k_fr`` (x 1.001), ``a_r`` (x 1.001) or ``zeta`` (+1e-6)."""
    if name is None:
        yield
        return
    if name not in FAULTS:
        raise ValueError(f"unknown fault {name!r}; choose from {', '.join(FAULTS)}")
    saved = []
    # memoized constants must not leak into or out of the faulty run
    caches = (bb._log_a_r, bb._shannon_reduced, bb._mode)

    def patch(module, attr, wrapper):
        saved.append((module, attr, getattr(module, attr)))
        setattr(module, attr, wrapper(getattr(module, attr)))

    if name == "k_fr":
        for module in (reference, cx, bb, charts):
            patch(module, "k_fr", lambda f: (lambda p, lam: 1.001 * f(p, lam)))
    elif name == "a_r":
        patch(bb, "_log_a_r", lambda f: (lambda lam, d: (f(lam, d)[0] + math.log(1.001), f(lam, d)[1])))
    else:
        patch(specfun, "riemann_zeta", lambda f: (lambda s: f(s) + 1e-6))
    for cache in caches:
        cache.cache_clear()
    try:
        yield
    finally:
        for module, attr, original in reversed(saved):
            setattr(module, attr, original)
        for cache in caches:
            cache.cache_clear()


def run_checks(rel_tol: float = 1e-11, fault: Optional[str] = None,
               only: Optional[List[str]] = None,
               report: Optional[Callable[[CheckResult], None]] = None) -> List[CheckResult]:
    """Run the suite (or the named subset) and return one result per check."""
    suite = _Suite(rel_tol)
    results = []
    with inject_fault(fault):
        for name, method in _CHECKS:
            if only and name not in only:
                continue
            try:
                worst, base = getattr(suite, method)()
                tol = suite.tol(base) if base > 0 else base
                res = CheckResult(name, bool(worst <= tol), float(worst), tol)
            except (ArithmeticError, ValueError) as exc:
                res = CheckResult(f"{name} ({type(exc).__name__}: {exc})", False, math.inf, 0.0)
            results.append(res)
            if report:
                report(res)
    return results


def summary(results: List[CheckResult]) -> Dict[str, int]:
    passed = sum(r.passed for r in results)
    return {"passed": passed, "failed": len(results) - passed}
