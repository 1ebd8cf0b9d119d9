"""Closed-form and series constants of the d-dimensional blackbody density.

Everything works in the reduced frequency ``x = nu / theta``, where the
density is ``x^d / (Gamma(d+1) zeta(d+1) (e^x - 1))``. The temperature then
enters only through exact factors: the Renyi entropy shifts by ``log theta``
and the Fisher information scales by ``1/theta``, so the complexity carries no
temperature dependence at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from . import specfun
from .complexity import ComplexityReport, require_valid
from .density import BlackbodySpec, blackbody_log_norm, blackbody_mode, blackbody_reduced_pdf
from .errors import DomainError
from .measures import SHANNON_BRANCH_TOL, ParamPair
from .quadrature import QuadConfig, integrate, sample_points
from .reference import conjugate, k_fr

_CFG = QuadConfig(abs_tol=1e-300, rel_tol=1e-12)
_INT_TOL = 1e-9
_ROUNDING = 1e-14  # relative rounding allowance for a closed-form evaluation


@dataclass(frozen=True)
class BlackbodyConstants:
    a_r: float
    a_f: float
    i_integral: float
    c_value: float
    method: str  # how A_F was obtained: "closed_form", "quadrature" or "supremum"
    rel_error: float = 0.0  # propagated relative error bound on c_value


# ---------------------------------------------------------------------------
# Renyi part
# ---------------------------------------------------------------------------

def log_a_r(lam: float, d: float) -> float:
    """``log A_R(lam, d)``, from the modified zeta series."""
    return _log_a_r(lam, d)[0]


@lru_cache(maxsize=4096)
def _log_a_r(lam, d):
    """``(log A_R, relative truncation bound)``."""
    if not lam > 0:
        raise DomainError(f"A_R needs lambda > 0, got {lam}")
    if not d > 1:
        raise DomainError(f"A_R needs d > 1, got {d}")
    s = lam * d + 1.0
    log_zeta, _, rel_bound = specfun.log_modified_zeta(s, lam, lam)
    return math.lgamma(s) + log_zeta - lam * blackbody_log_norm(d), rel_bound


def a_r(lam: float, d: float) -> float:
    """``Gamma(lam d + 1) zeta_lam(lam d + 1, lam) / (Gamma(d+1) zeta(d+1))^lam``.

    Equal to ``int rho~^lam dx`` for the reduced density; extended here to
    real ``lam > 0``.
    """
    return math.exp(log_a_r(lam, d))


def a_r_quadrature(lam: float, d: float) -> float:
    """``int_0^inf x^(lam d) (e^x - 1)^-lam dx / (Gamma(d+1) zeta(d+1))^lam`` by quadrature."""
    def f(x):
        return np.exp(lam * d * np.log(x) - lam * (x + np.log(-np.expm1(-x))))
    val = integrate(f, (0.0, math.inf), _CFG, lower_power=lam * (d - 1.0), scale=d).value
    return val * math.exp(-lam * blackbody_log_norm(d))


def shannon_reduced(d: float) -> float:
    """Shannon entropy of the reduced density (the lambda -> 1 limit)."""
    return _shannon_reduced(d).value


@lru_cache(maxsize=256)
def _shannon_reduced(d):
    log_norm = blackbody_log_norm(d)

    def f(x):
        log_rho = d * np.log(x) - x - np.log(-np.expm1(-x)) - log_norm
        return -np.exp(log_rho) * log_rho
    return integrate(f, (0.0, math.inf), _CFG, lower_power=d - 1.0, scale=d)


def _renyi_with_error(lam, d):
    """``(R_lam, absolute error)`` of the reduced density."""
    if abs(lam - 1.0) < SHANNON_BRANCH_TOL:
        res = _shannon_reduced(d)
        return res.value, res.error_estimate
    log_ar, rel_bound = _log_a_r(lam, d)
    return log_ar / (1.0 - lam), (rel_bound + _ROUNDING * max(1.0, abs(log_ar))) / abs(1.0 - lam)


def renyi_constant(lam: float, d: float) -> float:
    """``R_lam`` of the reduced density: ``log A_R / (1 - lam)``, or Shannon at lam = 1."""
    if abs(lam - 1.0) < SHANNON_BRANCH_TOL:
        return shannon_reduced(d)
    return log_a_r(lam, d) / (1.0 - lam)


def renyi_analytic(lam: float, d: float, theta: float = 1.0) -> float:
    BlackbodySpec(d, theta)
    return renyi_constant(lam, d) + math.log(theta)


# ---------------------------------------------------------------------------
# Fisher part
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _mode(d: float) -> float:
    return blackbody_mode(d)


def _log_kernel(x, d):
    """``log |d (e^x - 1) - x e^x|`` without overflow."""
    return x + np.log(np.abs(-d * np.expm1(-x) - x))


def log_i_integral(q: float, lam: float, d: float):
    """``(log I, relative error)`` for the Fisher integral ``I(q, lam, d)``."""
    if not q > 1 or math.isinf(q):
        raise DomainError(f"I(q, lambda, d) needs 1 < q < inf, got q={q}")
    alpha = q * lam - q + 1.0
    near_zero = (d - 1.0) * alpha - q
    if not near_zero > -1.0:
        raise DomainError(
            f"I(q={q:g}, lambda={lam:g}, d={d:g}) diverges at 0: need {near_zero + 1:g} > 0, "
            "i.e. λp > d/(d−1)")
    x_power = q * (d * lam - d - 1.0) + d
    e_power = q * lam + 1.0

    def log_f(x):
        with np.errstate(divide="ignore"):
            return x_power * np.log(x) - e_power * (x + np.log(-np.expm1(-x))) + q * _log_kernel(x, d)

    root = _mode(d)
    xs = sample_points((0.0, math.inf), 64, points=(root,), scale=d)
    shift = float(np.max(log_f(xs[xs != root])))
    f = lambda x: np.exp(log_f(x) - shift)
    res = integrate(f, (0.0, math.inf), _CFG, points=(root,), lower_power=near_zero, scale=d)
    if not res.value > 0:
        raise DomainError("I(q, lambda, d) evaluated to a non-positive value")
    return shift + math.log(res.value), res.error_estimate / res.value


def i_integral(q: float, lam: float, d: float) -> float:
    return math.exp(log_i_integral(q, lam, d)[0])


def _alpha(p, lam):
    return conjugate(p) * (lam - 1.0) + 1.0


def a_f_quadrature(p: float, lam: float, d: float) -> float:
    """``I(q, lam, d) / (Gamma(d+1) zeta(d+1))^alpha`` with ``alpha = q lam - q + 1``."""
    q = conjugate(p)
    log_i, _ = log_i_integral(q, lam, d)
    return math.exp(log_i - _alpha(p, lam) * blackbody_log_norm(d))


def _exp(v):
    """``exp`` saturating to ``inf``; I alone can exceed the double range at large d."""
    return math.exp(v) if v < 709.0 else math.inf


def _near_int(v):
    return math.isfinite(v) and abs(v - round(v)) < _INT_TOL


def closed_form_applies(p: float, lam: float, d: float) -> bool:
    q = conjugate(p)
    if not (_near_int(q) and round(q) % 2 == 0 and _near_int(q * lam) and _near_int(d)):
        return False
    return lam * p > 1 and d > lam * p / (lam * p - 1.0)


def a_f_closed(p: float, lam: float, d: float) -> float:
    """Finite binomial sum of modified zeta values, valid for even ``q``,
    integer ``q lam`` and integer ``d > lam p / (lam p - 1)``."""
    return math.exp(_log_a_f_closed(p, lam, d)[0])


def _log_a_f_closed(p, lam, d):
    """``(log A_F, relative error bound)``; the bound accounts for cancellation in the sum."""
    q = conjugate(p)
    if not (_near_int(q) and round(q) % 2 == 0):
        raise DomainError(f"closed form needs an even q, got q={q:g}")
    if not _near_int(q * lam):
        raise DomainError(f"closed form needs integer q·λ, got {q * lam:g}")
    if not _near_int(d):
        raise DomainError(f"closed form needs integer d, got {d:g}")
    if not (lam * p > 1 and d > lam * p / (lam * p - 1.0)):
        raise DomainError("closed form needs d > λp/(λp−1)")
    qi, d = int(round(q)), float(round(d))
    alpha = float(round(qi * lam - qi + 1))
    # terms kept as logs of their magnitudes, then summed relative to the largest
    logs, signs, rels = [], [], []
    for i in range(qi + 1):
        s = 1.0 + alpha * d - i
        log_zeta, _, rel = specfun.log_modified_zeta(s, alpha, alpha + qi - i)
        logs.append(math.log(math.comb(qi, i)) + i * math.log(d) + math.lgamma(alpha * d - i + 1.0)
                    + log_zeta)
        signs.append(-1.0 if (qi - i) % 2 else 1.0)
        rels.append(rel + _ROUNDING)
    top = max(logs)
    scaled = [math.exp(v - top) for v in logs]
    total = math.fsum(sg * w for sg, w in zip(signs, scaled))
    if not total > 0:
        raise DomainError("closed-form Fisher sum lost all precision")
    bound = math.fsum(w * r for w, r in zip(scaled, rels)) / total
    return top + math.log(total) - alpha * blackbody_log_norm(d), bound


def a_f_standard(d: float) -> float:
    """``A_F(2, 1, d) = (zeta(d) - (d-3)/(d-1) zeta(d-1)) / (2 zeta(d+1))`` for d > 2."""
    if not d > 2:
        raise DomainError(f"the standard-case formula needs d > 2, got {d}")
    z = specfun.riemann_zeta
    return (z(d) - (d - 3.0) / (d - 1.0) * z(d - 1.0)) / (2.0 * z(d + 1.0))


def _log_sup_fisher_factor(lam, d):
    """``log sup_x |rho~^(lam-2) rho~'|`` (the q -> inf limit of the Fisher integrand)."""
    log_norm = blackbody_log_norm(d)

    def h(x):
        x = np.asarray(x, dtype=float)
        log_rho = d * np.log(x) - x - np.log(-np.expm1(-x)) - log_norm
        # score d/x - 1/(1 - e^-x) over a common denominator, safe as x -> 0
        one_minus = -np.expm1(-x)
        with np.errstate(divide="ignore"):
            log_score = np.log(np.abs(d * one_minus - x)) - np.log(x) - np.log(one_minus)
        return (lam - 1.0) * log_rho + log_score

    root = _mode(d)
    best = -math.inf
    for lo, hi in ((0.0, root), (root, math.inf)):
        xs = sample_points((lo, hi), 128, scale=d)
        hx = h(xs)
        i = int(np.argmax(hx))
        cand = float(hx[i])
        if 0 < i < len(xs) - 1:
            res = minimize_scalar(lambda t: -float(h(t)), bounds=(xs[i - 1], xs[i + 1]),
                                  method="bounded", options={"xatol": 1e-13 * xs[i]})
            cand = max(cand, -res.fun)
        best = max(best, cand)
    return best


def _log_fisher_constant(p, lam, d):
    """``(log(theta * phi), A_F, I, method, error of log(theta * phi))``."""
    log_norm = blackbody_log_norm(d)
    if math.isinf(p):
        # unimodal density vanishing at both ends: TV(rho^lam) = 2 max rho^lam
        peak = float(blackbody_reduced_pdf(np.array([_mode(d)]), d)[0])
        log_phi = (math.log(2.0 / lam) + lam * math.log(peak)) / lam
        return log_phi, math.exp(lam * log_phi), math.nan, "total_variation", _ROUNDING
    q = conjugate(p)
    if math.isinf(q):
        log_sup = _log_sup_fisher_factor(lam, d)
        # bounded search to 1e-13 in x leaves a second-order error in the peak value
        return log_sup / lam, math.exp(log_sup), math.nan, "supremum", _ROUNDING
    alpha = _alpha(p, lam)
    if closed_form_applies(p, lam, d):
        log_af, rel = _log_a_f_closed(p, lam, d)
        return (log_af / (q * lam), math.exp(log_af), _exp(log_af + alpha * log_norm),
                "closed_form", rel / (q * lam))
    log_i, rel = log_i_integral(q, lam, d)
    log_af = log_i - alpha * log_norm
    return (log_af / (q * lam), math.exp(log_af), _exp(log_i), "quadrature",
            (rel + _ROUNDING) / (q * lam))


def fisher_constant(p: float, lam: float, d: float) -> float:
    """``theta * phi_{p,lam}`` of the blackbody density, i.e. ``A_F^(1/(q lam))``."""
    return math.exp(_log_fisher_constant(p, lam, d)[0])


def fisher_analytic(p: float, lam: float, d: float, theta: float = 1.0) -> float:
    BlackbodySpec(d, theta)
    return fisher_constant(p, lam, d) / theta


# ---------------------------------------------------------------------------
# complexity
# ---------------------------------------------------------------------------

def blackbody_constants(p: float, lam: float, d: float) -> BlackbodyConstants:
    require_valid(ParamPair(p, lam), blackbody_d=d)
    log_phi, a_f, i_val, method, log_phi_err = _log_fisher_constant(p, lam, d)
    renyi, renyi_err = _renyi_with_error(lam, d)
    log_c = math.log(k_fr(p, lam)) + log_phi + renyi
    a_r_value = 1.0 if abs(lam - 1.0) < SHANNON_BRANCH_TOL else a_r(lam, d)
    # errors in log C are relative errors in C
    rel = log_phi_err + renyi_err + _ROUNDING * max(1.0, abs(log_c))
    return BlackbodyConstants(a_r_value, a_f, i_val, math.exp(log_c), method, float(rel))


def complexity_analytic(p: float, lam: float, d: float) -> float:
    """``K_FR A_F^(1/(q lam)) A_R^(1/(1-lam))``, independent of temperature."""
    return blackbody_constants(p, lam, d).c_value


def complexity_report(p: float, lam: float, d: float, theta: float = 1.0) -> ComplexityReport:
    """Analytic-path report in physical units for temperature scale ``theta``."""
    params = ParamPair(p, lam)
    consts = blackbody_constants(p, lam, d)
    renyi = renyi_analytic(lam, d, theta)
    phi = fisher_analytic(p, lam, d, theta)
    k = k_fr(p, lam)
    return ComplexityReport(params, renyi, math.exp(renyi), phi, k, consts.c_value, "analytic",
                            consts.c_value * consts.rel_error)


def numeric_blackbody(d: float, theta: float = 1.0):
    from .density import blackbody
    return blackbody(BlackbodySpec(d, theta))
