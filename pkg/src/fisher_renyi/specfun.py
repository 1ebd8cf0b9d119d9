"""Scalar special functions used by the closed-form constants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError
from .quadrature import QuadConfig, integrate

LAMBDA_ONE_TOL = 1e-9


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    tail_bound: float


def log_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def beta(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise DomainError(f"beta requires a > 0 and b > 0, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def riemann_zeta(s: float) -> float:
    if not s > 1:
        raise DomainError(f"riemann_zeta requires s > 1, got {s}")
    return float(special.zeta(s))


def gen_binomial(n: int, lam: float) -> float:
    """``C(n + lam - 1, n) = Gamma(n + lam) / (Gamma(lam) n!)``."""
    if n < 0:
        raise DomainError(f"gen_binomial requires n >= 0, got {n}")
    if not lam > 0:
        raise DomainError(f"gen_binomial requires lambda > 0, got {lam}")
    return math.exp(math.lgamma(n + lam) - math.lgamma(lam) - math.lgamma(n + 1))


def _stirling_tail(z):
    """Stirling correction log Gamma(z) - [(z - 1/2) log z - z + log(2 pi)/2]."""
    w = 1.0 / z
    w2 = w * w
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - (1.0 / 1680.0 - w2 / 1188.0) * w2) * w2) * w2) * w


def log_gamma_ratio(t, a: float, b: float):
    """``log(Gamma(t + a) / Gamma(t + b))`` for real ``t >= 0``, accurate for large ``t``.

    Subtracting two ``gammaln`` values loses about ``eps * t log t`` absolutely,
    so beyond ``t = 20`` the Stirling series is used with the leading
    ``(a - b) log t`` term separated out.
    """
    t = np.asarray(t, dtype=float)
    small = t < 20.0
    ts = np.where(small, 20.0, t)
    big = ((a - b) * np.log(ts)
           + (ts * np.log1p(a / ts) - a) - (ts * np.log1p(b / ts) - b)
           + (a - 0.5) * np.log1p(a / ts) - (b - 0.5) * np.log1p(b / ts)
           + _stirling_tail(ts + a) - _stirling_tail(ts + b))
    tt = np.where(small, t, 0.0)
    direct = special.gammaln(tt + a) - special.gammaln(tt + b)
    return np.where(small, direct, big)


def _log_terms(t, s, a, lam):
    """log of C(t+lam-1, t) (1 + t/a)^-s for real t >= 0 (vectorized)."""
    return log_gamma_ratio(t, lam, 1.0) - special.gammaln(lam) - s * np.log1p(t / a)


def _scaled_modified_zeta(s, a, lam, rel_tol=1e-17, max_terms=10**6):
    """Sum of C(n+lam-1, n) (1 + n/a)^-s, i.e. a**s times the modified zeta.

    Direct summation until the terms are negligible; when the terms decay
    only algebraically the remainder is closed by Euler-Maclaurin once the
    summand varies slowly over unit steps.
    """
    decay = s - lam + 1.0  # term n ~ n**-decay
    total = 0.0
    block = 64
    n0 = 0
    while n0 < max_terms:
        n = np.arange(n0, n0 + block, dtype=float)
        terms = np.exp(_log_terms(n, s, a, lam))
        total = math.fsum((total, math.fsum(terms)))
        n0 += block
        block = min(2 * block, 4096)
        last = terms[-1]
        if terms[-1] > terms[-2]:
            continue  # still before the peak of C(n+lam-1, n) (1+n/a)^-s
        # integral comparison: sum_{m >= n0} term_m <= term_{n0-1} (n0-1) / (decay-1)
        tail_bound = last * n0 / (decay - 1.0)
        if last < rel_tol * total and tail_bound < rel_tol * total:
            return total, n0, tail_bound
        if n0 >= 32 and decay / (n0 + a) <= 0.005:
            tail, bound = _euler_maclaurin_tail(n0, s, a, lam, rel_tol * total)
            return total + tail, n0, bound
    raise DomainError("modified zeta series did not settle within the term cap")


def _euler_maclaurin_tail(N, s, a, lam, abs_tol):
    f = lambda t: np.exp(_log_terms(t, s, a, lam))
    fN = float(f(np.array([float(N)]))[0])
    # d/dt log f
    dlog = float(special.digamma(N + lam) - special.digamma(N + 1.0) - s / (a + N))
    cfg = QuadConfig(abs_tol=max(abs_tol, 1e-300), rel_tol=1e-13)
    integral = integrate(f, (float(N), math.inf), cfg,
                         upper_power=lam - 1.0 - s, scale=float(N + a)).value
    tail = integral + 0.5 * fN - dlog * fN / 12.0
    # next Euler-Maclaurin term ~ f''' / 720, with f''' ~ f * dlog**3
    bound = abs(fN * dlog ** 3) / 720.0
    return tail, bound


def modified_zeta(s: float, a: float, lam: float) -> SeriesResult:
    """Barnes-type zeta ``sum_n C(n+lam-1, n) (a+n)^-s``.

    Arises from ``(e^x - 1)^-lam = sum_n C(n+lam-1, n) e^{-(n+lam) x}``, so that
    ``Gamma(s) * modified_zeta(s, lam, lam) = int_0^inf x^(s-1) (e^x-1)^-lam dx``.
    ``lam = 1`` gives the Hurwitz zeta function.
    """
    log_value, terms, rel_bound = log_modified_zeta(s, a, lam)
    value = math.exp(log_value)
    return SeriesResult(value, terms, value * rel_bound)


def log_modified_zeta(s: float, a: float, lam: float):
    """``(log value, terms used, relative tail bound)`` of :func:`modified_zeta`."""
    if not a > 0:
        raise DomainError(f"modified zeta requires a > 0, got {a}")
    if not lam > 0:
        raise DomainError(f"modified zeta requires lambda > 0, got {lam}")
    if not s > lam:
        raise DomainError(f"modified zeta diverges: need s > lambda, got s={s}, lambda={lam}")
    scaled, terms, bound = _scaled_modified_zeta(s, a, lam)
    return -s * math.log(a) + math.log(scaled), terms, bound / scaled


def q_exponential(x, lam: float):
    """``e_lam(x) = (1 + (1-lam) x)_+ ** (1/(1-lam))``; ``exp(x)`` at ``lam = 1``."""
    if abs(lam - 1.0) < LAMBDA_ONE_TOL:
        with np.errstate(over="ignore"):
            return np.exp(x)
    base = np.maximum(1.0 + (1.0 - lam) * np.asarray(x, dtype=float), 0.0)
    with np.errstate(divide="ignore"):
        out = base ** (1.0 / (1.0 - lam))
    return out if np.ndim(out) else float(out)
