"""Closed-form constants of the generalized Gaussian family.

The generalized Gaussian ``G = a_{p,lam} / e_lam(|x|^p)`` minimizes the
complexity, so its entropy power and Fisher information fix the
normalization ``K_FR(p, lam) = 1 / (phi_{p,lam}[G] N_lam[G])``.
``p = inf`` (``math.inf``) is handled as its own branch throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .specfun import LAMBDA_ONE_TOL, beta, q_exponential


def conjugate(p: float) -> float:
    """Hoelder conjugate ``q`` with ``1/p + 1/q = 1``."""
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1.0)


def a_norm(p: float, lam: float) -> float:
    """Normalization constant of ``1 / e_lam(|x|^p)`` on the real line."""
    if math.isinf(p):
        return 0.5
    if not p > 0:
        raise DomainError(f"a_norm requires p > 0, got {p}")
    if not lam > 1 - p:
        raise DomainError(f"a_norm requires lambda > 1 - p, got lambda={lam}, p={p}")
    if abs(lam - 1.0) < LAMBDA_ONE_TOL:
        return p / (2.0 * math.gamma(1.0 / p))
    if lam < 1.0:
        second = 1.0 / (1.0 - lam) - 1.0 / p
        if not second > 0:
            raise DomainError(f"G(p={p}, lambda={lam}) is not normalizable")
        return p * (1.0 - lam) ** (1.0 / p) / (2.0 * beta(1.0 / p, second))
    return p * (lam - 1.0) ** (1.0 / p) / (2.0 * beta(1.0 / p, lam / (lam - 1.0)))


def _check_fisher_domain(p, lam):
    if not p >= 1:
        raise DomainError(f"need p >= 1, got {p}")
    bound = 0.0 if math.isinf(p) else 1.0 / (1.0 + p)
    if not lam > bound:
        raise DomainError(f"need lambda > 1/(1+p) = {bound:g}, got {lam}")


def _e_at_mean(p, lam):
    """``e_lam(-1/(p lam))``; positive exactly when lam > 1/(1+p)."""
    value = q_exponential(-1.0 / (p * lam), lam)
    if not value > 0:
        raise DomainError(f"e_lambda(-1/(p lambda)) vanishes for p={p}, lambda={lam}")
    return value


def renyi_power_G(p: float, lam: float) -> float:
    if math.isinf(p):
        return 2.0
    return 1.0 / (a_norm(p, lam) * _e_at_mean(p, lam))


def fisher_G(p: float, lam: float) -> float:
    _check_fisher_domain(p, lam)
    if math.isinf(p):
        return 2.0 ** ((1.0 - lam) / lam) * lam ** (-1.0 / lam)
    q = conjugate(p)
    inv_q = 0.0 if math.isinf(q) else 1.0 / q
    a = a_norm(p, lam)
    e = _e_at_mean(p, lam)
    return (p ** (1.0 / (p * lam)) * lam ** (-inv_q / lam)
            * (a * e ** inv_q) ** ((lam - 1.0) / lam))


def k_fr(p: float, lam: float) -> float:
    """Normalization factor, from its definition ``(phi[G] N[G])^-1``."""
    _check_fisher_domain(p, lam)
    return 1.0 / (fisher_G(p, lam) * renyi_power_G(p, lam))


def k_fr_product_form(p: float, lam: float) -> float:
    """Second (single-bracket) expression for K_FR; finite p only."""
    _check_fisher_domain(p, lam)
    inv_q = 1.0 - 1.0 / p
    a = a_norm(p, lam)
    e = _e_at_mean(p, lam)
    return (lam ** inv_q / p ** (1.0 / p) * a * e ** ((lam - 1.0) / p + 1.0)) ** (1.0 / lam)


def k_fr_algebraic_form(p: float, lam: float) -> float:
    """Third expression for K_FR; singular at lambda = 1."""
    _check_fisher_domain(p, lam)
    if abs(lam - 1.0) < LAMBDA_ONE_TOL:
        raise DomainError("the algebraic form of K_FR is singular at lambda = 1")
    q = conjugate(p)
    inv_q = 0.0 if math.isinf(q) else 1.0 / q
    a = a_norm(p, lam)
    # (q lam - lam + 1)/q written without dividing by an infinite q
    expo = lam - lam * inv_q + inv_q
    inner = (p * lam + lam - 1.0) ** expo / (p * lam ** lam)
    return a ** (1.0 / lam) * inner ** (1.0 / (lam - lam * lam))


@dataclass(frozen=True)
class ReferenceConstants:
    a: float
    n_power: float
    fisher: float
    k_fr: float


def reference_constants(p: float, lam: float) -> ReferenceConstants:
    fisher = fisher_G(p, lam)
    n_power = renyi_power_G(p, lam)
    return ReferenceConstants(a_norm(p, lam), n_power, fisher, 1.0 / (fisher * n_power))


def minimizer_support_half_length(p: float) -> float:
    """``p**(1/p)``: half-width of the minimizer at lambda = 1 + 1/p."""
    return 1.0 if math.isinf(p) else p ** (1.0 / p)
