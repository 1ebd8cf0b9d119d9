"""The biparametric Fisher-Renyi complexity and derived quantities."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

from .density import DensityModel, replicate
from .errors import DomainError
from .measures import (ParamPair, fisher_biparam_estimate, renyi_entropy_estimate,
                       total_variation_power)
from .quadrature import QuadConfig
from .reference import k_fr

LAMBDA_P_BLACKBODY = "λp > d/(d−1)"


@dataclass(frozen=True)
class ComplexityReport:
    params: ParamPair
    renyi: float
    n_power: float
    fisher: float
    k_fr: float
    value: float
    path: str  # "numeric" or "analytic"
    error_estimate: float

    def as_dict(self) -> dict:
        return {
            "params": {"p": self.params.p, "q": self.params.q, "lambda": self.params.lam},
            "components": {"renyi": self.renyi, "n_power": self.n_power,
                           "fisher": self.fisher, "k_fr": self.k_fr},
            "value": self.value,
            "path": self.path,
            "error_estimate": self.error_estimate,
        }


def validate_params(params: ParamPair, blackbody_d: Optional[float] = None) -> List[str]:
    """All violated admissibility inequalities (empty when the pair is valid)."""
    p, lam = params.p, params.lam
    problems = []
    if not p >= 1:
        problems.append(f"p ≥ 1 (got p={p:g})")
    bound = 0.0 if math.isinf(p) else 1.0 / (1.0 + p)
    if not lam > bound:
        problems.append(f"λ > 1/(1+p) (got λ={lam:g} ≤ {bound:g})")
    if blackbody_d is not None:
        d = blackbody_d
        if not d > 1:
            problems.append(f"d > 1 (got d={d:g})")
        elif not lam * p > d / (d - 1.0):
            problems.append(f"{LAMBDA_P_BLACKBODY} (got λp={lam * p:g} ≤ {d / (d - 1.0):g})")
    return problems


def require_valid(params: ParamPair, blackbody_d: Optional[float] = None) -> None:
    problems = validate_params(params, blackbody_d)
    if problems:
        raise DomainError("invalid parameters: " + "; ".join(problems))


def complexity(rho: DensityModel, params: ParamPair, cfg: Optional[QuadConfig] = None) -> ComplexityReport:
    """``K_FR(p, lam) * phi_{p,lam}[rho] * N_lam[rho]`` by quadrature."""
    if math.isinf(params.p):
        return complexity_infty(rho, params.lam, cfg)
    require_valid(params)
    h = renyi_entropy_estimate(rho, params.lam, cfg)
    phi = fisher_biparam_estimate(rho, params, cfg)
    k = k_fr(params.p, params.lam)
    n_power = math.exp(h.value)
    value = k * phi.value * n_power
    rel_err = h.error + phi.error / phi.value
    return ComplexityReport(params, h.value, n_power, phi.value, k, value, "numeric", value * rel_err)


def complexity_infty(rho: DensityModel, lam: float, cfg: Optional[QuadConfig] = None) -> ComplexityReport:
    """The ``p -> inf`` measure ``(lam/2)^(1/lam) phi_inf[rho] N_lam[rho]``."""
    if not lam > 0:
        raise DomainError(f"λ > 0 required, got {lam}")
    params = ParamPair(math.inf, lam)
    h = renyi_entropy_estimate(rho, lam, cfg)
    tv = total_variation_power(rho, lam, cfg)
    phi = tv.value ** (1.0 / lam)
    k = (lam / 2.0) ** (1.0 / lam)
    n_power = math.exp(h.value)
    value = k * phi * n_power
    rel_err = h.error + tv.error / (lam * tv.value)
    return ComplexityReport(params, h.value, n_power, phi, k, value, "numeric", value * rel_err)


def mono_from_bi(rho: DensityModel, lam: float, cfg: Optional[QuadConfig] = None) -> float:
    """One-parameter Fisher-Renyi complexity ``(C^(2,lam))^(2 lam)``."""
    return complexity(rho, ParamPair(2.0, lam), cfg).value ** (2.0 * lam)


def fisher_shannon(rho: DensityModel, cfg: Optional[QuadConfig] = None) -> float:
    """``F[rho] exp(2 S[rho]) / (2 pi e)``."""
    from .measures import classic_fisher, shannon_entropy
    return classic_fisher(rho, cfg) * math.exp(2.0 * shannon_entropy(rho, cfg).value) / (2.0 * math.pi * math.e)


def replication_factor_check(rho: DensityModel, n: int, lam: float, p: float,
                             cfg: Optional[QuadConfig] = None, spacing: Optional[float] = None) -> float:
    """``C[n replicas of rho] / C[rho]``, which should equal ``n**(1/lam)``."""
    sup = rho.support
    if not (math.isfinite(sup.lower) and math.isfinite(sup.upper)):
        raise DomainError("replication needs a compactly supported density")
    width = sup.upper - sup.lower
    step = spacing if spacing is not None else 2.0 * width
    centers = [m * step for m in range(n)]
    params = ParamPair(p, lam)
    base = complexity(rho, params, cfg).value
    copies = complexity(replicate(rho, n, centers), params, cfg).value
    return copies / base
