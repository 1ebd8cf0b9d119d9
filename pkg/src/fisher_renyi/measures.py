"""Entropy-like functionals of a :class:`~fisher_renyi.density.DensityModel`.

All integrals are taken segment by segment. Endpoint power hints for the
quadrature are derived from the density's segment exponents: if
``rho ~ r**gamma`` at an end, then ``rho**lam ~ r**(lam*gamma)`` and the
score ``rho'/rho ~ gamma/r``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .density import DensityModel
from .errors import DomainError
from .quadrature import DEFAULT_CONFIG, QuadConfig, integrate, sample_points
from .reference import conjugate

SHANNON_BRANCH_TOL = 1e-6


@dataclass(frozen=True)
class ParamPair:
    """Complexity parameters; ``q`` is always derived from ``p``."""
    p: float
    lam: float

    def __post_init__(self):
        if not self.p >= 1:
            raise DomainError(f"p must be >= 1, got {self.p}")

    @property
    def q(self) -> float:
        return conjugate(self.p)


@dataclass(frozen=True)
class Estimate:
    value: float
    error: float


def _segment_integral(rho: DensityModel, integrand, power_of, cfg) -> Estimate:
    """Sum of per-segment integrals; ``power_of(gamma)`` maps pdf exponents to integrand exponents."""
    cfg = cfg or DEFAULT_CONFIG
    values, errors = [], []
    for seg in rho.segments:
        lo = None if seg.lower_exponent is None else power_of(seg.lower_exponent)
        hi = None if seg.upper_exponent is None else power_of(seg.upper_exponent)
        res = integrate(integrand, (seg.lower, seg.upper), cfg,
                        lower_power=lo, upper_power=hi, scale=rho.scale)
        values.append(res.value)
        errors.append(res.error_estimate)
    return Estimate(math.fsum(values), math.fsum(errors))


def power_integral(rho: DensityModel, lam: float, cfg: Optional[QuadConfig] = None) -> Estimate:
    """``int rho**lam``."""
    def f(x):
        r = rho.pdf(x)
        return np.where(r > 0, np.abs(r) ** lam, 0.0)
    return _segment_integral(rho, f, lambda g: lam * g, cfg)


def shannon_entropy(rho: DensityModel, cfg: Optional[QuadConfig] = None) -> Estimate:
    def f(x):
        r = rho.pdf(x)
        safe = np.where(r > 0, r, 1.0)
        return np.where(r > 0, -safe * np.log(safe), 0.0)
    return _segment_integral(rho, f, lambda g: g, cfg)


def renyi_entropy_estimate(rho: DensityModel, lam: float, cfg: Optional[QuadConfig] = None) -> Estimate:
    if not lam > 0:
        raise DomainError(f"Renyi order must be positive, got {lam}")
    if abs(lam - 1.0) < SHANNON_BRANCH_TOL:
        return shannon_entropy(rho, cfg)
    w = power_integral(rho, lam, cfg)
    if not (w.value > 0 and math.isfinite(w.value)):
        raise DomainError(f"int rho^{lam:g} is not a positive finite number ({w.value})")
    return Estimate(math.log(w.value) / (1.0 - lam), w.error / (w.value * abs(1.0 - lam)))


def renyi_entropy(rho: DensityModel, lam: float, cfg: Optional[QuadConfig] = None) -> float:
    """Renyi entropy in nats; the Shannon entropy for ``|lam - 1| < 1e-6``."""
    return renyi_entropy_estimate(rho, lam, cfg).value


def renyi_power(rho: DensityModel, lam: float, cfg: Optional[QuadConfig] = None) -> float:
    return math.exp(renyi_entropy(rho, lam, cfg))


def disequilibrium(rho: DensityModel, cfg: Optional[QuadConfig] = None) -> float:
    return power_integral(rho, 2.0, cfg).value


# ---------------------------------------------------------------------------
# Fisher-type functionals
# ---------------------------------------------------------------------------

def _fisher_factor(rho: DensityModel, lam: float):
    """``g = rho**(lam-1) |rho'/rho| = |rho**(lam-2) rho'|`` as a vectorized function.

    Inside the support a pdf that has underflowed to zero still counts: the
    factor ``rho**(lam-1)`` is then 0 (lam > 1), 1 (lam = 1) or inf (lam < 1).
    """
    def g(x):
        x = np.asarray(x, dtype=float)
        inside = np.zeros(x.shape, dtype=bool)
        for seg in rho.segments:
            inside |= (x > seg.lower) & (x < seg.upper)
        r = rho.pdf(x)
        s = np.abs(rho.pdf_score(x))
        safe = np.where(r > 0, r, 1.0)
        with np.errstate(over="ignore", invalid="ignore"):
            out = safe ** (lam - 1.0) * s
            if abs(lam - 1.0) >= SHANNON_BRANCH_TOL:
                out = np.where(r > 0, out, (0.0 if lam > 1 else np.inf) * s)
        return np.where(inside, np.nan_to_num(out, nan=0.0, posinf=np.inf), 0.0)
    return g


def _sup(rho: DensityModel, g, refine: bool) -> float:
    """Supremum of ``g`` over the support, by sampling and bounded local search."""
    best = 0.0
    for seg in rho.segments:
        x = sample_points((seg.lower, seg.upper), 96, scale=rho.scale)
        gx = g(x)
        if not np.all(np.isfinite(gx)):
            raise DomainError("|rho^(lambda-2) rho'| is unbounded on the support")
        i = int(np.argmax(gx))
        seg_best = float(gx[i])
        edge = (i == 0 and math.isinf(seg.lower)) or (i == len(x) - 1 and math.isinf(seg.upper))
        if edge and seg_best > 0:
            far = g(x[i] * np.array([4.0, 16.0]))
            if far[1] > far[0] > seg_best:
                raise DomainError("|rho^(lambda-2) rho'| grows without bound at infinity")
        if refine and 0 < i < len(x) - 1:
            res = minimize_scalar(lambda t: -float(g(np.array([t]))[0]),
                                  bounds=(x[i - 1], x[i + 1]), method="bounded",
                                  options={"xatol": 1e-12 * max(1.0, abs(x[i]))})
            seg_best = max(seg_best, -res.fun)
        best = max(best, seg_best)
    return best


def fisher_biparam_estimate(rho: DensityModel, params: ParamPair,
                            cfg: Optional[QuadConfig] = None) -> Estimate:
    p, lam, q = params.p, params.lam, params.q
    if math.isinf(p):
        raise DomainError("p = inf is the total-variation functional; use fisher_total_variation")
    g = _fisher_factor(rho, lam)
    if math.isinf(q):
        # p = 1: the L^q norm becomes an essential supremum
        return Estimate(_sup(rho, g, refine=True) ** (1.0 / lam), 0.0)
    alpha = (lam - 1.0) * q + 1.0

    def log_f(x):
        # log of rho |rho^(lam-2) rho'|^q = alpha log rho + q log|score|
        r = rho.pdf(x)
        s = np.abs(rho.pdf_score(x))
        ok = (r > 0) & (s > 0)
        with np.errstate(divide="ignore"):
            return np.where(ok, alpha * np.log(np.where(ok, r, 1.0)) + q * np.log(np.where(ok, s, 1.0)),
                            -np.inf)

    shift = max(float(np.max(log_f(sample_points((seg.lower, seg.upper), 96, scale=rho.scale))))
                for seg in rho.segments)
    if not math.isfinite(shift):
        raise DomainError("density has vanishing gradient everywhere" if shift < 0
                          else "Fisher integrand is unbounded")

    def f(x):
        return np.exp(log_f(x) - shift)

    def power_of(gamma):
        return None if gamma == 0 else alpha * gamma - q

    try:
        w = _segment_integral(rho, f, power_of, cfg)
    except DomainError as exc:
        raise DomainError(f"Fisher integral for (p={p:g}, lambda={lam:g}) diverges: {exc}") from exc
    value = math.exp((shift + math.log(w.value)) / (q * lam))
    return Estimate(value, value * w.error / (w.value * q * lam))


def fisher_biparam(rho: DensityModel, params: ParamPair, cfg: Optional[QuadConfig] = None) -> float:
    """``(int |rho^(lam-2) rho'|^q rho)^(1/(q lam))``; ``p = 1`` uses the sup norm."""
    return fisher_biparam_estimate(rho, params, cfg).value


def classic_fisher(rho: DensityModel, cfg: Optional[QuadConfig] = None) -> float:
    """``int rho'^2 / rho``."""
    def f(x):
        r = rho.pdf(x)
        return np.where(r > 0, r * rho.pdf_score(x) ** 2, 0.0)
    return _segment_integral(rho, f, lambda g: None if g == 0 else g - 2.0, cfg).value


def _one_sided(rho: DensityModel, x: float, toward: float) -> float:
    if not math.isfinite(x):
        return 0.0
    return float(rho.pdf(np.array([np.nextafter(x, toward)]))[0])


def total_variation_power(rho: DensityModel, lam: float, cfg: Optional[QuadConfig] = None) -> Estimate:
    """``TV(rho**lam) / lam``: smooth variation plus jumps at segment boundaries."""
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")

    def f(x):
        r = rho.pdf(x)
        safe = np.where(r > 0, r, 1.0)
        return np.where(r > 0, safe ** lam * np.abs(rho.pdf_score(x)), 0.0)

    smooth = _segment_integral(rho, f, lambda g: None if g == 0 else lam * g - 1.0, cfg)
    jumps = []
    prev_end, prev_val = None, 0.0
    for seg in rho.segments:
        left = _one_sided(rho, seg.lower, seg.upper)
        if prev_end is not None and prev_end == seg.lower:
            jumps.append(abs(left ** lam - prev_val ** lam))
        else:
            jumps.append(prev_val ** lam)
            jumps.append(left ** lam)
        prev_end, prev_val = seg.upper, _one_sided(rho, seg.upper, seg.lower)
    jumps.append(prev_val ** lam)
    if not math.isfinite(smooth.value):
        raise DomainError("density has unbounded variation")
    return Estimate(smooth.value + math.fsum(jumps) / lam, smooth.error)


def fisher_total_variation(rho: DensityModel, lam: float, cfg: Optional[QuadConfig] = None) -> float:
    """The ``p = inf`` Fisher functional ``(TV(rho**lam)/lam)**(1/lam)``."""
    return total_variation_power(rho, lam, cfg).value ** (1.0 / lam)
