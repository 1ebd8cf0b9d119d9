"""Adaptive Gauss-Kronrod integration on finite and semi-infinite intervals.

Integrands are vectorized callables ``f(x: ndarray) -> ndarray``. Every
interval is first mapped onto ``[0, 1]`` by a change of variable chosen from
the endpoint information the caller supplies:

* a finite endpoint with known power behaviour ``f ~ r**gamma`` (``gamma < 0``)
  gets the substitution ``r = u**k`` with ``k = 1/(1 + gamma)``, which makes
  the transformed integrand bounded;
* an infinite end uses ``x = a + s*(1/v - 1)`` (the ``t/(1-t)`` map), or
  ``x = a + s*(v**-k - 1)`` when the tail is a known power ``x**beta``.

The mapped integrals are then refined together by global adaptive bisection
with the 15-point Kronrod rule. Each round bisects, in one vectorized
batch, the worst intervals that together carry the excess error.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import AccuracyError, BracketError, DomainError

_EPS = sys.float_info.epsilon

# Kronrod 15-point abscissae and weights, Gauss 7-point weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-15
    rel_tol: float = 1e-11
    max_subdivisions: int = 4000
    endpoint_power_hint: Optional[float] = None

    def __post_init__(self):
        if not self.abs_tol > 0 or not self.rel_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_CONFIG = QuadConfig()


@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float
    subdivisions_used: int


class _Map:
    """Change of variable from u in [0, 1] to one integration segment."""

    __slots__ = ("kind", "a", "b", "k")

    def __init__(self, kind, a, b, k=1.0):
        self.kind, self.a, self.b, self.k = kind, a, b, k

    def __call__(self, u):
        a, b, k = self.a, self.b, self.k
        if self.kind == "linear":
            return a + (b - a) * u, np.full_like(u, b - a)
        if self.kind == "power_lo":
            uk = u ** k
            return a + (b - a) * uk, (b - a) * k * uk / u
        if self.kind == "power_hi":
            uk = u ** k
            return b - (b - a) * uk, (b - a) * k * uk / u
        # infinite tails: a is the finite end, b is the length scale
        vk = u ** -k
        jac = b * k * vk / u
        if self.kind == "tail_up":
            return a + b * (vk - 1.0), jac
        return a - b * (vk - 1.0), jac


def _power_k(gamma, where):
    if gamma is None:
        return 1.0
    if gamma <= -1.0:
        raise DomainError(f"integrand ~ r^{gamma:g} at {where}: divergent (need exponent > -1)")
    return 1.0 / (1.0 + gamma) if gamma < 0 else 1.0


def _tail_k(beta, where):
    if beta is None:
        return 1.0
    if beta >= -1.0:
        raise DomainError(f"integrand ~ |x|^{beta:g} at {where}: divergent (need decay exponent < -1)")
    return -1.0 / (beta + 1.0)


def _segment_maps(a, b, lower_power, upper_power, scale):
    """Maps covering [a, b] with power behaviour given at each end."""
    if a == -math.inf and b == math.inf:
        return (_segment_maps(-math.inf, 0.0, lower_power, None, scale)
                + _segment_maps(0.0, math.inf, None, upper_power, scale))
    if b == math.inf:
        maps = []
        if lower_power is not None and lower_power < 0:
            maps.append(_Map("power_lo", a, a + scale, _power_k(lower_power, a)))
            a = a + scale
        maps.append(_Map("tail_up", a, scale, _tail_k(upper_power, "+inf")))
        return maps
    if a == -math.inf:
        maps = [_Map("tail_down", b - scale if (upper_power is not None and upper_power < 0) else b,
                     scale, _tail_k(lower_power, "-inf"))]
        if upper_power is not None and upper_power < 0:
            maps.append(_Map("power_hi", b - scale, b, _power_k(upper_power, b)))
        return maps
    k_lo = _power_k(lower_power, a)
    k_hi = _power_k(upper_power, b)
    if k_lo != 1.0 and k_hi != 1.0:
        m = 0.5 * (a + b)
        return [_Map("power_lo", a, m, k_lo), _Map("power_hi", m, b, k_hi)]
    if k_lo != 1.0:
        return [_Map("power_lo", a, b, k_lo)]
    if k_hi != 1.0:
        return [_Map("power_hi", a, b, k_hi)]
    return [_Map("linear", a, b)]


_TINY = np.finfo(float).tiny
_KG_WEIGHTS = np.stack([KRONROD_WEIGHTS, GAUSS_WEIGHTS], axis=1)


def _kronrod(f, maps, idx, ua, ub):
    """Apply the 15-point rule to each [ua[i], ub[i]] under ``maps[idx[i]]``.

    All nodes go to ``f`` in a single call. Callers are expected to silence
    floating-point warnings.
    """
    half = 0.5 * (ub - ua)
    u = (0.5 * (ub + ua))[:, None] + half[:, None] * NODES
    if len(maps) == 1:
        x, jac = maps[0](u)
    else:
        x = np.empty_like(u)
        jac = np.empty_like(u)
        for j, fmap in enumerate(maps):
            sel = idx == j
            if sel.any():
                x[sel], jac[sel] = fmap(u[sel])
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape) * jac
    # points mapped to +-inf or squeezed onto an end (subnormal Jacobian) carry no mass
    dead = ~np.isfinite(x) | (jac < _TINY)
    if dead.any():
        fx[dead] = 0.0
    if not np.isfinite(fx).all():
        raise DomainError("integrand is not finite inside the integration interval")
    kg = fx @ _KG_WEIGHTS
    resk = kg[:, 0]
    ahalf = np.abs(half)
    err = np.abs(resk - kg[:, 1]) * ahalf
    resabs = (np.abs(fx) @ KRONROD_WEIGHTS) * ahalf
    resasc = (np.abs(fx - 0.5 * resk[:, None]) @ KRONROD_WEIGHTS) * ahalf
    scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    return resk * half, np.maximum(err, 50.0 * _EPS * resabs)


def integrate(f: Callable[[np.ndarray], np.ndarray],
              support: Sequence[float],
              cfg: Optional[QuadConfig] = None,
              *,
              points: Sequence[float] = (),
              lower_power: Optional[float] = None,
              upper_power: Optional[float] = None,
              scale: float = 1.0) -> QuadResult:
    """Integrate a vectorized ``f`` over ``support = (lower, upper)``.

    Parameters
    ----------
    f : vectorized integrand
    support : (lower, upper); either end may be infinite
    cfg : tolerances; ``cfg.endpoint_power_hint`` is used for the lower end
        when ``lower_power`` is not given
    points : interior breakpoints (kinks, sign changes of a factor under
        an absolute value); the interval is split there first
    lower_power, upper_power : exponent ``gamma`` of ``f ~ r**gamma`` at a
        finite end (``r`` = distance to it) or ``f ~ |x|**gamma`` at an
        infinite end; ``None`` means regular / exponentially decaying
    scale : characteristic length for the infinite-end maps

    Raises
    ------
    DomainError
        if a stated endpoint exponent implies divergence, or ``f`` is not
        finite at an interior node
    AccuracyError
        if the tolerance is not met within ``cfg.max_subdivisions``
    """
    cfg = cfg or DEFAULT_CONFIG
    lo, hi = float(support[0]), float(support[1])
    if not lo < hi:
        raise ValueError(f"empty interval ({lo}, {hi})")
    if lower_power is None:
        lower_power = cfg.endpoint_power_hint
    cuts = sorted(float(p) for p in points if lo < p < hi)
    edges = [lo, *cuts, hi]
    maps = []
    for i in range(len(edges) - 1):
        lp = lower_power if i == 0 else None
        up = upper_power if i == len(edges) - 2 else None
        maps.extend(_segment_maps(edges[i], edges[i + 1], lp, up, scale))

    with np.errstate(all="ignore"):
        return _refine(f, maps, cfg)


def _refine(f, maps, cfg):
    # each map starts with a few equal pieces, evaluated in one batch
    pieces = 8 if cfg.max_subdivisions >= 8 * len(maps) else 1
    edges = np.linspace(0.0, 1.0, pieces + 1)
    idx = np.repeat(np.arange(len(maps)), pieces)
    ua = np.tile(edges[:-1], len(maps))
    ub = np.tile(edges[1:], len(maps))
    val, err = _kronrod(f, maps, idx, ua, ub)
    subdivisions = idx.size
    while True:
        total = math.fsum(val)
        errsum = math.fsum(err)
        tol = cfg.tolerance(total)
        if errsum <= tol:
            return QuadResult(total, errsum, subdivisions)
        splittable = (ub - ua) > 64 * _EPS * np.maximum(np.abs(ub), 1e-300)
        cand = np.flatnonzero(splittable)
        if cand.size == 0:
            raise AccuracyError(
                f"roundoff prevents reaching tolerance (estimate {total:.16g}, error {errsum:.3g})",
                total, errsum)
        # split the worst intervals that together hold the excess error,
        # plus any interval holding more than its equal share of the tolerance
        order = cand[np.argsort(-err[cand], kind="stable")]
        excess = errsum - 0.5 * tol
        k = int(np.searchsorted(np.cumsum(err[order]), excess)) + 1
        k = max(k, int(np.count_nonzero(err[order] > 0.5 * tol / len(val))))
        chosen = order[:min(k, order.size)]
        if subdivisions + chosen.size > cfg.max_subdivisions:
            raise AccuracyError(
                f"no convergence after {subdivisions} subdivisions "
                f"(estimate {total:.16g}, error {errsum:.3g})", total, errsum)
        keep = np.ones(len(val), dtype=bool)
        keep[chosen] = False
        mid = 0.5 * (ua[chosen] + ub[chosen])
        new_idx = np.concatenate([idx[chosen], idx[chosen]])
        new_ua = np.concatenate([ua[chosen], mid])
        new_ub = np.concatenate([mid, ub[chosen]])
        new_val, new_err = _kronrod(f, maps, new_idx, new_ua, new_ub)
        idx = np.concatenate([idx[keep], new_idx])
        ua = np.concatenate([ua[keep], new_ua])
        ub = np.concatenate([ub[keep], new_ub])
        val = np.concatenate([val[keep], new_val])
        err = np.concatenate([err[keep], new_err])
        subdivisions += chosen.size


def sample_points(support: Sequence[float], n: int = 64, *,
                  points: Sequence[float] = (), scale: float = 1.0) -> np.ndarray:
    """Points spread over ``support`` the way :func:`integrate` sees it.

    Used for locating maxima of integrand factors; includes points just
    inside each end and on both sides of every breakpoint.
    """
    lo, hi = float(support[0]), float(support[1])
    cuts = sorted(float(p) for p in points if lo < p < hi)
    edges = [lo, *cuts, hi]
    u = (np.arange(n) + 0.5) / n
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        for fmap in _segment_maps(a, b, None, None, scale):
            x, _ = fmap(u)
            out.append(x)
        for e, direction in ((a, b), (b, a)):
            if math.isfinite(e):
                out.append(np.array([np.nextafter(e, direction)]))
    x = np.concatenate(out)
    return np.unique(x[np.isfinite(x)])


def find_sign_change(g: Callable[[float], float], bracket: Sequence[float]) -> float:
    """Root of a scalar ``g`` with exactly one sign change in ``bracket``."""
    a, b = float(bracket[0]), float(bracket[1])
    ga, gb = g(a), g(b)
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    if np.sign(ga) == np.sign(gb):
        raise BracketError(f"g({a:g}) and g({b:g}) have the same sign")
    return brentq(g, a, b, xtol=1e-300, rtol=4 * _EPS, maxiter=500)


def numeric_derivative(f: Callable, x):
    """Central difference with step ``max(|x|, 1) * eps**(1/3)``."""
    x = np.asarray(x, dtype=float)
    h = np.maximum(np.abs(x), 1.0) * _EPS ** (1.0 / 3.0)
    xp = x + h
    xm = x - h
    return (f(xp) - f(xm)) / (xp - xm)
