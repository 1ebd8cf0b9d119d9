"""Grids of the blackbody complexity over (p, lambda) and their critical points.

A chart is evaluated point by point (optionally in worker processes) and
assembled in row-major order, ``p`` outer and ``lambda`` inner, whatever the
completion order. Inadmissible points are kept as rows with missing values.
Extrema are found by a neighbour scan of the grid and then polished on the
continuous formula by coordinate descent with bounded Brent line searches.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .blackbody import blackbody_constants
from .complexity import validate_params
from .errors import DomainError
from .measures import ParamPair
from .reference import k_fr

REFINE_TOL = 1e-4


@dataclass(frozen=True)
class ChartPoint:
    p: float
    lam: float
    d: float
    a_r: Optional[float] = None
    a_f: Optional[float] = None
    k_fr: Optional[float] = None
    c: Optional[float] = None

    @property
    def valid(self) -> bool:
        return self.c is not None


@dataclass(frozen=True)
class Extremum:
    kind: str  # "min" or "max"
    p: float
    lam: float
    d: float
    value: float
    grid_index: tuple

    def as_dict(self) -> dict:
        return {"kind": self.kind, "p": self.p, "lambda": self.lam, "d": self.d,
                "C": self.value, "grid_index": list(self.grid_index)}


@dataclass
class Chart:
    p_values: np.ndarray
    lam_values: np.ndarray
    d: float
    points: List[ChartPoint]
    extrema: List[Extremum] = field(default_factory=list)

    def values(self) -> np.ndarray:
        """``C`` as a ``(len(p), len(lambda))`` array, NaN at inadmissible points."""
        c = np.array([np.nan if pt.c is None else pt.c for pt in self.points])
        return c.reshape(len(self.p_values), len(self.lam_values))


def evaluate_point(p: float, lam: float, d: float) -> ChartPoint:
    """One chart row; missing fields when ``(p, lam)`` is inadmissible for ``d``."""
    try:
        if validate_params(ParamPair(p, lam), blackbody_d=d):
            return ChartPoint(p, lam, d)
    except DomainError:
        return ChartPoint(p, lam, d)
    consts = blackbody_constants(p, lam, d)
    return ChartPoint(p, lam, d, consts.a_r, consts.a_f, k_fr(p, lam), consts.c_value)


def _evaluate_args(args):
    return evaluate_point(*args)


def default_jobs() -> int:
    return os.cpu_count() or 1


def evaluate_points(args: Sequence[tuple], jobs: Optional[int] = None) -> List[ChartPoint]:
    """``evaluate_point`` over ``(p, lam, d)`` tuples, results in input order."""
    jobs = default_jobs() if jobs is None else jobs
    if jobs <= 1 or len(args) < 2:
        return [evaluate_point(*a) for a in args]
    chunk = max(1, len(args) // (8 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_args, args, chunksize=chunk))


def _value(p, lam, d):
    """``C`` on the continuous formula, ``inf`` outside the admissible region."""
    try:
        if validate_params(ParamPair(p, lam), blackbody_d=d):
            return math.inf
        return blackbody_constants(p, lam, d).c_value
    except DomainError:
        return math.inf


def _line_search(fun, lo, hi, x0, tol):
    res = minimize_scalar(fun, bounds=(lo, hi), method="bounded", options={"xatol": tol})
    return (res.x, res.fun) if res.fun <= fun(x0) else (x0, fun(x0))


def refine_extremum(kind: str, p0: float, lam0: float, d: float,
                    p_bounds: tuple, lam_bounds: tuple, tol: float = REFINE_TOL,
                    max_sweeps: int = 50):
    """Coordinate descent from a grid extremum, confined to the given box.

    Returns ``(p, lam, C)``. Maxima are found as minima of ``-C``.
    """
    sign = 1.0 if kind == "min" else -1.0
    p, lam = p0, lam0
    for _ in range(max_sweeps):
        p_new, _ = _line_search(lambda t: sign * _value(t, lam, d), *p_bounds, p, 0.1 * tol)
        lam_new, _ = _line_search(lambda t: sign * _value(p_new, t, d), *lam_bounds, lam, 0.1 * tol)
        moved = max(abs(p_new - p), abs(lam_new - lam))
        p, lam = p_new, lam_new
        if moved < tol:
            break
    return p, lam, _value(p, lam, d)


def grid_extrema(values: np.ndarray) -> List[tuple]:
    """``(kind, i, j)`` for interior grid points strictly below (above) all 8 neighbours.

    Points with a missing neighbour are never reported.
    """
    found = []
    n, m = values.shape
    for i in range(1, n - 1):
        for j in range(1, m - 1):
            block = values[i - 1:i + 2, j - 1:j + 2]
            if np.isnan(block).any():
                continue
            others = np.delete(block.ravel(), 4)
            if (values[i, j] < others).all():
                found.append(("min", i, j))
            elif (values[i, j] > others).all():
                found.append(("max", i, j))
    return found


def chart(p_values: Sequence[float], lam_values: Sequence[float], d: float,
          jobs: Optional[int] = None, refine: bool = True) -> Chart:
    """Evaluate ``C^(p,lam)`` of the d-dimensional blackbody on a grid and locate extrema."""
    p_values = np.asarray(p_values, dtype=float)
    lam_values = np.asarray(lam_values, dtype=float)
    args = [(float(p), float(lam), float(d)) for p in p_values for lam in lam_values]
    result = Chart(p_values, lam_values, float(d), evaluate_points(args, jobs))
    values = result.values()
    for kind, i, j in grid_extrema(values):
        p, lam, c = p_values[i], lam_values[j], values[i, j]
        if refine:
            p, lam, c = refine_extremum(kind, p, lam, d,
                                        (p_values[i - 1], p_values[i + 1]),
                                        (lam_values[j - 1], lam_values[j + 1]))
        result.extrema.append(Extremum(kind, float(p), float(lam), float(d), float(c), (i, j)))
    return result


def line_extrema(xs: Sequence[float], fun, refine: bool = True, tol: float = REFINE_TOL):
    """Interior local extrema of ``fun`` sampled on the increasing grid ``xs``.

    Returns ``(kind, x, value)`` tuples in increasing ``x``; missing
    (non-finite) samples break neighbourhoods.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.array([fun(x) for x in xs], dtype=float)
    out = []
    for k in range(1, len(xs) - 1):
        y = ys[k - 1:k + 2]
        if not np.isfinite(y).all():
            continue
        if y[1] < y[0] and y[1] < y[2]:
            kind, sign = "min", 1.0
        elif y[1] > y[0] and y[1] > y[2]:
            kind, sign = "max", -1.0
        else:
            continue
        x, v = xs[k], ys[k]
        if refine:
            x, sv = _line_search(lambda t: sign * fun(t), xs[k - 1], xs[k + 1], xs[k], tol)
            v = sign * sv
        out.append((kind, float(x), float(v)))
    return out
