"""One-dimensional probability densities.

A :class:`DensityModel` is a vectorized pdf plus the structural information
the integrators need: the segments on which it is positive and smooth, and
the power-law behaviour of the pdf at each segment end. Segment boundaries
double as quadrature breakpoints (modes, cusps, jumps).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import specfun
from .errors import CompositionError, DomainError
from .quadrature import QuadConfig, find_sign_change, integrate, numeric_derivative

NORMALIZATION_TOL = 1e-8
_NORM_CFG = QuadConfig(abs_tol=1e-14, rel_tol=1e-12)

Array = np.ndarray


@dataclass(frozen=True)
class Support:
    lower: float
    upper: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise DomainError(f"support needs lower < upper, got [{self.lower}, {self.upper}]")


@dataclass(frozen=True)
class Segment:
    """Interval on which the density is positive and smooth.

    ``lower_exponent``/``upper_exponent`` give ``pdf ~ r**gamma`` near a finite
    end (``r`` the distance to it) or ``pdf ~ |x|**gamma`` at an infinite end;
    ``None`` means a nonzero limit or exponential decay.
    """
    lower: float
    upper: float
    lower_exponent: Optional[float] = None
    upper_exponent: Optional[float] = None

    def __post_init__(self):
        if not self.lower < self.upper:
            raise DomainError(f"segment needs lower < upper, got [{self.lower}, {self.upper}]")


@dataclass(frozen=True)
class DensityModel:
    pdf: Callable[[Array], Array]
    segments: tuple
    derivative: Optional[Callable[[Array], Array]] = None
    score: Optional[Callable[[Array], Array]] = None  # pdf'/pdf, where it is more stable
    scale: float = 1.0
    name: str = "density"
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        for left, right in zip(segs[:-1], segs[1:]):
            if right.lower < left.upper:
                raise CompositionError("segments must be ordered and non-overlapping")
        if self.check:
            total = self.normalization()
            if abs(total - 1.0) > NORMALIZATION_TOL:
                raise DomainError(f"{self.name} integrates to {total!r}, not 1")

    @property
    def support(self) -> Support:
        return Support(self.segments[0].lower, self.segments[-1].upper)

    @property
    def singular_exponents(self):
        return self.segments[0].lower_exponent, self.segments[-1].upper_exponent

    def __call__(self, x):
        return self.pdf(np.asarray(x, dtype=float))

    def pdf_derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.derivative is not None:
            return self.derivative(x)
        if self.score is not None:
            return self.pdf(x) * self.score(x)
        return numeric_derivative(self.pdf, x)

    def pdf_score(self, x):
        """``pdf'/pdf`` (zero where the pdf vanishes)."""
        x = np.asarray(x, dtype=float)
        if self.score is not None:
            return self.score(x)
        rho = self.pdf(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = self.pdf_derivative(x) / rho
        return np.where(rho > 0, s, 0.0)

    def normalization(self) -> float:
        total = 0.0
        for seg in self.segments:
            total += integrate(self.pdf, (seg.lower, seg.upper), _NORM_CFG,
                               lower_power=seg.lower_exponent, upper_power=seg.upper_exponent,
                               scale=self.scale).value
        return total

    def breakpoints(self):
        pts = set()
        for seg in self.segments:
            pts.update(e for e in (seg.lower, seg.upper) if math.isfinite(e))
        return sorted(pts)


def affine(rho: DensityModel, a: float = 1.0, b: float = 0.0) -> DensityModel:
    """The density ``a * rho(a * (x - b))`` of ``X/a + b``; ``a > 0``."""
    if not a > 0:
        raise DomainError(f"scale factor must be positive, got {a}")
    pdf, score, deriv = rho.pdf, rho.score, rho.derivative
    segs = tuple(replace(s, lower=s.lower / a + b, upper=s.upper / a + b) for s in rho.segments)
    return DensityModel(
        pdf=lambda x: a * pdf(a * (x - b)),
        segments=segs,
        derivative=None if deriv is None else (lambda x: a * a * deriv(a * (x - b))),
        score=None if score is None else (lambda x: a * score(a * (x - b))),
        scale=rho.scale / a,
        name=f"{rho.name}|a={a:g},b={b:g}",
        check=rho.check,
    )


# ---------------------------------------------------------------------------
# d-dimensional blackbody
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlackbodySpec:
    d: float
    theta: float = 1.0  # k_B T / h, in frequency units

    def __post_init__(self):
        if not self.d > 1:
            raise DomainError(f"blackbody dimension must exceed 1, got {self.d}")
        if not self.theta > 0:
            raise DomainError(f"theta must be positive, got {self.theta}")


def blackbody_log_norm(d: float) -> float:
    """``log(Gamma(d+1) zeta(d+1))``."""
    return math.lgamma(d + 1.0) + math.log(specfun.riemann_zeta(d + 1.0))


def blackbody_reduced_pdf(x, d: float, log_norm: Optional[float] = None):
    """``x^d / (Gamma(d+1) zeta(d+1) (e^x - 1))`` for ``x > 0``, zero elsewhere."""
    if log_norm is None:
        log_norm = blackbody_log_norm(d)
    x = np.asarray(x, dtype=float)
    pos = x > 0
    xs = np.where(pos, x, 1.0)
    with np.errstate(over="ignore", under="ignore"):
        val = np.exp(d * np.log(xs) - xs - np.log(-np.expm1(-xs)) - log_norm)
    return np.where(pos, val, 0.0)


def blackbody_reduced_score(x, d: float):
    """``d/x - e^x/(e^x - 1)``; the sign change is the spectral mode."""
    x = np.asarray(x, dtype=float)
    xs = np.where(x > 0, x, 1.0)
    one_minus = -np.expm1(-xs)
    with np.errstate(over="ignore"):
        # (d (1 - e^-x) - x) / (x (1 - e^-x)), ordered so that only a true overflow is inf
        score = (d * one_minus - xs) / xs / one_minus
    return np.where(x > 0, score, 0.0)


def blackbody_mode(d: float) -> float:
    """Root of ``d (1 - e^-x) = x``, i.e. of ``d (e^x - 1) - x e^x``."""
    if not d > 1:
        raise DomainError(f"blackbody mode needs d > 1, got {d}")
    lo = 1e-3 * (d - 1.0) / d
    return find_sign_change(lambda x: -d * math.expm1(-x) - x, (lo, d + 1.0))


def blackbody_pdf(nu, spec: BlackbodySpec):
    """Normalized spectral density in frequency."""
    nu = np.asarray(nu, dtype=float)
    if np.any(nu <= 0):
        raise DomainError("blackbody density is defined for nu > 0")
    return blackbody_reduced_pdf(nu / spec.theta, spec.d) / spec.theta


def blackbody(spec: BlackbodySpec, check: bool = True) -> DensityModel:
    d, theta = spec.d, spec.theta
    log_norm = blackbody_log_norm(d)
    mode = blackbody_mode(d) * theta
    return DensityModel(
        pdf=lambda nu: blackbody_reduced_pdf(nu / theta, d, log_norm) / theta,
        segments=(Segment(0.0, mode, lower_exponent=d - 1.0), Segment(mode, math.inf)),
        score=lambda nu: blackbody_reduced_score(nu / theta, d) / theta,
        scale=theta * d,
        name=f"blackbody(d={d:g},theta={theta:g})",
        check=check,
    )


# ---------------------------------------------------------------------------
# generalized Gaussian
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GenGaussianSpec:
    p: float
    lam: float

    def __post_init__(self):
        if not self.p >= 1:
            raise DomainError(f"generalized Gaussian needs p >= 1, got {self.p}")
        if not self.lam > 1 - self.p:
            raise DomainError(f"generalized Gaussian needs lambda > 1 - p, got {self.lam}")

    @property
    def half_width(self) -> float:
        """Half-length of the support (infinite for lambda <= 1)."""
        if math.isinf(self.p):
            return 1.0
        if self.lam > 1 + specfun.LAMBDA_ONE_TOL:
            return (self.lam - 1.0) ** (-1.0 / self.p)
        return math.inf


def gen_gaussian_pdf(x, spec: GenGaussianSpec):
    """``a_{p,lam} / e_lam(|x|^p)``."""
    from .reference import a_norm

    x = np.asarray(x, dtype=float)
    a = a_norm(spec.p, spec.lam)
    if math.isinf(spec.p):
        return np.where(np.abs(x) <= 1.0, a, 0.0)
    inv = specfun.q_exponential(np.abs(x) ** spec.p, spec.lam)
    with np.errstate(divide="ignore"):
        return a / inv


def _gen_gaussian_score(x, p, lam):
    ax = np.abs(x)
    base = 1.0 if abs(lam - 1.0) < specfun.LAMBDA_ONE_TOL else 1.0 + (1.0 - lam) * ax ** p
    with np.errstate(divide="ignore", invalid="ignore"):
        s = -p * ax ** (p - 1.0) * np.sign(x) / base
    return np.where(np.asarray(base) > 0, s, 0.0)


def gen_gaussian(spec: GenGaussianSpec, check: bool = True) -> DensityModel:
    p, lam = spec.p, spec.lam
    if math.isinf(p):
        return step_model(StepDensity((-1.0, 1.0), (0.5,)), check=check)
    L = spec.half_width
    if math.isfinite(L):
        edge = 1.0 / (lam - 1.0)
        segs = (Segment(-L, 0.0, lower_exponent=edge), Segment(0.0, L, upper_exponent=edge))
    else:
        tail = None if abs(lam - 1.0) < specfun.LAMBDA_ONE_TOL else -p / (1.0 - lam)
        segs = (Segment(-math.inf, 0.0, lower_exponent=tail), Segment(0.0, math.inf, upper_exponent=tail))
    return DensityModel(
        pdf=lambda x: gen_gaussian_pdf(x, spec),
        segments=segs,
        score=lambda x: _gen_gaussian_score(x, p, lam),
        scale=1.0,
        name=f"G(p={p:g},lambda={lam:g})",
        check=check,
    )


def gaussian(sigma2: float, mean: float = 0.0) -> DensityModel:
    s = math.sqrt(sigma2)
    c = 1.0 / math.sqrt(2.0 * math.pi * sigma2)
    return DensityModel(
        pdf=lambda x: c * np.exp(-0.5 * ((x - mean) / s) ** 2),
        segments=(Segment(-math.inf, mean), Segment(mean, math.inf)),
        score=lambda x: -(x - mean) / sigma2,
        scale=s,
        name=f"N({mean:g},{sigma2:g})",
    )


# ---------------------------------------------------------------------------
# step densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StepDensity:
    edges: tuple
    heights: tuple

    def __post_init__(self):
        edges = tuple(float(e) for e in self.edges)
        heights = tuple(float(h) for h in self.heights)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "heights", heights)
        if len(edges) != len(heights) + 1 or not heights:
            raise DomainError("a step density needs one more edge than heights")
        if any(b <= a for a, b in zip(edges[:-1], edges[1:])):
            raise DomainError("step edges must be strictly increasing")
        if any(h < 0 for h in heights):
            raise DomainError("step heights must be nonnegative")
        mass = math.fsum(h * (b - a) for h, a, b in zip(heights, edges[:-1], edges[1:]))
        if abs(mass - 1.0) > 1e-12:
            raise DomainError(f"step density has total mass {mass!r}")

    @property
    def widths(self):
        return tuple(b - a for a, b in zip(self.edges[:-1], self.edges[1:]))


def step_pdf(x, sd: StepDensity):
    x = np.asarray(x, dtype=float)
    edges = np.asarray(sd.edges)
    idx = np.searchsorted(edges, x, side="right") - 1
    inside = (idx >= 0) & (idx < len(sd.heights))
    h = np.asarray(sd.heights)[np.clip(idx, 0, len(sd.heights) - 1)]
    return np.where(inside, h, 0.0)


def permute_heights(sd: StepDensity, permutation: Sequence[int]) -> StepDensity:
    """Rearrange the steps (each keeps its width) in the given order."""
    perm = list(permutation)
    if sorted(perm) != list(range(len(sd.heights))):
        raise DomainError(f"{perm} is not a permutation of the steps")
    widths = [sd.widths[i] for i in perm]
    heights = [sd.heights[i] for i in perm]
    edges = [sd.edges[0]]
    for w in widths:
        edges.append(edges[-1] + w)
    # renormalize away the rounding in the rebuilt edges
    mass = math.fsum(h * (b - a) for h, a, b in zip(heights, edges[:-1], edges[1:]))
    return StepDensity(tuple(edges), tuple(h / mass for h in heights))


def step_model(sd: StepDensity, check: bool = True) -> DensityModel:
    segs = tuple(Segment(a, b) for a, b, h in zip(sd.edges[:-1], sd.edges[1:], sd.heights) if h > 0)
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    return DensityModel(
        pdf=lambda x: step_pdf(x, sd),
        segments=segs,
        derivative=zero,
        score=zero,
        scale=sd.edges[-1] - sd.edges[0],
        name=f"step({len(sd.heights)})",
        check=check,
    )


def uniform(lower: float = 0.0, upper: float = 1.0) -> DensityModel:
    return step_model(StepDensity((lower, upper), (1.0 / (upper - lower),)))


# ---------------------------------------------------------------------------
# replication
# ---------------------------------------------------------------------------

def replicate(rho: DensityModel, n: int, centers: Sequence[float]) -> DensityModel:
    """``sum_m n^-1/2 rho(n^1/2 (x - b_m))`` for copies with disjoint supports."""
    if n < 1 or len(centers) != n:
        raise CompositionError(f"need n >= 1 and exactly n centers, got n={n}, {len(centers)} centers")
    r = math.sqrt(n)
    lo, hi = rho.support.lower, rho.support.upper
    order = sorted(centers)
    spans = [(b + lo / r, b + hi / r) for b in order]
    if n > 1 and not all(math.isfinite(v) for span in spans for v in span):
        raise CompositionError("replicas of a density with unbounded support always overlap")
    for (a0, b0), (a1, b1) in zip(spans[:-1], spans[1:]):
        if a1 < b0:
            raise CompositionError(f"replica supports [{a0:g}, {b0:g}] and [{a1:g}, {b1:g}] overlap")
    pdf, score = rho.pdf, rho.pdf_score

    def copies(x, fn, factor):
        out = np.zeros_like(x)
        for b, (a0, b0) in zip(order, spans):
            m = (x >= a0) & (x <= b0)
            if np.any(m):
                out[m] += factor * fn(r * (x[m] - b))
        return out

    def rep_pdf(x):
        return copies(np.asarray(x, dtype=float), pdf, 1.0 / r)

    def rep_score(x):
        x = np.asarray(x, dtype=float)
        return copies(x, score, r)

    segs = tuple(replace(s, lower=b + s.lower / r, upper=b + s.upper / r)
                 for b in order for s in rho.segments)
    return DensityModel(pdf=rep_pdf, segments=segs, score=rep_score, scale=rho.scale / r,
                        name=f"{rho.name}x{n}", check=rho.check)


# ---------------------------------------------------------------------------
# tabulated densities
# ---------------------------------------------------------------------------

def grid_model(x: Sequence[float], values: Sequence[float], name: str = "grid") -> DensityModel:
    """Piecewise-linear density through ``(x, values)``, renormalized by the trapezoid rule."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(values, dtype=float)
    if x.ndim != 1 or x.shape != y.shape or len(x) < 2:
        raise DomainError("grid needs two equal-length columns with at least two rows")
    if np.any(np.diff(x) <= 0):
        raise DomainError("grid abscissae must be strictly increasing")
    if np.any(y < 0):
        raise DomainError("grid density values must be nonnegative")
    mass = float(np.trapezoid(y, x))
    if not mass > 0:
        raise DomainError("grid density has zero mass")
    y = y / mass
    slopes = np.diff(y) / np.diff(x)

    def pdf(t):
        t = np.asarray(t, dtype=float)
        return np.interp(t, x, y, left=0.0, right=0.0)

    def deriv(t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(x, t, side="right") - 1, 0, len(slopes) - 1)
        return np.where((t > x[0]) & (t < x[-1]), slopes[idx], 0.0)

    segs = []
    for i in range(len(x) - 1):
        if y[i] > 0 or y[i + 1] > 0:
            segs.append(Segment(float(x[i]), float(x[i + 1]),
                                lower_exponent=1.0 if y[i] == 0 else None,
                                upper_exponent=1.0 if y[i + 1] == 0 else None))
    return DensityModel(pdf=pdf, segments=tuple(segs), derivative=deriv,
                        scale=float(x[-1] - x[0]), name=name)


def load_grid_csv(path) -> DensityModel:
    """Read a two-column ``x,pdf`` CSV (header required)."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        if header[:2] != ["x", "pdf"]:
            raise DomainError(f"{path}: expected header 'x,pdf', got {','.join(header)!r}")
        rows = [(float(r[0]), float(r[1])) for r in reader if r and r[0].strip()]
    xs, ys = zip(*rows)
    return grid_model(xs, ys, name=str(path))


def load_step_csv(path) -> StepDensity:
    """Read an ``edge,height`` CSV: one row per edge, the last height left empty.

    Heights are rescaled so that the total mass is one.
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader)]
        if header[:2] != ["edge", "height"]:
            raise DomainError(f"{path}: expected header 'edge,height', got {','.join(header)!r}")
        rows = [r for r in reader if r and r[0].strip()]
    edges = [float(r[0]) for r in rows]
    heights = [float(r[1]) for r in rows[:-1]]
    mass = math.fsum(h * (b - a) for h, a, b in zip(heights, edges[:-1], edges[1:]))
    return StepDensity(tuple(edges), tuple(h / mass for h in heights))
