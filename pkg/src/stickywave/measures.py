"""One-dimensional probability measures, W1 distances and quantizers.

A measure is exposed through its CDF ``F`` and its generalized inverse
``F^{-1}(v) = inf{x : F(x) >= v}``.  On the real line the Wasserstein-1
distance is the L1 distance between quantile functions,

    W1(m, m') = int_0^1 |F_m^{-1}(v) - F_m'^{-1}(v)| dv,

which this module evaluates exactly whenever the measures expose a
closed-form antiderivative of their quantile, and by adaptive quadrature
otherwise.  Measures with an infinite first moment are at infinite W1
distance from any finite-moment measure; that case is reported with the
``math.inf`` sentinel, not an exception.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import special
from scipy.integrate import IntegrationWarning, quad

__all__ = [
    "Measure1D",
    "UniformMeasure",
    "AtomMeasure",
    "LaplaceMeasure",
    "ParetoMeasure",
    "StretchedExpMeasure",
    "PiecewiseLinearCDF",
    "DiscreteMeasure",
    "QuadratureError",
    "parse_measure",
    "w1",
    "optimal_quantize",
    "chi_quantize",
    "w1_upper_bound_sqrt",
    "tail_rate_fit",
]

#: absolute tolerance used for every adaptive quadrature in this module
QUAD_ABS_TOL = 1e-10
#: quantile level used to truncate tails in sqrt(F(1-F)) integrals
TAIL_TRUNC = 1e-12


class QuadratureError(RuntimeError):
    """A quadrature failed to reach the requested absolute tolerance."""


def _quad(f, a, b, tol=QUAD_ABS_TOL, points=None):
    # accuracy is enforced on abserr below; scipy's roundoff warning would
    # only duplicate that check
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, abserr = quad(f, a, b, epsabs=tol, epsrel=0.0, limit=500,
                             points=points)
    if not math.isfinite(value) or abserr > max(100 * tol, 1e-8 * abs(value)):
        raise QuadratureError(
            f"quadrature on [{a}, {b}] reached abserr={abserr:.3e}")
    return value


class Measure1D:
    """Base class: a probability measure given by CDF/quantile pair.

    Subclasses must implement ``cdf`` and ``quantile`` (both accepting
    scalars or numpy arrays) and should override ``quantile_mass`` with a
    closed form when one exists; the base implementation integrates the
    quantile numerically.

    Attributes
    ----------
    first_moment_finite : bool
        Whether ``int |x| dm`` is finite.  Measures that disagree on this
        flag are at W1 distance ``math.inf`` from each other.
    sqrt_tail_integrable : bool or None
        Whether ``int sqrt(F(1-F)) dx`` converges.  ``None`` means unknown
        and triggers a tail-decay heuristic.
    """

    first_moment_finite: bool = True
    sqrt_tail_integrable: bool | None = None

    def cdf(self, x):
        raise NotImplementedError

    def quantile(self, v):
        raise NotImplementedError

    def quantile_mass(self, lo, hi):
        """Integral of the quantile function over ``[lo, hi] in (0, 1)``."""
        if lo == hi:
            return 0.0
        return _quad(self.quantile, lo, hi)

    def support(self):
        """Essential support, as the closure of quantile((0,1))."""
        return (float(self.quantile(1e-15)), float(self.quantile(1.0 - 1e-15)))


class UniformMeasure(Measure1D):
    """Uniform law on ``[a, b]``."""

    sqrt_tail_integrable = True

    def __init__(self, a, b):
        if not b > a:
            raise ValueError("uniform requires a < b")
        self.a = float(a)
        self.b = float(b)

    def cdf(self, x):
        return np.clip((np.asarray(x, dtype=float) - self.a) / (self.b - self.a), 0.0, 1.0)

    def quantile(self, v):
        return self.a + (self.b - self.a) * np.asarray(v, dtype=float)

    def quantile_mass(self, lo, hi):
        return self.a * (hi - lo) + 0.5 * (self.b - self.a) * (hi * hi - lo * lo)

    def support(self):
        return (self.a, self.b)


class AtomMeasure(Measure1D):
    """Finite combination of point masses ``sum w_i delta_{x_i}``."""

    sqrt_tail_integrable = True

    def __init__(self, points, weights):
        points = np.asarray(points, dtype=float)
        weights = np.asarray(weights, dtype=float)
        if points.ndim != 1 or points.shape != weights.shape or len(points) == 0:
            raise ValueError("points and weights must be equal-length 1-D arrays")
        if np.any(weights <= 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ValueError("weights must be positive and sum to 1")
        order = np.argsort(points, kind="stable")
        self.points = points[order]
        self.weights = weights[order]
        self.cum = np.concatenate(([0.0], np.cumsum(self.weights)))
        self.cum[-1] = 1.0

    def cdf(self, x):
        idx = np.searchsorted(self.points, np.asarray(x, dtype=float), side="right")
        return self.cum[idx]

    def quantile(self, v):
        # F^{-1}(v) = x_i on the interval (cum_{i-1}, cum_i]
        v = np.asarray(v, dtype=float)
        idx = np.searchsorted(self.cum[1:-1], v, side="left")
        return self.points[idx]

    def quantile_mass(self, lo, hi):
        lo_c = np.clip(self.cum[:-1], lo, hi)
        hi_c = np.clip(self.cum[1:], lo, hi)
        return float(np.sum(self.points * (hi_c - lo_c)))

    def support(self):
        return (float(self.points[0]), float(self.points[-1]))


class LaplaceMeasure(Measure1D):
    """Two-sided exponential with density ``exp(-|x-mu|/b) / (2b)``."""

    sqrt_tail_integrable = True

    def __init__(self, mu=0.0, b=1.0):
        if b <= 0:
            raise ValueError("scale must be positive")
        self.mu = float(mu)
        self.b = float(b)

    def cdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mu) / self.b
        return np.where(z < 0, 0.5 * np.exp(z), 1.0 - 0.5 * np.exp(-z))

    def quantile(self, v):
        v = np.asarray(v, dtype=float)
        return self.mu + self.b * np.where(
            v < 0.5, np.log(2.0 * v), -np.log(2.0 * (1.0 - v)))

    def quantile_mass(self, lo, hi):
        # antiderivative of the centred quantile; the two branches agree at
        # v = 1/2 (both equal -b/2), making anti continuous on (0, 1)
        def anti(v):
            if v <= 0.5:
                return self.b * v * (np.log(2.0 * v) - 1.0) if v > 0 else 0.0
            w = 1.0 - v
            return self.b * w * (np.log(2.0 * w) - 1.0) if w > 0 else 0.0

        return self.mu * (hi - lo) + (anti(hi) - anti(lo))


class ParetoMeasure(Measure1D):
    """Pareto law ``F(x) = 1 - x^{-alpha}`` on ``[1, inf)``."""

    def __init__(self, alpha):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.alpha = float(alpha)
        self.first_moment_finite = alpha > 1.0
        self.sqrt_tail_integrable = alpha > 2.0

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 1.0, 0.0, 1.0 - np.power(np.maximum(x, 1.0), -self.alpha))

    def quantile(self, v):
        return np.power(1.0 - np.asarray(v, dtype=float), -1.0 / self.alpha)

    def quantile_mass(self, lo, hi):
        a = self.alpha
        if a == 1.0:
            return math.log1p(-lo) - math.log1p(-hi)
        c = a / (a - 1.0)
        return c * ((1.0 - lo) ** (1.0 - 1.0 / a) - (1.0 - hi) ** (1.0 - 1.0 / a))


class StretchedExpMeasure(Measure1D):
    """Law with CDF ``1 - exp(-x^alpha)`` on ``(0, inf)``."""

    sqrt_tail_integrable = True

    def __init__(self, alpha):
        if alpha <= 0:
            raise ValueError("alpha must be positive")
        self.alpha = float(alpha)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x <= 0, 0.0, 1.0 - np.exp(-np.power(np.maximum(x, 0.0), self.alpha)))

    def quantile(self, v):
        return np.power(-np.log1p(-np.asarray(v, dtype=float)), 1.0 / self.alpha)

    def quantile_mass(self, lo, hi):
        # substitute u = -log(1-v): integral of u^{1/alpha} e^{-u} du
        s = 1.0 + 1.0 / self.alpha
        u_lo = -math.log1p(-lo) if lo < 1 else math.inf
        u_hi = -math.log1p(-hi) if hi < 1 else math.inf
        reg_lo = special.gammainc(s, u_lo) if math.isfinite(u_lo) else 1.0
        reg_hi = special.gammainc(s, u_hi) if math.isfinite(u_hi) else 1.0
        return float(special.gamma(s) * (reg_hi - reg_lo))


class PiecewiseLinearCDF(Measure1D):
    """Measure given by a continuous piecewise-linear CDF through knots.

    ``xs`` strictly increasing, ``fs`` nondecreasing with ``fs[0] = 0`` and
    ``fs[-1] = 1``.  Flat CDF sections are allowed (gaps in the support) and
    turn into jumps of the quantile.
    """

    sqrt_tail_integrable = True

    def __init__(self, xs, fs):
        xs = np.asarray(xs, dtype=float)
        fs = np.asarray(fs, dtype=float)
        if len(xs) < 2 or np.any(np.diff(xs) <= 0) or np.any(np.diff(fs) < 0):
            raise ValueError("knots must be strictly increasing, CDF nondecreasing")
        if abs(fs[0]) > 1e-14 or abs(fs[-1] - 1.0) > 1e-14:
            raise ValueError("CDF must run from 0 to 1 over the knots")
        self.xs = xs
        self.fs = fs

    def cdf(self, x):
        return np.interp(np.asarray(x, dtype=float), self.xs, self.fs, left=0.0, right=1.0)

    def quantile(self, v):
        v = np.asarray(v, dtype=float)
        # inf{x : F(x) >= v}; searchsorted('left') lands on the first knot
        # interval whose right endpoint reaches v, which skips flat sections
        idx = np.clip(np.searchsorted(self.fs, v, side="left"), 1, len(self.fs) - 1)
        f0 = self.fs[idx - 1]
        f1 = self.fs[idx]
        x0 = self.xs[idx - 1]
        x1 = self.xs[idx]
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(f1 > f0, (v - f0) / np.where(f1 > f0, f1 - f0, 1.0), 1.0)
        return x0 + np.clip(frac, 0.0, 1.0) * (x1 - x0)

    def quantile_mass(self, lo, hi):
        # exact: quantile is piecewise linear with breakpoints at knot CDF values
        breaks = np.unique(np.clip(self.fs, lo, hi))
        breaks = np.concatenate(([lo], breaks, [hi]))
        breaks = np.unique(breaks)
        total = 0.0
        for v0, v1 in zip(breaks[:-1], breaks[1:]):
            if v1 <= v0:
                continue
            q0 = float(self.quantile(v0 + 0.0)) if v0 > 0 else float(self.xs[0])
            q1 = float(self.quantile(v1)) if v1 < 1 else float(self.xs[-1])
            # on (v0, v1] the quantile is linear from its right limit at v0
            q0r = float(self.quantile(np.nextafter(v0, 1.0))) if 0 < v0 < 1 else q0
            total += 0.5 * (q0r + q1) * (v1 - v0)
        return total

    def support(self):
        return (float(self.xs[0]), float(self.xs[-1]))


@dataclass(frozen=True)
class DiscreteMeasure:
    """Empirical measure ``(1/n) sum_k delta_{x_k}`` with sorted atoms."""

    atoms: np.ndarray = field()

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float)
        if atoms.ndim != 1 or len(atoms) == 0:
            raise ValueError("atoms must be a nonempty 1-D array")
        if np.any(np.diff(atoms) < 0):
            raise ValueError("atoms must be sorted nondecreasing")
        object.__setattr__(self, "atoms", atoms)

    @property
    def n(self):
        return len(self.atoms)

    def cdf(self, x):
        return np.searchsorted(self.atoms, np.asarray(x, dtype=float), side="right") / self.n

    def quantile(self, v):
        v = np.asarray(v, dtype=float)
        idx = np.clip(np.ceil(v * self.n).astype(int) - 1, 0, self.n - 1)
        return self.atoms[idx]

    def support(self):
        return (float(self.atoms[0]), float(self.atoms[-1]))


# ---------------------------------------------------------------------------
# measure grammar
# ---------------------------------------------------------------------------

def parse_measure(spec):
    """Build a measure from a text spec.

    Grammar: ``uniform:a,b`` | ``atoms:x1@w1,x2@w2,...`` | ``laplace:mu,b``
    | ``pareto:alpha`` | ``stretchedexp:alpha`` | ``heaviside:c``.
    """
    name, _, args = spec.partition(":")
    name = name.strip().lower()
    try:
        if name == "uniform":
            a, b = (float(s) for s in args.split(","))
            return UniformMeasure(a, b)
        if name == "atoms":
            pts, wts = [], []
            for tok in args.split(","):
                x, _, w = tok.partition("@")
                pts.append(float(x))
                wts.append(float(w) if w else 1.0)
            wts = np.asarray(wts) / np.sum(wts)
            return AtomMeasure(pts, wts)
        if name == "laplace":
            parts = [float(s) for s in args.split(",")] if args else []
            mu = parts[0] if parts else 0.0
            b = parts[1] if len(parts) > 1 else 1.0
            return LaplaceMeasure(mu, b)
        if name == "pareto":
            return ParetoMeasure(float(args))
        if name == "stretchedexp":
            return StretchedExpMeasure(float(args))
        if name == "heaviside":
            return AtomMeasure([float(args) if args else 0.0], [1.0])
    except (ValueError, TypeError) as exc:
        raise ValueError(f"bad measure spec {spec!r}: {exc}") from exc
    raise ValueError(f"unknown measure family {name!r}")


# ---------------------------------------------------------------------------
# quantizers
# ---------------------------------------------------------------------------

def optimal_quantize(m, n):
    """W1-optimal n-point quantizer: atoms at the cell-median quantiles.

    ``x_k = F^{-1}((2k-1)/(2n))`` minimises ``W1(m, mu_n)`` over all
    n-point measures with equal weights 1/n.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    v = (2.0 * np.arange(1, n + 1) - 1.0) / (2.0 * n)
    atoms = np.asarray(m.quantile(v), dtype=float)
    if not np.all(np.isfinite(atoms)):
        raise ValueError("quantile evaluation failed on the median grid")
    return DiscreteMeasure(np.maximum.accumulate(atoms))


def chi_quantize(m, n):
    """Cell-averaged quantile discretisation on the (n+1)-grid.

    ``x_k = (n+1) * int_{(2k-1)/(2(n+1))}^{(2k+1)/(2(n+1))} F^{-1}(w) dw``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not m.first_moment_finite:
        raise ValueError("chi_quantize requires a finite first moment")
    edges = (2.0 * np.arange(0, n + 1) + 1.0) / (2.0 * (n + 1))
    atoms = np.array([
        (n + 1) * m.quantile_mass(edges[k], edges[k + 1]) for k in range(n)
    ])
    return DiscreteMeasure(np.maximum.accumulate(atoms))


# ---------------------------------------------------------------------------
# W1 distance
# ---------------------------------------------------------------------------

def _w1_discrete(a, b):
    xa, xb = a.atoms, b.atoms
    if a.n == b.n:
        return float(np.mean(np.abs(xa - xb)))
    # exact integral of |F_a - F_b| over the merged atom grid
    grid = np.unique(np.concatenate([xa, xb]))
    fa = np.searchsorted(xa, grid, side="right") / a.n
    fb = np.searchsorted(xb, grid, side="right") / b.n
    return float(np.sum(np.abs(fa[:-1] - fb[:-1]) * np.diff(grid)))


def _w1_vs_discrete(m, d):
    # per-cell: |F^{-1}(v) - c| integrated over ((k-1)/n, k/n], split at F(c)
    n = d.n
    total = 0.0
    for k in range(1, n + 1):
        lo, hi = (k - 1) / n, k / n
        c = float(d.atoms[k - 1])
        vstar = min(max(float(m.cdf(c)), lo), hi)
        below = c * (vstar - lo) - m.quantile_mass(lo, vstar)
        above = m.quantile_mass(vstar, hi) - c * (hi - vstar)
        total += below + above
    return total


def w1(a, b, tol=QUAD_ABS_TOL):
    """Wasserstein-1 distance between two measures.

    Returns ``math.inf`` when exactly one argument has an infinite first
    moment.  Exact for discrete/discrete and for continuous measures that
    expose a closed-form ``quantile_mass``; adaptive quadrature otherwise.
    """
    fin_a = getattr(a, "first_moment_finite", True)
    fin_b = getattr(b, "first_moment_finite", True)
    if fin_a != fin_b:
        return math.inf
    da, db = isinstance(a, DiscreteMeasure), isinstance(b, DiscreteMeasure)
    if da and db:
        return _w1_discrete(a, b)
    if da:
        return _w1_vs_discrete(b, a)
    if db:
        return _w1_vs_discrete(a, b)
    return _quad(lambda v: abs(float(a.quantile(v)) - float(b.quantile(v))),
                 0.0, 1.0, tol=tol)


# ---------------------------------------------------------------------------
# discretisation-rate helpers
# ---------------------------------------------------------------------------

def _tail_diverges(m):
    """Heuristic: dyadic tail blocks of sqrt(F(1-F)) fail to decay."""
    for sign in (+1, -1):
        prev = None
        growing = 0
        for j in range(8, 36):
            p = 2.0 ** -j
            v0 = 1.0 - p if sign > 0 else p
            v1 = 1.0 - p / 2 if sign > 0 else p / 2
            x0, x1 = float(m.quantile(v0)), float(m.quantile(v1))
            if not (math.isfinite(x0) and math.isfinite(x1)):
                return True
            width = abs(x1 - x0)
            block = width * math.sqrt(p / 2 * (1 - p / 2))
            if prev is not None and block > 0.9 * prev and block > 1e-13:
                growing += 1
                if growing >= 3:
                    return True
            else:
                growing = 0
            prev = block
    return False


def w1_upper_bound_sqrt(m):
    """The integral ``I = int sqrt(F(1-F)) dx``, so that W1 <= I/sqrt(n).

    Returns ``math.inf`` when the integral diverges; tails are truncated at
    the 1e-12 quantiles, which caps the absolute accuracy near 1e-5 for
    exponential-type tails.
    """
    integrable = m.sqrt_tail_integrable
    if integrable is None:
        integrable = not _tail_diverges(m)
    if not integrable:
        return math.inf
    x_lo = float(m.quantile(TAIL_TRUNC))
    x_hi = float(m.quantile(1.0 - TAIL_TRUNC))
    if x_hi <= x_lo:
        return 0.0

    def integrand(x):
        f = float(m.cdf(x))
        return math.sqrt(max(f * (1.0 - f), 0.0))

    # split at tail quantiles: heavy tails stretch the domain over many
    # orders of magnitude and defeat a single adaptive pass
    levels = [1e-9, 1e-6, 1e-3, 0.1, 0.5, 0.9, 1 - 1e-3, 1 - 1e-6, 1 - 1e-9]
    points = sorted({float(m.quantile(v)) for v in levels
                     if x_lo < float(m.quantile(v)) < x_hi})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        value, abserr = quad(integrand, x_lo, x_hi, epsabs=QUAD_ABS_TOL,
                             epsrel=1e-10, limit=2000, points=points or None)
    if not math.isfinite(value) or abserr > 1e-6 * max(1.0, abs(value)):
        raise QuadratureError(
            f"sqrt(F(1-F)) quadrature reached abserr={abserr:.3e}")
    return value


def tail_rate_fit(m, n_values):
    """Least-squares slope of ``log W1(m, optimal_quantize(m, n))`` vs ``log n``."""
    n_values = sorted(int(n) for n in n_values)
    if len(n_values) < 4 or n_values[-1] < 100 * n_values[0]:
        raise ValueError("need >= 4 particle counts spanning two decades")
    dists = []
    for n in n_values:
        d = w1(m, optimal_quantize(m, n))
        if not math.isfinite(d) or d <= 0:
            raise ValueError(f"W1 not finite/positive at n={n}")
        dists.append(d)
    slope = np.polyfit(np.log(n_values), np.log(dists), 1)[0]
    return float(slope)
