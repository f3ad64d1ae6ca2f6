"""Closed-form and high-resolution reference solutions for error studies.

The Burgers ramp started from a point mass and the two-fan profile started
from two equal atoms have closed forms; the concave-flux/Laplace case has
none, so its reference is a high-resolution particle run, which is exact
for concave fluxes up to the discretisation of the initial measure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fluxes import builtin_scalar
from .measures import LaplaceMeasure, optimal_quantize
from .spd import EmpiricalCDF, empirical_cdf, init_velocities, spd_positions

__all__ = [
    "PiecewiseLinearRef",
    "burgers_delta_entropy",
    "burgers_delta_ref",
    "burgers_delta_particle_error",
    "two_rarefaction_check",
    "two_rarefaction_ref",
    "concave_reference",
    "l1_vs_reference",
]


@dataclass(frozen=True)
class PiecewiseLinearRef:
    """CDF profile: linear between knots, with optional jumps at knots.

    ``fl[i]``/``fr[i]`` are the left/right limits at knot ``xs[i]``; the
    profile is 0 before the first knot and 1 after the last.
    """

    xs: np.ndarray
    fl: np.ndarray
    fr: np.ndarray

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        fl = np.asarray(self.fl, dtype=float)
        fr = np.asarray(self.fr, dtype=float)
        if not (len(xs) == len(fl) == len(fr)) or len(xs) == 0:
            raise ValueError("knot arrays must be nonempty and equal length")
        if np.any(np.diff(xs) < 0):
            raise ValueError("knots must be sorted")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "fl", fl)
        object.__setattr__(self, "fr", fr)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.xs, x, side="right")
        out = np.empty(x.shape)
        out[idx == 0] = 0.0
        inside = (idx > 0) & (idx < len(self.xs))
        i = idx[inside] - 1
        x0, x1 = self.xs[i], self.xs[i + 1]
        f0, f1 = self.fr[i], self.fl[i + 1]
        with np.errstate(invalid="ignore", divide="ignore"):
            frac = np.where(x1 > x0, (x[inside] - x0) / np.where(x1 > x0, x1 - x0, 1.0), 1.0)
        out[inside] = f0 + frac * (f1 - f0)
        out[idx == len(self.xs)] = 1.0
        return out


def burgers_delta_entropy(t, x):
    """Entropy profile of the Burgers flux started from a point mass at 0:
    a linear ramp x/t on [0, t); Heaviside at t = 0."""
    x = np.asarray(x, dtype=float)
    if t == 0:
        return (x >= 0).astype(float)
    return np.clip(x / t, 0.0, 1.0) * (x >= 0)


def burgers_delta_ref(t):
    if t == 0:
        return PiecewiseLinearRef([0.0], [0.0], [1.0])
    return PiecewiseLinearRef([0.0, t], [0.0, 1.0], [0.0, 1.0])


def burgers_delta_particle_error(n, t):
    """Exact L1 error of the n-particle run against the ramp: t / (4n)."""
    if n < 1 or t < 0:
        raise ValueError("need n >= 1 and t >= 0")
    return 0.25 * t / n


def two_rarefaction_check(t, x):
    """Profile for the Burgers flux started from atoms at -1 and +1: two
    fans on [-1, -1+t/2) and [1+t/2, 1+t) around a plateau at 1/2."""
    x = np.asarray(x, dtype=float)
    if t == 0:
        return np.where(x < -1, 0.0, np.where(x < 1, 0.5, 1.0))
    fan1 = np.clip((x + 1.0) / t, 0.0, 0.5)
    fan2 = np.clip((x - 1.0) / t, 0.5, 1.0) * (x >= 1.0 + t / 2)
    return np.where(x < 1.0 + t / 2, fan1, np.maximum(fan2, 0.5))


def two_rarefaction_ref(t):
    if t == 0:
        return PiecewiseLinearRef([-1.0, 1.0], [0.0, 0.5], [0.5, 1.0])
    xs = [-1.0, -1.0 + t / 2, 1.0 + t / 2, 1.0 + t]
    f = [0.0, 0.5, 0.5, 1.0]
    return PiecewiseLinearRef(xs, f, f)


def concave_reference(t, resolution=2 ** 16, measure=None, flux=None):
    """High-resolution particle reference for the concave-flux/Laplace case.

    For concave fluxes the particle run solves the discretised problem
    exactly, so the only defect of this reference is the initial
    quantisation, of order (log N)/N.
    """
    measure = measure or LaplaceMeasure(0.0, 1.0)
    flux = flux or builtin_scalar("concave_lwr")
    atoms = optimal_quantize(measure, resolution).atoms
    lam = init_velocities(flux, resolution)
    return empirical_cdf(spd_positions(atoms, lam, t))


def l1_vs_reference(ecdf, ref):
    """Exact L1 distance between a step CDF and a piecewise-linear profile.

    Closed form on each subinterval of the merged breakpoint grid; the only
    error is floating-point rounding.
    """
    if isinstance(ref, EmpiricalCDF):
        from .spd import l1_distance
        return l1_distance(ecdf, ref)
    pos = ecdf.positions
    breaks = np.union1d(pos, ref.xs)
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        if b <= a:
            continue
        c = float(ecdf(a))
        fa = float(ref(np.nextafter(a, b)))  # right limit at a
        fb = float(ref(np.nextafter(b, a)))  # left limit at b
        da, db = fa - c, fb - c
        if da * db >= 0:
            total += 0.5 * (abs(da) + abs(db)) * (b - a)
        else:
            xc = a + (b - a) * da / (da - db)
            total += 0.5 * (abs(da) * (xc - a) + abs(db) * (b - xc))
    return total
