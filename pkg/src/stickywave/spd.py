"""Scalar sticky particle dynamics via the cumulative convex-hull solver.

Positions at any time t are obtained in O(n) without tracking collisions:
free-transport the particles, form the cumulative sums Q(k/n), take the
greatest convex minorant P of the piecewise-linear interpolant of Q, and
read positions off the increments of P.  On each affine piece of P the
increment is constant, so positions come out clustered exactly as the
sticky dynamics dictates, with cluster velocity equal to the mean of the
member velocities.

An independent event-driven simulator (advance to next pairwise collision,
merge, average velocities) is provided as a cross-check oracle and as the
per-type engine of the multitype dynamics.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ParticleConfig",
    "EmpiricalCDF",
    "init_velocities",
    "free_transport",
    "convex_minorant",
    "convex_minorant_counted",
    "spd_positions",
    "spd_positions_event_driven",
    "spd_timeline",
    "cluster_partition",
    "empirical_cdf",
    "l1_distance",
    "flow_check",
]

#: relative threshold under which positions count as one cluster
CLUSTER_TOL = 1e-12


def _hull_indices_py(q):
    # monotone-chain stack over the points (k, q[k]); slope comparisons use
    # cross-multiplication, equal slopes merge (the earlier point is removed)
    n = len(q) - 1
    stack = np.empty(n + 1, dtype=np.int64)
    stack[0] = 0
    top = 0
    for k in range(1, n + 1):
        qk = q[k]
        while top >= 1:
            j = stack[top]
            i = stack[top - 1]
            if (q[j] - q[i]) * (k - j) >= (qk - q[j]) * (j - i):
                top -= 1
            else:
                break
        top += 1
        stack[top] = k
    return stack[: top + 1]


def _positions_from_hull_py(psi, hull):
    phi = np.empty_like(psi)
    for b in range(len(hull) - 1):
        i, j = hull[b], hull[b + 1]
        # compensated block mean keeps per-position error near machine eps
        s = 0.0
        c = 0.0
        for k in range(i, j):
            y = psi[k]
            t = s + y
            if abs(s) >= abs(y):
                c += (s - t) + y
            else:
                c += (y - t) + s
            s = t
        phi[i:j] = (s + c) / (j - i)
    return phi


def _cumsum_comp_py(psi):
    q = np.empty(len(psi) + 1)
    q[0] = 0.0
    s = 0.0
    c = 0.0
    for k, y in enumerate(psi):
        t = s + y
        if abs(s) >= abs(y):
            c += (s - t) + y
        else:
            c += (y - t) + s
        s = t
        q[k + 1] = s + c
    return q


if os.environ.get("STICKYWAVE_NO_NUMBA"):
    _hull_indices = _hull_indices_py
    _positions_from_hull = _positions_from_hull_py
    _cumsum_comp = _cumsum_comp_py
else:
    import numba

    _hull_indices = numba.njit(cache=True)(_hull_indices_py)
    _positions_from_hull = numba.njit(cache=True)(_positions_from_hull_py)
    _cumsum_comp = numba.njit(cache=True)(_cumsum_comp_py)


@dataclass(frozen=True)
class ParticleConfig:
    """Sorted positions of n equal-mass (1/n) particles."""

    positions: np.ndarray

    def __post_init__(self):
        pos = np.ascontiguousarray(self.positions, dtype=float)
        if pos.ndim != 1 or len(pos) == 0:
            raise ValueError("positions must be a nonempty 1-D array")
        if np.any(np.diff(pos) < 0):
            raise ValueError("positions must be sorted nondecreasing")
        object.__setattr__(self, "positions", pos)

    @property
    def n(self):
        return len(self.positions)


def _as_positions(x):
    if isinstance(x, ParticleConfig):
        return x.positions
    return ParticleConfig(np.asarray(x, dtype=float)).positions


def init_velocities(flux, n):
    """Cell-averaged speeds: ``lam_k = n * int_{(k-1)/n}^{k/n} lam``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    k = np.arange(1, n + 1)
    return np.asarray(flux.cell_average(k, n), dtype=float)


def free_transport(x, lam, t):
    """Straight-line motion ``x_k + t * lam_k`` (output may be unsorted)."""
    return _as_positions(x) + t * np.asarray(lam, dtype=float)


def convex_minorant(q):
    """Greatest convex minorant of cumulative values on a uniform grid.

    ``q`` holds n+1 values with q[0] = 0.  Returns the minorant sampled on
    the same grid; endpoints are preserved.  Single amortised O(n) pass.
    """
    q = np.ascontiguousarray(q, dtype=float)
    if q.ndim != 1 or len(q) < 2:
        raise ValueError("q must hold at least two values")
    if q[0] != 0.0:
        raise ValueError("q[0] must be 0")
    hull = _hull_indices(q)
    grid = np.arange(len(q), dtype=float)
    return np.interp(grid, hull.astype(float), q[hull])


def convex_minorant_counted(q):
    """Pure-python minorant that also reports its elementary-operation count.

    The count increments once per for-loop step and once per stack removal,
    so it is bounded by 2n + 1 regardless of input.
    """
    q = np.asarray(q, dtype=float)
    n = len(q) - 1
    ops = 0
    stack = [0]
    for k in range(1, n + 1):
        ops += 1
        while len(stack) > 1 and (
            (q[stack[-1]] - q[stack[-2]]) * (k - stack[-1])
            >= (q[k] - q[stack[-1]]) * (stack[-1] - stack[-2])
        ):
            stack.pop()
            ops += 1
        stack.append(k)
    hull = np.asarray(stack, dtype=float)
    grid = np.arange(len(q), dtype=float)
    return np.interp(grid, hull, q[hull.astype(int)]), ops


def spd_positions(x, lam, t):
    """Sticky-particle positions at time t >= 0, cumulative-hull route."""
    pos = _as_positions(x)
    lam = np.ascontiguousarray(lam, dtype=float)
    if lam.shape != pos.shape:
        raise ValueError("velocity vector length must match configuration")
    if t == 0.0:
        return pos.copy()
    psi = pos + t * lam
    hull = _hull_indices(_cumsum_comp(psi))
    phi = _positions_from_hull(psi, hull)
    # hull slopes are nondecreasing in exact arithmetic; block means can
    # disagree by one ulp, so re-impose the ordering explicitly
    return np.maximum.accumulate(phi)


def spd_positions_event_driven(x, lam, t):
    """Event-driven sticky dynamics; O(n^2), used as an independent oracle."""
    segs = spd_timeline(x, lam, t)
    s_last, pos_last, vel_last = segs[-1]
    return pos_last + (t - s_last) * vel_last


def spd_timeline(x, lam, horizon):
    """Piecewise-linear trajectories of the sticky dynamics on [0, horizon].

    Returns a list of segments ``(s, positions, velocities)``: from time s
    until the next segment every particle moves affinely as
    ``positions + (t - s) * velocities``.  Segment boundaries are the merge
    events; velocities are constant per cluster (mean of members).
    """
    pos = _as_positions(x).copy()
    lam = np.asarray(lam, dtype=float)
    n = len(pos)
    # clusters as index ranges [start, stop) with common position/velocity
    starts = list(range(n))
    stops = list(range(1, n + 1))
    cpos = pos.astype(float).tolist()
    cvel = lam.astype(float).tolist()

    def merge_touching():
        merged = True
        while merged:
            merged = False
            i = 0
            while i < len(starts) - 1:
                gap = cpos[i + 1] - cpos[i]
                scale = 1.0 + abs(cpos[i]) + abs(cpos[i + 1])
                if gap <= CLUSTER_TOL * scale and cvel[i] > cvel[i + 1]:
                    w0 = stops[i] - starts[i]
                    w1 = stops[i + 1] - starts[i + 1]
                    cvel[i] = (w0 * cvel[i] + w1 * cvel[i + 1]) / (w0 + w1)
                    cpos[i] = (w0 * cpos[i] + w1 * cpos[i + 1]) / (w0 + w1)
                    stops[i] = stops[i + 1]
                    del starts[i + 1], stops[i + 1], cpos[i + 1], cvel[i + 1]
                    merged = True
                else:
                    i += 1

    def snapshot(s):
        p = np.empty(n)
        v = np.empty(n)
        for i in range(len(starts)):
            p[starts[i]:stops[i]] = cpos[i]
            v[starts[i]:stops[i]] = cvel[i]
        return (s, p, v)

    merge_touching()
    segments = [snapshot(0.0)]
    s_cur = 0.0
    while True:
        # earliest adjacent-cluster collision
        t_next = np.inf
        for i in range(len(starts) - 1):
            dv = cvel[i] - cvel[i + 1]
            if dv > 0:
                tc = (cpos[i + 1] - cpos[i]) / dv
                if tc < t_next:
                    t_next = tc
        if s_cur + t_next > horizon or not np.isfinite(t_next):
            return segments
        s_cur += t_next
        for i in range(len(starts)):
            cpos[i] += t_next * cvel[i]
        merge_touching()
        segments.append(snapshot(s_cur))


def cluster_partition(x, lam, t):
    """Index ranges of clusters at time t with their common velocities.

    Positions within ``1e-12 * (1 + |x|)`` of each other count as one
    cluster; the velocity of a cluster is the mean of its members' initial
    velocities (equal masses).
    """
    phi = spd_positions(x, lam, t)
    lam = np.asarray(lam, dtype=float)
    ranges = []
    velocities = []
    start = 0
    for k in range(1, len(phi) + 1):
        if k == len(phi) or phi[k] - phi[k - 1] > CLUSTER_TOL * (1.0 + abs(phi[k])):
            ranges.append((start, k))
            velocities.append(float(np.mean(lam[start:k])))
            start = k
    return ranges, np.asarray(velocities)


@dataclass(frozen=True)
class EmpiricalCDF:
    """Step CDF of n equal 1/n jumps at sorted positions."""

    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if np.any(np.diff(pos) < 0):
            raise ValueError("jump positions must be sorted")
        object.__setattr__(self, "positions", pos)

    @property
    def n(self):
        return len(self.positions)

    def __call__(self, x):
        return np.searchsorted(self.positions, np.asarray(x, dtype=float),
                               side="right") / self.n


def empirical_cdf(x):
    return EmpiricalCDF(_as_positions(x))


def l1_distance(a, b):
    """L1 distance between two step CDFs (exact for unequal particle counts)."""
    if a.n == b.n:
        return float(np.mean(np.abs(a.positions - b.positions)))
    grid = np.union1d(a.positions, b.positions)
    return float(np.sum(np.abs(a(grid[:-1]) - b(grid[:-1])) * np.diff(grid)))


def flow_check(x, lam, s, t):
    """Both routes from 0 to t: direct, and restarted from the state at s.

    The restart uses the kinematic state: each particle carries its cluster
    velocity at time s.  The flow property of the dynamics makes the two
    outputs coincide.
    """
    if not 0 <= s <= t:
        raise ValueError("need 0 <= s <= t")
    direct = spd_positions(x, lam, t)
    y = spd_positions(x, lam, s)
    ranges, cvel = cluster_partition(x, lam, s)
    lam_cluster = np.empty(len(y))
    for (i, j), v in zip(ranges, cvel):
        lam_cluster[i:j] = v
    restarted = spd_positions(y, lam_cluster, t - s)
    return direct, restarted
