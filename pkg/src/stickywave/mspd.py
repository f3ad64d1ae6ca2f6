"""Multitype sticky particle dynamics and its time-stepped approximation.

``d`` systems of ``n`` equal-mass particles evolve on the line.  Within a
type, particles follow the scalar sticky dynamics; across types they cross
each other, and crossings re-trigger the rank-dependent velocity
assignment.  Two evolutions are provided:

* ``iterated_tspd`` re-evaluates velocities only on a uniform time grid of
  step delta (typewise sticky dynamics in between), which is the practical
  scheme;
* ``mspd_exact`` processes every cross-type crossing event exactly and is
  used as the reference oracle at small particle counts.

Velocity assignment freezes, for each particle, the scaled ranks of that
particle within the foreign systems and averages its own-type speed over
its own mass cell.  Rank ties at shared positions follow the
post-collisional order: faster (lower) types count coincident slower
particles as already overtaken, and vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .spd import spd_positions, spd_timeline

__all__ = [
    "MultiConfig",
    "RankTable",
    "MSPDEvent",
    "CollisionLedger",
    "ranks",
    "tspd_velocities",
    "tspd_step",
    "iterated_tspd",
    "iterated_tspd_path",
    "mspd_exact",
    "mspd_exact_path",
    "collision_ledger",
    "collision_count",
    "duplicate",
    "multi_l1",
]

#: default cap on n*d for the exact event-driven dynamics
EXACT_CAP = 512


@dataclass(frozen=True)
class MultiConfig:
    """d sorted position vectors of length n (one per type)."""

    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[0] < 1 or pos.shape[1] < 1:
            raise ValueError("positions must be a (d, n) array")
        if np.any(np.diff(pos, axis=1) < 0):
            raise ValueError("each typewise vector must be sorted")
        object.__setattr__(self, "positions", pos)

    @property
    def d(self):
        return self.positions.shape[0]

    @property
    def n(self):
        return self.positions.shape[1]


def _as_multi(x):
    if isinstance(x, MultiConfig):
        return x
    return MultiConfig(np.asarray(x, dtype=float))


@dataclass(frozen=True)
class RankTable:
    """Scaled ranks omega[g, k, g'] of particle g:k within system g'.

    Entries on the own-type diagonal are NaN (a particle has no rank within
    its own system; its own coordinate is integrated over its mass cell).
    Counting is strict below the own type and non-strict above it, which
    encodes the post-collisional order at shared positions.
    """

    omega: np.ndarray


def ranks(x):
    """Rank table of a configuration, by one merged position sweep."""
    x = _as_multi(x)
    d, n = x.d, x.n
    all_pos = x.positions.reshape(-1)
    all_type = np.repeat(np.arange(d), n)
    all_k = np.tile(np.arange(n), d)
    # position ascending; ties processed higher type first, which realises
    # the strict/non-strict tie conventions in a single pass
    order = np.lexsort((-all_type, all_pos))
    omega = np.empty((d, n, d))
    t_ord, k_ord = all_type[order], all_k[order]
    for gp in range(d):
        ind = (t_ord == gp).astype(np.int64)
        before = np.cumsum(ind) - ind
        omega[t_ord, k_ord, gp] = before / n
    for g in range(d):
        omega[g, :, g] = np.nan
    return RankTable(omega)


def tspd_velocities(x, fields):
    """Initial velocities: own-cell averages at frozen foreign ranks."""
    x = _as_multi(x)
    table = ranks(x)
    k = np.arange(1, x.n + 1)
    vel = np.empty((x.d, x.n))
    for g in range(x.d):
        vel[g] = fields.cell_velocity(g, k, x.n, table.omega[g])
    return vel


def tspd_step(x, fields, delta):
    """One typewise step: each type runs the scalar sticky dynamics
    independently for a duration delta with velocities frozen at the start."""
    x = _as_multi(x)
    if delta < 0:
        raise ValueError("delta must be >= 0")
    if delta == 0:
        return x
    vel = tspd_velocities(x, fields)
    out = np.stack([spd_positions(x.positions[g], vel[g], delta)
                    for g in range(x.d)])
    return MultiConfig(out)


def iterated_tspd(x, fields, delta, t):
    """Iterated typewise scheme: full steps of length delta, then one
    shortened step to land exactly on t."""
    return iterated_tspd_path(x, fields, delta, [t])[0][1]


def iterated_tspd_path(x, fields, delta, times):
    """States of the iterated scheme at several times (single grid sweep).

    Returns ``[(t, MultiConfig), ...]`` in ascending time order.  Off-grid
    times are reached by a shortened typewise step from the last grid state;
    the sweep itself always continues from grid states.
    """
    x = _as_multi(x)
    if delta <= 0:
        raise ValueError("delta must be > 0")
    times = sorted(float(t) for t in times)
    if times and times[0] < 0:
        raise ValueError("times must be >= 0")
    out = []
    cur = x
    t_grid = 0.0
    slack = 1e-12 * max(1.0, delta)
    for t in times:
        while t_grid + delta <= t + slack:
            cur = tspd_step(cur, fields, delta)
            t_grid += delta
        rem = max(t - t_grid, 0.0)
        out.append((t, tspd_step(cur, fields, rem) if rem > slack else cur))
    return out


@dataclass(frozen=True)
class MSPDEvent:
    """A cross-type crossing: all pairs meeting at one instant."""

    time: float
    pairs: tuple  # of (alpha, i, beta, j), 0-based, alpha < beta


@dataclass(frozen=True)
class CollisionLedger:
    """Pairs currently ahead of a crossing, with their crossing times.

    ``pairs[(alpha, i, beta, j)]`` maps to the crossing time in the exact
    dynamics started at the ledger's base configuration, for every pair that
    crosses within the examined window; ``n_delta`` counts them.
    """

    window: float
    pairs: dict = field(default_factory=dict)

    @property
    def n_delta(self):
        return len(self.pairs)


def _eval_timeline(segments, s):
    lo = 0
    for idx in range(len(segments) - 1, -1, -1):
        if segments[idx][0] <= s + 1e-15:
            lo = idx
            break
    s0, pos, vel = segments[lo]
    return pos + (s - s0) * vel, vel


def _earliest_crossings(timelines, horizon, crossed, d):
    """Scan all type pairs for the earliest crossing; returns
    (tau, [(a, i, b, j), ...]) with every pair meeting within a tie
    tolerance of tau, or (None, [])."""
    best = np.inf
    for a in range(d):
        for b in range(a + 1, d):
            tau = _pair_crossing_scan(timelines[a], timelines[b],
                                      horizon, crossed[(a, b)], best)
            if tau < best:
                best = tau
    if not np.isfinite(best):
        return None, []
    tol = 1e-12 * (1.0 + best)
    hits = []
    for a in range(d):
        for b in range(a + 1, d):
            hits.extend(
                (a, i, b, j)
                for i, j in _pair_crossing_collect(
                    timelines[a], timelines[b], horizon,
                    crossed[(a, b)], best + tol))
    return best, hits


def _pair_pieces(segs_a, segs_b, horizon):
    bounds = sorted({s for s, _, _ in segs_a} | {s for s, _, _ in segs_b}
                    | {0.0, horizon})
    return [(s0, s1) for s0, s1 in zip(bounds[:-1], bounds[1:])
            if s1 <= horizon + 1e-15 and s1 > s0]


def _pair_crossing_scan(segs_a, segs_b, horizon, crossed_mask, cutoff):
    best = np.inf
    for s0, s1 in _pair_pieces(segs_a, segs_b, horizon):
        if s0 >= min(best, cutoff):
            break
        pa, va = _eval_timeline(segs_a, s0)
        pb, vb = _eval_timeline(segs_b, s0)
        gap = pb[None, :] - pa[:, None]
        rel = va[:, None] - vb[None, :]
        reach = gap - rel * (s1 - s0)
        cand = (gap > 0) & (reach <= 0) & (rel > 0) & ~crossed_mask
        if np.any(cand):
            tau = s0 + np.min(gap[cand] / rel[cand])
            best = min(best, tau)
    return best


def _pair_crossing_collect(segs_a, segs_b, horizon, crossed_mask, t_max):
    hits = []
    seen = np.zeros_like(crossed_mask)
    for s0, s1 in _pair_pieces(segs_a, segs_b, horizon):
        if s0 > t_max:
            break
        pa, va = _eval_timeline(segs_a, s0)
        pb, vb = _eval_timeline(segs_b, s0)
        gap = pb[None, :] - pa[:, None]
        rel = va[:, None] - vb[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            tau = np.where(rel > 0, gap / rel, np.inf) + s0
        cand = (gap > 0) & (tau <= t_max) & (tau <= s1 + 1e-15) \
            & ~crossed_mask & ~seen
        for i, j in zip(*np.nonzero(cand)):
            hits.append((int(i), int(j)))
            seen[i, j] = True
    return hits


def _snap_event_positions(pos, hits):
    """Set the particles of every crossing group to one shared position.

    Coincidence must be exact for the rank tie conventions to see the
    post-collisional order, so crossing partners are snapped to their group
    mean (a perturbation at rounding level only).
    """
    parent = {}

    def find(u):
        while parent.get(u, u) != u:
            u = parent.get(u, u)
        return u

    for a, i, b, j in hits:
        ra, rb = find((a, i)), find((b, j))
        if ra != rb:
            parent[ra] = rb
    groups = {}
    for a, i, b, j in hits:
        for node in ((a, i), (b, j)):
            groups.setdefault(find(node), set()).add(node)
    for members in groups.values():
        value = float(np.mean([pos[g][k] for g, k in members]))
        for g, k in members:
            pos[g][k] = value
    # restore exact typewise sortedness after the snap (rounding-level moves)
    for g in range(pos.shape[0]):
        np.maximum.accumulate(pos[g], out=pos[g])


def mspd_exact_path(x, fields, times, cap=EXACT_CAP):
    """Exact event-driven multitype dynamics, evaluated at several times.

    Between cross-type crossings each type runs the scalar sticky dynamics
    with frozen velocities; every particle trajectory is then piecewise
    linear, so crossing instants solve linear equations exactly.  At each
    crossing the configuration is advanced, ranks are recomputed with the
    post-collisional tie convention and velocities reassigned.

    Returns ``(states, events)`` where ``states`` is ``[(t, MultiConfig)]``
    for the requested times (ascending) and ``events`` the ordered crossing
    log.  Raises if ``n * d`` exceeds ``cap`` or the event budget blows up.
    """
    x = _as_multi(x)
    d, n = x.d, x.n
    if n * d > cap:
        raise ValueError(f"n*d = {n * d} exceeds the exact-dynamics cap {cap}")
    times = sorted(float(t) for t in times)
    if times and times[0] < 0:
        raise ValueError("times must be >= 0")
    t_end = times[-1] if times else 0.0
    crossed = {(a, b): np.zeros((n, n), dtype=bool)
               for a in range(d) for b in range(a + 1, d)}
    max_events = n * n * d * (d - 1) // 2 + 8
    pos = x.positions.copy()
    t_cur = 0.0
    events = []
    states = []
    remaining = list(times)

    while True:
        vel = tspd_velocities(MultiConfig(pos), fields)
        horizon = t_end - t_cur
        timelines = [spd_timeline(pos[g], vel[g], horizon) for g in range(d)]
        tau, hits = _earliest_crossings(timelines, horizon, crossed, d)
        upto = t_cur + (tau if tau is not None else horizon)
        while remaining and remaining[0] <= upto + 1e-15:
            t_req = remaining.pop(0)
            snap = np.stack([
                np.maximum.accumulate(
                    _eval_timeline(timelines[g], t_req - t_cur)[0])
                for g in range(d)])
            states.append((t_req, MultiConfig(snap)))
        if tau is None:
            break
        pos = np.stack([_eval_timeline(timelines[g], tau)[0]
                        for g in range(d)])
        for a, i, b, j in hits:
            crossed[(a, b)][i, j] = True
        _snap_event_positions(pos, hits)
        t_cur += tau
        events.append(MSPDEvent(time=t_cur, pairs=tuple(hits)))
        if len(events) > max_events:
            raise RuntimeError(
                f"event budget exceeded ({len(events)} crossings); "
                f"last pairs {hits!r} at t={t_cur}")
    return states, events


def mspd_exact(x, fields, t, cap=EXACT_CAP):
    """State of the exact dynamics at time t, plus the ordered event log."""
    states, events = mspd_exact_path(x, fields, [t], cap=cap)
    return states[0][1], events


def collision_ledger(y, fields, delta, cap=EXACT_CAP):
    """Crossing times, within [0, delta], of the pairs ahead of a crossing."""
    y = _as_multi(y)
    _, events = mspd_exact_path(y, fields, [delta], cap=cap)
    pairs = {}
    for ev in events:
        for key in ev.pairs:
            pairs.setdefault(key, ev.time)
    return CollisionLedger(window=float(delta), pairs=pairs)


def collision_count(y, fields, delta, cap=EXACT_CAP):
    """Number of crossings the exact dynamics performs within [0, delta]."""
    return collision_ledger(y, fields, delta, cap=cap).n_delta


def duplicate(x):
    """Split every particle into two copies at the same position.

    The normalised L1 distance between configurations is preserved exactly.
    """
    x = _as_multi(x)
    return MultiConfig(np.repeat(x.positions, 2, axis=1))


def multi_l1(x, y):
    """Normalised L1 distance on configurations: mean absolute gap times d."""
    x, y = _as_multi(x), _as_multi(y)
    if x.positions.shape != y.positions.shape:
        raise ValueError("configurations must share (d, n)")
    return float(np.sum(np.abs(x.positions - y.positions)) / x.n)
