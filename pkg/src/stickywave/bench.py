"""Benchmark harness: convergence studies, field/trajectory exports and the
randomized inequality suites.

All functions here are pure given a ``RunConfig`` (wall-clock columns are
zeroed unless timings are switched on), which keeps CSV outputs
byte-identical across runs of the same configuration.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import mspd, references
from .fluxes import parse_field, parse_flux, psystem_recover
from .measures import AtomMeasure, optimal_quantize, parse_measure, w1
from .spd import empirical_cdf, init_velocities, spd_positions

__all__ = [
    "RunConfig",
    "fit_slope_per_doubling",
    "scalar_reference",
    "run_scalar_convergence",
    "run_scalar_field",
    "run_system",
    "run_delta_study",
    "run_quantize_study",
    "inequality_suites",
]


@dataclass(frozen=True)
class RunConfig:
    """Experiment manifest; mirrors the JSON config document."""

    mode: str = "scalar"
    flux: str = "burgers"
    measure: tuple = ("heaviside:0",)
    n: tuple = (64,)
    t: tuple = (1.0,)
    delta: float = 0.05
    deltas: tuple = (0.2, 0.1, 0.05, 0.025)
    resolution: int = 2 ** 16
    nx: int = 201
    oracle: bool = True
    oracle_cap: int = mspd.EXACT_CAP
    seed: int = 0
    timings: bool = False
    out: str = "out"

    @staticmethod
    def from_json(path):
        with open(path) as fh:
            raw = json.load(fh)
        return RunConfig().merged(raw)

    def merged(self, overrides):
        clean = {}
        for key, val in overrides.items():
            if val is None:
                continue
            if key in ("measure", "n", "t", "deltas"):
                val = tuple(val) if isinstance(val, (list, tuple)) else (val,)
            clean[key] = val
        return replace(self, **clean)


def fit_slope_per_doubling(ns, errs):
    """Slope of ln(error) against log2(n); -log 2 for a clean 1/n decay."""
    return float(np.polyfit(np.log2(ns), np.log(errs), 1)[0])


def _is_two_atom_pm1(measure):
    return (isinstance(measure, AtomMeasure) and len(measure.points) == 2
            and np.allclose(measure.points, [-1.0, 1.0])
            and np.allclose(measure.weights, [0.5, 0.5]))


def scalar_reference(flux, measure, t, resolution):
    """Ground truth for a scalar run: closed form when known, else a
    high-resolution particle run (exact for concave fluxes)."""
    if flux.name == "burgers":
        if isinstance(measure, AtomMeasure) and len(measure.points) == 1:
            ref = references.burgers_delta_ref(t)
            shift = float(measure.points[0])
            return references.PiecewiseLinearRef(ref.xs + shift, ref.fl, ref.fr)
        if _is_two_atom_pm1(measure):
            return references.two_rarefaction_ref(t)
    return references.concave_reference(t, resolution=resolution,
                                        measure=measure, flux=flux)


def _maybe_time(clock_on):
    return time.perf_counter() if clock_on else 0.0


def run_scalar_convergence(cfg):
    """Error records against the reference for every (n, t), plus the per-t
    slope of ln(error) vs log2(n)."""
    flux = parse_flux(cfg.flux)
    measure = parse_measure(cfg.measure[0])
    records = []
    slopes = []
    for t in cfg.t:
        ref = scalar_reference(flux, measure, t, cfg.resolution)
        errs = []
        for n in cfg.n:
            tic = _maybe_time(cfg.timings)
            atoms = optimal_quantize(measure, n).atoms
            lam = init_velocities(flux, n)
            phi = spd_positions(atoms, lam, t)
            err = references.l1_vs_reference(empirical_cdf(phi), ref)
            wall = _maybe_time(cfg.timings) - tic
            records.append((n, 0.0, float(t), err, wall))
            errs.append(err)
        if len(cfg.n) >= 2 and all(e > 0 for e in errs):
            slopes.append((float(t), fit_slope_per_doubling(cfg.n, errs)))
    return records, slopes


def run_scalar_field(cfg):
    """Empirical CDF sampled on a regular (t, x) grid; rows (t, x, value)."""
    flux = parse_flux(cfg.flux)
    measure = parse_measure(cfg.measure[0])
    n = cfg.n[0]
    atoms = optimal_quantize(measure, n).atoms
    lam = init_velocities(flux, n)
    snapshots = [(t, spd_positions(atoms, lam, t)) for t in cfg.t]
    lo = min(s.min() for _, s in snapshots)
    hi = max(s.max() for _, s in snapshots)
    pad = 0.05 * max(hi - lo, 1e-9)
    grid = np.linspace(lo - pad, hi + pad, cfg.nx)
    rows = []
    for t, phi in snapshots:
        cdf = empirical_cdf(phi)
        for x, v in zip(grid, cdf(grid)):
            rows.append((float(t), float(x), float(v)))
    return rows


def _quantize_multi(measure_specs, n):
    cols = [optimal_quantize(parse_measure(s), n).atoms for s in measure_specs]
    return mspd.MultiConfig(np.stack(cols))


def run_system(cfg):
    """Iterated-scheme run of a two-type system.

    Returns (field_rows, trajectory_rows, event_rows).  Field rows follow
    the p-system schema (Riemann invariants plus recovered volume and
    velocity); the event log is produced by the exact dynamics when the
    oracle is enabled and the size cap allows.
    """
    fields, psys = parse_field(cfg.flux)
    ranges = fields.audit_speed_ranges()
    for g in range(fields.d - 1):
        gap = ranges[g][0] - ranges[g + 1][1]
        if gap < 0.999 * fields.ush_gap:
            raise ValueError(
                f"hyperbolicity audit failed: gap {gap:.6g} between types "
                f"{g + 1} and {g + 2} is below 0.999 * {fields.ush_gap:.6g}")
    if len(cfg.measure) != fields.d:
        raise ValueError(f"need {fields.d} measure specs, got {len(cfg.measure)}")
    n = cfg.n[0]
    x0 = _quantize_multi(cfg.measure, n)
    t_max = max(cfg.t)
    grid_times = sorted({round(k * cfg.delta, 12) for k in
                         range(int(t_max / cfg.delta) + 1)} | set(cfg.t))
    path = mspd.iterated_tspd_path(x0, fields, cfg.delta, grid_times)

    trajectory_rows = []
    for t, state in path:
        for g in range(state.d):
            for k in range(state.n):
                trajectory_rows.append(
                    (float(t), g + 1, k + 1, float(state.positions[g, k])))

    states = dict(path)
    lo = min(s.positions.min() for s in states.values())
    hi = max(s.positions.max() for s in states.values())
    pad = 0.05 * max(hi - lo, 1e-9)
    grid = np.linspace(lo - pad, hi + pad, cfg.nx)
    field_rows = []
    for t in cfg.t:
        state = states[float(t)]
        wm = empirical_cdf(state.positions[0])(grid)
        wp = empirical_cdf(state.positions[1])(grid)
        u, v = psystem_recover(wm, wp, psys)
        for j, x in enumerate(grid):
            field_rows.append((float(t), float(x), float(wm[j]), float(wp[j]),
                               float(u[j]), float(v[j])))

    event_rows = []
    if cfg.oracle and x0.n * x0.d <= cfg.oracle_cap:
        _, events = mspd.mspd_exact_path(x0, fields, [t_max], cap=cfg.oracle_cap)
        idx = 0
        for ev in events:
            for a, i, b, j in ev.pairs:
                event_rows.append((idx, float(ev.time), a + 1, i + 1, b + 1, j + 1))
                idx += 1
    return field_rows, trajectory_rows, event_rows


def run_delta_study(cfg):
    """Worst-case gap between the exact dynamics and the iterated scheme
    over a common time grid, for each step size; returns (records, order)."""
    fields, _ = parse_field(cfg.flux)
    n = cfg.n[0]
    if n * fields.d > cfg.oracle_cap:
        raise ValueError(f"n*d = {n * fields.d} exceeds oracle cap {cfg.oracle_cap}")
    x0 = _quantize_multi(cfg.measure, n)
    t_max = max(cfg.t)
    coarse = max(cfg.deltas)
    grid_times = [k * coarse for k in range(1, int(round(t_max / coarse)) + 1)]
    exact_states, _ = mspd.mspd_exact_path(x0, fields, grid_times,
                                           cap=cfg.oracle_cap)
    exact = dict(exact_states)
    records = []
    errors = []
    for delta in sorted(cfg.deltas, reverse=True):
        tic = _maybe_time(cfg.timings)
        approx = mspd.iterated_tspd_path(x0, fields, delta, grid_times)
        err = max(mspd.multi_l1(exact[t], state) for t, state in approx)
        wall = _maybe_time(cfg.timings) - tic
        records.append((n, float(delta), float(t_max), err, wall))
        errors.append(err)
    order = float("nan")
    if all(e > 0 for e in errors) and len(errors) >= 2:
        order = float(np.polyfit(np.log(sorted(cfg.deltas, reverse=True)),
                                 np.log(errors), 1)[0])
    return records, order


def run_quantize_study(cfg):
    """W1(m, optimal n-quantizer) per measure and n, plus log-log tail fits.

    Measures at infinite W1 distance produce ``inf`` rows and no fit.
    """
    rows = []
    fits = []
    for spec in cfg.measure:
        m = parse_measure(spec)
        dists = []
        for n in cfg.n:
            d = w1(m, optimal_quantize(m, n))
            rows.append((spec, n, d))
            dists.append(d)
        if all(math.isfinite(d) and d > 0 for d in dists) and len(cfg.n) >= 2:
            slope = float(np.polyfit(np.log(cfg.n), np.log(dists), 1)[0])
            fits.append((spec, slope))
    return rows, fits


# ---------------------------------------------------------------------------
# randomized inequality suites (selftest + acceptance)
# ---------------------------------------------------------------------------

def _random_scalar_instance(rng):
    n = int(rng.integers(2, 49))
    x = np.sort(rng.normal(0.0, 2.0, n))
    y = np.sort(rng.normal(0.0, 2.0, n))
    lam = rng.normal(0.0, 1.5, n)
    mu = rng.normal(0.0, 1.5, n)
    s = float(rng.uniform(0.0, 2.0))
    t = s + float(rng.uniform(0.0, 3.0))
    return n, x, y, lam, mu, s, t


def _norm1(a, b):
    return float(np.mean(np.abs(a - b)))


def inequality_suites(seed=0, trials=1000, slack=1e-9):
    """Run the six randomized inequality suites; returns per-suite reports.

    Each report carries the worst signed violation (negative = satisfied
    with margin) and the pass flag at the given slack.
    """
    rng = np.random.default_rng(seed)
    worst = {name: -np.inf for name in (
        "stability", "contraction", "two_flux", "ush_gap",
        "momentum", "finite_speed")}

    fields, _ = parse_field("psystem:nu=0.5,kappa=5")
    burgers = parse_flux("burgers")
    concave = parse_flux("concave_lwr")

    for _ in range(trials):
        n, x, y, lam, mu, s, t = _random_scalar_instance(rng)

        # stability of the flow in configuration and velocities
        lhs = _norm1(spd_positions(x, lam, t), spd_positions(y, mu, t))
        rhs = _norm1(spd_positions(x, lam, s), spd_positions(y, mu, s)) \
            + (t - s) * float(np.mean(np.abs(lam - mu)))
        worst["stability"] = max(worst["stability"], lhs - rhs)

        # L1 contraction for a common velocity vector
        lhs = _norm1(spd_positions(x, lam, t), spd_positions(y, lam, t))
        worst["contraction"] = max(worst["contraction"], lhs - _norm1(x, y))

        # same start, two velocity vectors; also the flux-level bound for
        # the built-in pair, whose speed gap integrates to 5/8
        lhs = _norm1(spd_positions(x, lam, t), spd_positions(x, mu, t))
        rhs = t * float(np.mean(np.abs(lam - mu)))
        worst["two_flux"] = max(worst["two_flux"], lhs - rhs)
        lam_b = init_velocities(burgers, n)
        lam_c = init_velocities(concave, n)
        lhs = _norm1(spd_positions(x, lam_b, t), spd_positions(x, lam_c, t))
        worst["two_flux"] = max(worst["two_flux"], lhs - t * 0.625)

        # momentum (endpoint) conservation, relative to the momentum scale
        phi = spd_positions(x, lam, t)
        scale = max(1.0, float(np.sum(np.abs(x))), float(t * np.sum(np.abs(lam))))
        gap = abs(float(np.sum(phi) - np.sum(x) - t * np.sum(lam))) / scale
        worst["momentum"] = max(worst["momentum"], gap)

        # no particle outruns the speed bound
        m_bound = float(np.max(np.abs(lam)))
        worst["finite_speed"] = max(
            worst["finite_speed"], float(np.max(np.abs(phi - x))) - t * m_bound)

        # strict-hyperbolicity gap decrease across one typewise step
        n2 = int(rng.integers(1, 13))
        pos = np.stack([np.sort(rng.normal(0.0, 1.5, n2)),
                        np.sort(rng.normal(0.0, 1.5, n2))])
        y2 = mspd.MultiConfig(pos)
        delta = float(rng.uniform(0.01, 0.3))
        z2 = mspd.tspd_step(y2, fields, delta)
        before = pos[1][None, :] - pos[0][:, None]
        after = z2.positions[1][None, :] - z2.positions[0][:, None]
        worst["ush_gap"] = max(
            worst["ush_gap"],
            float(np.max(after - before + fields.ush_gap * delta)))

    return {
        name: {"trials": trials, "worst": val, "ok": bool(val <= slack)}
        for name, val in worst.items()
    }
