"""Command-line driver for the solver suite.

Subcommands: ``scalar-convergence``, ``scalar-field``, ``system-run``,
``delta-study``, ``quantize-study``, ``selftest``.  Options may come from a
JSON config document (``--config``) with individual flags overriding file
values.  Exit codes: 0 success, 2 validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench, csvio
from .measures import QuadratureError

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _parse_list(text, cast=float):
    return tuple(cast(tok) for tok in text.split(",") if tok)


def _add_common(sub):
    sub.add_argument("--config", type=Path, help="JSON config document")
    sub.add_argument("--out", help="output directory")
    sub.add_argument("--flux", help="flux or field spec string")
    sub.add_argument("--measure", help="comma-free measure specs joined by ';'")
    sub.add_argument("--n", help="comma-separated particle counts")
    sub.add_argument("--t", help="comma-separated output times")
    sub.add_argument("--delta", type=float, help="scheme time step")
    sub.add_argument("--deltas", help="comma-separated steps for delta-study")
    sub.add_argument("--resolution", type=int, help="reference particle count")
    sub.add_argument("--oracle", choices=("on", "off"), help="exact-dynamics oracle")
    sub.add_argument("--seed", type=int, help="seed for randomized suites")
    sub.add_argument("--timings", choices=("on", "off"),
                     help="record wall times (breaks byte-determinism)")


def _config_from(args):
    cfg = bench.RunConfig()
    if args.config:
        cfg = bench.RunConfig.from_json(args.config)
    overrides = {
        "out": args.out,
        "flux": args.flux,
        "measure": args.measure.split(";") if args.measure else None,
        "n": _parse_list(args.n, int) if args.n else None,
        "t": _parse_list(args.t) if args.t else None,
        "delta": args.delta,
        "deltas": _parse_list(args.deltas) if args.deltas else None,
        "resolution": args.resolution,
        "oracle": None if args.oracle is None else args.oracle == "on",
        "seed": args.seed,
        "timings": None if args.timings is None else args.timings == "on",
    }
    return cfg.merged(overrides)


def _out_dir(cfg):
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_scalar_convergence(cfg):
    records, slopes = bench.run_scalar_convergence(cfg)
    out = _out_dir(cfg)
    csvio.write_csv(out / "convergence.csv", "records", records)
    csvio.write_csv(out / "slopes.csv", "slopes", slopes)
    for t, slope in slopes:
        print(f"t={t:g}: slope {slope:+.4f} per doubling")
    print(f"wrote {out / 'convergence.csv'}")
    return 0


def cmd_scalar_field(cfg):
    rows = bench.run_scalar_field(cfg)
    out = _out_dir(cfg)
    csvio.write_csv(out / "field.csv", "field_scalar", rows)
    print(f"wrote {out / 'field.csv'} ({len(rows)} samples)")
    return 0


def cmd_system_run(cfg):
    field_rows, traj_rows, event_rows = bench.run_system(cfg)
    out = _out_dir(cfg)
    csvio.write_csv(out / "field.csv", "field_psystem", field_rows)
    csvio.write_csv(out / "trajectory.csv", "trajectory", traj_rows)
    if event_rows:
        csvio.write_csv(out / "events.csv", "events", event_rows)
        print(f"{len(event_rows)} crossing rows -> {out / 'events.csv'}")
    print(f"wrote {out / 'field.csv'} and {out / 'trajectory.csv'}")
    return 0


def cmd_delta_study(cfg):
    records, order = bench.run_delta_study(cfg)
    out = _out_dir(cfg)
    csvio.write_csv(out / "delta_study.csv", "records", records)
    print(f"empirical order in delta: {order:.3f}")
    print(f"wrote {out / 'delta_study.csv'}")
    return 0


def cmd_quantize_study(cfg):
    rows, fits = bench.run_quantize_study(cfg)
    out = _out_dir(cfg)
    csvio.write_csv(out / "quantize.csv", "quantize", rows)
    csvio.write_csv(out / "tail_fits.csv", "tail_fits", fits)
    for spec, slope in fits:
        print(f"{spec}: fitted exponent {slope:+.4f}")
    infinite = [r for r in rows if r[2] == float("inf")]
    if infinite:
        print(f"{len(infinite)} rows carry the infinite-distance sentinel")
    print(f"wrote {out / 'quantize.csv'}")
    return 0


def cmd_selftest(cfg):
    reports = bench.inequality_suites(seed=cfg.seed, trials=1000)
    failed = False
    for name, rep in reports.items():
        status = "PASS" if rep["ok"] else "FAIL"
        print(f"{status} {name}: worst violation {rep['worst']:+.3e} "
              f"over {rep['trials']} trials")
        failed |= not rep["ok"]
    return EXIT_NUMERICAL if failed else 0


_COMMANDS = {
    "scalar-convergence": cmd_scalar_convergence,
    "scalar-field": cmd_scalar_field,
    "system-run": cmd_system_run,
    "delta-study": cmd_delta_study,
    "quantize-study": cmd_quantize_study,
    "selftest": cmd_selftest,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stickywave",
        description="Sticky-particle solvers for 1-D conservation laws")
    subs = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        _add_common(subs.add_parser(name))
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed a message; normalise to validation code
        return EXIT_VALIDATION if exc.code not in (0, None) else 0
    try:
        cfg = _config_from(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        return _COMMANDS[args.command](cfg)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (QuadratureError, RuntimeError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
