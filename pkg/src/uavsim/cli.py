"""Command-line front end.

``uavsim run`` executes one or more scenario files and writes a CSV trace
plus a plain-text summary per scenario; ``uavsim siso-demo`` runs the scalar
airspeed-loop demonstration; ``uavsim check`` validates configs without
running them.  Exit codes: 0 success, 1 configuration error, 2 a run hit a
model singularity and aborted.
"""

from __future__ import annotations

import argparse
import multiprocessing
import sys

from .config import load_scenario
from .engine import RunResult, run, save_run
from .errors import ConfigError

_TABLE_KEYS = ("status", "runtime_s", "iae", "iacm", "int_abs_ev", "int_tx")


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="uavsim",
        description="Closed-loop fixed-wing attitude/airspeed control simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run scenario file(s)")
    run_p.add_argument("configs", nargs="+", metavar="CONFIG", help="YAML scenario file")
    run_p.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        dest="overrides",
        help="override a config entry by dotted path (repeatable)",
    )
    run_p.add_argument("--out", default=None, help="output directory (default: config out_dir)")
    run_p.add_argument("--seed", type=int, default=None, help="override the RNG seed")
    run_p.add_argument("--decimate", type=int, default=None, help="record every k-th step")
    run_p.add_argument("--jobs", type=int, default=1, help="run configs in parallel")
    run_p.add_argument("--quiet", action="store_true", help="suppress the summary table")

    demo_p = sub.add_parser("siso-demo", help="run the scalar airspeed-loop demo")
    demo_p.add_argument(
        "config",
        nargs="?",
        default=None,
        metavar="CONFIG",
        help="optional YAML (duration/dt/x0/out plus a params mapping)",
    )
    demo_p.add_argument(
        "--set",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        dest="overrides",
        help="override a config entry by dotted path (repeatable)",
    )
    demo_p.add_argument("--duration", type=float, default=None)
    demo_p.add_argument("--dt", type=float, default=None)
    demo_p.add_argument("--out", default=None, help="trace CSV path (default runs/siso_demo.csv)")

    check_p = sub.add_parser("check", help="validate scenario file(s) and exit")
    check_p.add_argument("configs", nargs="+", metavar="CONFIG")
    return parser


def _load(path: str, args):
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.decimate is not None:
        overrides.append(f"decimate={args.decimate}")
    if args.out is not None:
        overrides.append(f"out_dir={args.out}")
    return load_scenario(path, overrides)


def _run_one(cfg) -> RunResult:
    result = run(cfg)
    save_run(result)
    return result


def _print_table(results) -> None:
    name_w = max(len(r.config.name) for r in results)
    header = f"{'scenario':<{name_w}}  " + "  ".join(f"{k:>10}" for k in _TABLE_KEYS)
    print(header)
    for r in results:
        cells = []
        for key in _TABLE_KEYS:
            value = r.summary.get(key)
            cells.append(f"{value:>10.4g}" if isinstance(value, float) else f"{value:>10}")
        print(f"{r.config.name:<{name_w}}  " + "  ".join(cells))
    for r in results:
        if r.summary["status"] != "ok":
            print(f"{r.config.name}: aborted: {r.summary.get('abort_message', '?')}")


def _cmd_run(args) -> int:
    try:
        configs = [_load(path, args) for path in args.configs]
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.jobs > 1 and len(configs) > 1:
        with multiprocessing.Pool(min(args.jobs, len(configs))) as pool:
            results = pool.map(_run_one, configs)
    else:
        results = [_run_one(cfg) for cfg in configs]
    if not args.quiet:
        _print_table(results)
    return 2 if any(r.summary["status"] != "ok" for r in results) else 0


_DEMO_KEYS = {"duration", "dt", "x0", "out", "params"}


def _cmd_siso_demo(args) -> int:
    import csv
    import dataclasses
    import os

    from .config import apply_overrides, load_config
    from .smc_airspeed import AirspeedSmcParams, run_siso_demo, siso_demo_params

    try:
        data = load_config(args.config) if args.config else {}
        if args.overrides:
            apply_overrides(data, args.overrides)
        unknown = sorted(set(data) - _DEMO_KEYS)
        if unknown:
            raise ConfigError(f"siso demo config: unknown key {unknown[0]!r}")
        params = siso_demo_params()
        if "params" in data:
            valid = {f.name for f in dataclasses.fields(AirspeedSmcParams)}
            bad = sorted(set(data["params"]) - valid)
            if bad:
                raise ConfigError(f"params.{bad[0]}: unknown key")
            params = dataclasses.replace(params, **data["params"])
        duration = args.duration if args.duration is not None else float(data.get("duration", 30.0))
        dt = args.dt if args.dt is not None else float(data.get("dt", 1e-3))
        x0 = float(data.get("x0", 1.0))
        out = args.out if args.out is not None else data.get("out", "runs/siso_demo.csv")
        trace = run_siso_demo(params=params, duration=duration, dt=dt, x0=x0)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"siso demo: {len(trace['t'])} samples, final |x| = {abs(trace['x'][-1]):.3e}, "
          f"max L_v = {max(trace['lv']):.3f}")
    if out:
        parent = os.path.dirname(out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        keys = list(trace)
        with open(out, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(keys)
            for i in range(len(trace["t"])):
                writer.writerow([repr(float(trace[k][i])) for k in keys])
        print(f"wrote {out}")
    return 0


def _cmd_check(args) -> int:
    status = 0
    for path in args.configs:
        try:
            cfg = load_scenario(path)
        except (ConfigError, OSError) as exc:
            print(f"{path}: error: {exc}", file=sys.stderr)
            status = 1
        else:
            print(f"{path}: ok ({cfg.name}, {cfg.duration:g} s, {cfg.controller})")
    return status


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "siso-demo":
        return _cmd_siso_demo(args)
    return _cmd_check(args)


if __name__ == "__main__":
    sys.exit(main())
