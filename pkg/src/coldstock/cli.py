"""Command-line entry points.

    coldstock simulate --scenario demo.scenario --seed 42 --out run/
    coldstock calibrate --pairs pairs.csv
    coldstock errors --table 2
    coldstock serve --port 8000 --scenario demo.scenario --seed 42

Exit codes: 0 success, 2 usage or parse problem, 3 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .benchdata import TABLES, recompute
from .errors import ColdstockError, DegenerateDataError, ScenarioParseError
from .plant import load_scenario
from .sensing import fit_calibration, load_calibration_pairs
from .sim import DEFAULT_DRAIN_MS, Simulation, run_simulation
from .webapi import ApiServer

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RUNTIME = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coldstock")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario end to end and write artifacts")
    p_sim.add_argument("--scenario", required=True)
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--out", required=True)
    p_sim.add_argument("--drain-ms", type=int, default=DEFAULT_DRAIN_MS)
    p_sim.add_argument("--dump-sms", default=None, help="override the SMS trace path")

    p_cal = sub.add_parser("calibrate", help="fit factor/offset from a raw,kg CSV")
    p_cal.add_argument("--pairs", required=True)

    p_err = sub.add_parser("errors", help="recompute a bench trial table")
    p_err.add_argument("--table", type=int, required=True, choices=sorted(TABLES))

    p_srv = sub.add_parser("serve", help="serve the gateway API over an embedded simulation")
    p_srv.add_argument("--port", type=int, required=True)
    p_srv.add_argument("--scenario", required=True)
    p_srv.add_argument("--seed", type=int, required=True)
    p_srv.add_argument("--realtime-factor", type=float, default=1.0,
                       help="simulated ms advanced per wall ms")
    p_srv.add_argument("--out", default=None, help="persist the event log under this directory")
    p_srv.add_argument("--ui", default=None, help="also serve static files from this directory")
    return parser


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        events = load_scenario(args.scenario)
    except ScenarioParseError as exc:
        print(f"{args.scenario}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cannot read scenario: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = run_simulation(
            events, seed=args.seed, out_dir=args.out,
            drain_ms=args.drain_ms, sms_trace_path=args.dump_sms,
        )
    except (ColdstockError, OSError) as exc:
        print(f"simulation failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    print(json.dumps(report.to_json(), indent=2))
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    try:
        pairs = load_calibration_pairs(args.pairs)
        cal = fit_calibration(pairs)
    except (DegenerateDataError, ValueError, OSError) as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps({"factor": cal.factor, "offset": cal.offset}))
    return EXIT_OK


def cmd_errors(args: argparse.Namespace) -> int:
    result = recompute(TABLES[args.table])
    table = result.table
    print(f"table {args.table}: {table.name}")
    print(f"{'actual':>10} {'measured':>10} {'recorded%':>10} {'recomputed%':>12} {'delta':>10}")
    for row in result.rows:
        print(
            f"{row.actual:>10.3f} {row.measured:>10.3f} {row.recorded_pct:>10.3f} "
            f"{row.recomputed_pct:>12.6f} {row.delta:>10.6f}"
        )
    print(f"success_rate_quoted     = {table.quoted_success_pct}")
    print(f"success_rate_recomputed = {result.recomputed_success_pct:.4f}")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        events = load_scenario(args.scenario)
    except ScenarioParseError as exc:
        print(f"{args.scenario}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.realtime_factor <= 0:
        print("realtime factor must be positive", file=sys.stderr)
        return EXIT_USAGE
    log_path = None
    if args.out:
        from pathlib import Path

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        log_path = str(out / "event_log.ndjson")
    sim = Simulation(events, seed=args.seed, log_path=log_path)
    server = ApiServer(sim.gateway, port=args.port, check_hook=sim.request_check, ui_dir=args.ui)
    server.start()
    print(f"serving on http://127.0.0.1:{server.port} (simulated clock x{args.realtime_factor})")
    sys.stdout.flush()
    wall_start = time.monotonic()
    try:
        while True:
            target_ms = int((time.monotonic() - wall_start) * 1000 * args.realtime_factor)
            sim.run_until(target_ms)
            time.sleep(0.02)
    except KeyboardInterrupt:
        pass
    finally:
        server.stop()
        sim.close()
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "calibrate": cmd_calibrate,
        "errors": cmd_errors,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
