#!/usr/bin/env python3
"""
entcomm - experiment runner
Reproduces the advantage ratios, the vertex counts and the tilted sweep
"""
import argparse
import json
import logging
import sys
import time
from pathlib import Path

from ..config import logger, recording_settings
from ..errors import EntcommError
from . import experiments
from .records import ExperimentRecord, ExperimentRecorder
from .report import render, report
from .schema import load_schema


def parse_arguments(argv=None):
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(
        prog="entcomm", description="Distinguishability-constrained communication experiments"
    )

    # Shared settings
    parser.add_argument("--seed", type=int, default=recording_settings["seed"], help="Random seed")
    parser.add_argument(
        "--output-dir",
        default=recording_settings["results_dir"],
        help="Base directory for experiment records",
    )
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")

    sub = parser.add_subparsers(dest="command", required=True)

    rac = sub.add_parser("rac", help="Random access codes")
    rac.add_argument("--n", type=int, default=2, help="Number of dits")
    rac.add_argument("--d", type=int, default=2, help="Dit size")

    graph = sub.add_parser("graph", help="Equality problem on a graph")
    graph.add_argument("--cycle", type=int, help="Odd cycle with this many vertices")
    graph.add_argument("--edges", help="Edge list file, 1-indexed 'u v' lines")
    graph.add_argument("--restarts", type=int, default=16, help="See-saw restarts")

    pair = sub.add_parser("pair", help="Pair-guessing task")
    pair.add_argument("--n", type=int, default=3, help="Number of inputs")
    pair.add_argument("--restarts", type=int, default=16, help="See-saw restarts")

    chat = sub.add_parser("chaturvedi", help="Five-term prepare-and-measure task")
    chat.add_argument("--restarts", type=int, default=16, help="See-saw restarts")

    tilted = sub.add_parser("tilted", help="Tilted task at one angle")
    tilted.add_argument("--theta", type=float, default=1.0471975511965976, help="Angle in radians")

    for name in ("scenario313", "scenario314"):
        scenario = sub.add_parser(name, help=f"Vertices and facets of the ({name[-3]},1,{name[-1]}) scenario")
        scenario.add_argument("--search", action="store_true", help="Run the see-saw search")
        scenario.add_argument(
            "--budgets",
            type=float,
            nargs="+",
            default=[0.36, 0.38, 0.40],
            help="Distinguishability budgets tried by the search",
        )
        scenario.add_argument("--restarts", type=int, default=16, help="See-saw restarts")

    disc = sub.add_parser("discriminate", help="Certified minimum-error discrimination")
    disc.add_argument("--ensemble", required=True, help="Ensemble JSON file")
    disc.add_argument("--tol", type=float, default=None, help="Requested duality gap")

    appendix = sub.add_parser("verify-appendix", help="Evaluate the stored (3,1,3)/(3,1,4) protocols")
    appendix.add_argument("--which", default="both", choices=["A", "B", "a", "b", "both"])

    sweep = sub.add_parser("sweep-theta", help="Tilted task over a range of angles")
    sweep.add_argument("--points", type=int, default=recording_settings["sweep_points"])
    sweep.add_argument("--min", dest="theta_min", type=float, default=recording_settings["sweep_min"])
    sweep.add_argument("--max", dest="theta_max", type=float, default=recording_settings["sweep_max"])

    rep = sub.add_parser("report", help="Summarise stored records")
    rep.add_argument("records", nargs="+", help="record.json files")
    rep.add_argument("--csv", help="Where to write the summary CSV")

    return parser.parse_args(argv)


def run_experiment(args) -> experiments.ExperimentRun:
    command = args.command
    seed = args.seed
    if command == "rac":
        return experiments.run_rac(args.n, args.d, seed)
    if command == "graph":
        return experiments.run_graph(args.cycle, args.edges, args.restarts, seed)
    if command == "pair":
        return experiments.run_pair(args.n, args.restarts, seed)
    if command == "chaturvedi":
        return experiments.run_chaturvedi(args.restarts, seed)
    if command == "tilted":
        return experiments.run_tilted(args.theta, seed)
    if command in ("scenario313", "scenario314"):
        return experiments.run_scenario(int(command[-1]), args.search, args.budgets, args.restarts, seed)
    if command == "discriminate":
        return experiments.run_discriminate(args.ensemble, args.tol, seed)
    if command == "verify-appendix":
        return experiments.run_verify_appendix(args.which, seed)
    if command == "sweep-theta":
        return experiments.run_sweep_theta(args.points, args.theta_min, args.theta_max, seed)
    raise ValueError(f"Unknown experiment {command!r}")


def run_report(args) -> int:
    records = [ExperimentRecord.load(path) for path in args.records]
    frame = report(records)
    print(render(frame))
    if args.csv:
        path = Path(args.csv)
        path.parent.mkdir(parents=True, exist_ok=True)
        load_schema().write("report", frame, path)
        logger.info(f"Wrote report to {path}")
    return 0


def _error(e: Exception, code: int) -> int:
    json.dump({"error": type(e).__name__, "message": str(e)}, sys.stderr)
    sys.stderr.write("\n")
    return code


def main(argv=None) -> int:
    """Main application entry point"""
    args = parse_arguments(argv)

    if args.debug:
        logger.setLevel(logging.DEBUG)
        logger.debug("Debug logging enabled")

    try:
        if args.command == "report":
            return run_report(args)

        start = time.time()
        run = run_experiment(args)
        run.record.wall_time = time.time() - start

        recorder = ExperimentRecorder(args.output_dir)
        run_dir = recorder.save(run.record, run.data, run.protocol, run.extra_tables)
        if run_dir is None:
            return _error(OSError("Could not write the experiment record"), 3)

        print(render(report([run.record])))
        logger.info(f"{args.command} finished in {run.record.wall_time:.1f} s")
        return 0
    except EntcommError as e:
        logger.error(f"{args.command} failed: {e}")
        return _error(e, 1)
    except (ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return _error(e, 2)
    except KeyboardInterrupt:
        logger.info("Stopped by user")
        return 130


if __name__ == "__main__":
    sys.exit(main())
