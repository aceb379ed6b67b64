"""Command-line entry point.

    felsim run --config <file> [--seed <u64>] [--out <dir>] [--jobs <n>]
    felsim scenario <a|b|c> [--seeds <n>] [--out <dir>] [--jobs <n>]
    felsim validate --config <file>
    felsim serve [--host <h>] [--port <p>]

Exit codes: 0 success, 2 config error, 3 runtime invariant violation.
FELSIM_LOG={error|info|debug} controls diagnostics on stderr; metrics
never go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .engine import PastEventError
from .harness.config import ConfigError, parse_config, serialize_config
from .harness.metrics import MetricsTable, write_table
from .harness.runner import SimulationInvariantError, run_scenario
from .harness.scenarios import build_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

log = logging.getLogger("felsim")


def _setup_logging() -> None:
    level_name = os.environ.get("FELSIM_LOG", "error").lower()
    level = {"error": logging.ERROR, "info": logging.INFO,
             "debug": logging.DEBUG}.get(level_name, logging.ERROR)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(level)


def _run_one(args: tuple[str, int, str | None, int]) -> MetricsTable:
    """Worker for replication parallelism: one (config, seed) run."""
    kind, seed, config_text, duration = args
    if config_text is not None:
        config = parse_config(config_text)
        return run_scenario(config, seed=seed)
    return run_scenario(build_scenario(kind, seed, duration))


def _run_replications(jobs: int, work: list[tuple[str, int, str | None, int]]) -> MetricsTable:
    merged = MetricsTable()
    if jobs <= 1 or len(work) <= 1:
        for item in work:
            merged.extend(_run_one(item))
        return merged
    with ProcessPoolExecutor(max_workers=min(jobs, len(work))) as pool:
        # map() preserves submission order, so the merge is seed-ordered
        # no matter which replication finishes first.
        for table in pool.map(_run_one, work):
            merged.extend(table)
    return merged


def cmd_run(args: argparse.Namespace) -> int:
    text = Path(args.config).read_text(encoding="utf-8")
    config = parse_config(text)
    seeds = [args.seed if args.seed is not None else config.seed]
    work = [("custom", seed, text, config.duration_ms) for seed in seeds]
    table = _run_replications(args.jobs, work)
    paths = write_table(table, args.out)
    log.info("wrote %s", ", ".join(str(p) for p in paths.values()))
    print(f"{len(table.rows)} rows -> {paths['metrics']}")
    return EXIT_OK


def cmd_scenario(args: argparse.Namespace) -> int:
    seeds = list(range(1, args.seeds + 1))
    work = [(args.kind, seed, None, args.duration_ms) for seed in seeds]
    table = _run_replications(args.jobs, work)
    paths = write_table(table, args.out)
    log.info("wrote %s", ", ".join(str(p) for p in paths.values()))
    print(f"scenario {args.kind}: {len(seeds)} seed(s), "
          f"{len(table.rows)} rows -> {paths['metrics']}")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    text = Path(args.config).read_text(encoding="utf-8")
    parse_config(text)
    print("ok")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cmd_show(args: argparse.Namespace) -> int:
    config = build_scenario(args.kind, args.seed, args.duration_ms)
    sys.stdout.write(serialize_config(config))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="felsim",
        description="Deterministic fog-enabled edge-learning CCN simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario config file")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default="out")
    p_run.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_run.set_defaults(fn=cmd_run)

    p_scn = sub.add_parser("scenario", help="run a canned scenario over seeds 1..n")
    p_scn.add_argument("kind", choices=["a", "b", "c"])
    p_scn.add_argument("--seeds", type=int, default=1)
    p_scn.add_argument("--out", default="out")
    p_scn.add_argument("--duration-ms", type=int, default=60_000)
    p_scn.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_scn.set_defaults(fn=cmd_scenario)

    p_val = sub.add_parser("validate", help="parse and invariant-check a config")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(fn=cmd_validate)

    p_show = sub.add_parser("show", help="print a canned scenario's config")
    p_show.add_argument("kind", choices=["a", "b", "c"])
    p_show.add_argument("--seed", type=int, default=1)
    p_show.add_argument("--duration-ms", type=int, default=60_000)
    p_show.set_defaults(fn=cmd_show)

    p_srv = sub.add_parser("serve", help="start the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    _setup_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, FileNotFoundError, ValueError) as exc:
        log.error("%s", exc)
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SimulationInvariantError, PastEventError) as exc:
        log.error("%s", exc)
        print(f"runtime invariant violation: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
