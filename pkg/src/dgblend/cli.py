"""Command-line entry point.

Precedence for overridable settings: command-line flag, then environment
(``DGBLEND_THREADS``, ``DGBLEND_OUTPUT_DIR``), then the config file, then
built-in defaults. Diagnostics go to stderr; data go to files only.

Exit codes: 0 success, 1 invalid input, 2 solver/runtime failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import wall_model
from .cases import CASES
from .config import ConfigError, load_config, with_overrides
from .euler import StateError
from .io import write_csv_atomic

log = logging.getLogger("dgblend")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2
WALL_SWEEP_SCHEMA = "dgblend-wall-sweep v1"


def _env_int(name):
    value = os.environ.get(name)
    if value is None:
        return None
    try:
        return int(value)
    except ValueError:
        raise ConfigError([f"environment variable {name}={value!r} is not an integer"]) from None


def _load(args):
    cfg = load_config(args.config)
    return with_overrides(
        cfg,
        threads=args.threads if args.threads is not None else _env_int("DGBLEND_THREADS"),
        output_dir=args.output_dir or os.environ.get("DGBLEND_OUTPUT_DIR"),
        steps=getattr(args, "steps", None),
        end_time=getattr(args, "end_time", None),
        repeats=getattr(args, "repeats", None),
    )


def cmd_run(args) -> int:
    from .runner import (DIAGNOSTICS_SCHEMA, STATE_SCHEMA, diagnostics_table, exact_field,
                         run_case, state_table)

    cfg = _load(args)
    result = run_case(cfg)
    out = Path(cfg.output_dir)
    write_csv_atomic(out / cfg.state_file, *state_table(result), STATE_SCHEMA)
    write_csv_atomic(out / cfg.diagnostics_file, *diagnostics_table(result), DIAGNOSTICS_SCHEMA)
    perf = result.perf
    log.info("%s: %d steps to t=%.6g, wall %.4f s, PID %.3e s, max alpha %.3f",
             cfg.case, result.steps, result.time, perf.wall_clock, perf.pid, result.max_alpha)
    if cfg.case in ("sod", "vortex"):
        ref = exact_field(cfg, result.mesh, result.basis, result.time)
        w = result.mesh.quadrature_weights(result.basis)
        err = np.abs(result.field[0] - ref[0])
        log.info("density error vs exact: L1 %.4e, L2 %.4e", float(np.sum(err * w)),
                 math.sqrt(float(np.sum(err**2 * w))))
    return EXIT_OK


def cmd_scale(args) -> int:
    from .campaign import scaling_campaign, write_perf_csv, write_speedup_csv

    cfg = _load(args)
    if cfg.steps is None:
        raise ConfigError(["[time] steps: the scaling protocol needs a fixed step count"])
    result = scaling_campaign(cfg)
    out = Path(cfg.output_dir)
    perf_path = out / cfg.perf_file
    write_perf_csv(perf_path, result.records)
    write_speedup_csv(perf_path.with_suffix(".speedup.csv"), result.records)
    worst = max(result.parity.values(), default=0.0)
    log.info("wrote %s; max parallel/serial deviation %.3e", perf_path, worst)
    return EXIT_OK


def cmd_sweep(args) -> int:
    y = np.logspace(math.log10(args.y_min), math.log10(args.y_max), args.points)
    ratio = None
    if args.edge_ratio == "printed":
        ratio = wall_model.recovery_ratio(args.ma, args.gamma, args.pr)
    try:
        u_inc, u_vd, u_edge = wall_model.sweep_curves(y, args.ma, args.gamma, args.pr, args.u_inf_plus, ratio)
    except wall_model.WallModelDomainError as exc:
        raise ConfigError([str(exc)]) from None
    rows = [[repr(float(a)) for a in row] for row in zip(y, u_inc, u_vd, u_edge)]
    schema = (f"{WALL_SWEEP_SCHEMA} ma={args.ma!r} gamma={args.gamma!r} pr={args.pr!r} "
              f"u_inf_plus={args.u_inf_plus!r} edge_ratio={args.edge_ratio}")
    write_csv_atomic(args.output, ("y_plus", "u_plus_spalding", "u_plus_van_driest", "u_plus_edge"), rows, schema)
    log.info("wrote %d points to %s", len(rows), args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    log.info("%s: valid %s configuration", args.config, cfg.case)
    return EXIT_OK


def cmd_list(args) -> int:
    for case in CASES.values():
        print(f"{case.name:18s} {case.description}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dgblend", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, type=Path)
        p.add_argument("--threads", type=int)
        p.add_argument("--output-dir")

    p = sub.add_parser("run", help="run a solver case")
    common(p)
    p.add_argument("--steps", type=int)
    p.add_argument("--end-time", type=float)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("scale", help="run a strong-scaling campaign")
    common(p)
    p.add_argument("--steps", type=int)
    p.add_argument("--repeats", type=int)
    p.set_defaults(func=cmd_scale)

    p = sub.add_parser("sweep-wall-model", help="sample u+/y+ curves of the wall models")
    p.add_argument("--ma", type=float, required=True)
    p.add_argument("--gamma", type=float, default=1.4)
    p.add_argument("--pr", type=float, default=0.72)
    p.add_argument("--u-inf-plus", type=float, default=25.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--y-min", type=float, default=0.1)
    p.add_argument("--y-max", type=float, default=1000.0)
    p.add_argument("--edge-ratio", choices=("matched", "printed"), default="matched",
                   help="T_aw/T_e for the edge form: consistent with the freestream form, or the recovery formula")
    p.add_argument("--output", type=Path, default=Path("wall_model_sweep.csv"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate-config", help="check a config file")
    p.add_argument("config", type=Path)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("list-cases", help="list the case registry")
    p.set_defaults(func=cmd_list)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)
    if getattr(args, "command", None) == "sweep-wall-model":
        bad = [n for n in ("points",) if getattr(args, n) < 2]
        if bad or not 0.0 < args.y_min < args.y_max or args.ma < 0.0 or args.u_inf_plus <= 0.0:
            log.error("invalid sweep arguments")
            return EXIT_INVALID
    try:
        return args.func(args)
    except ConfigError as exc:
        for err in exc.errors:
            log.error("%s", err)
        return EXIT_INVALID
    except FileNotFoundError as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    except (StateError, wall_model.WallModelSolverError, RuntimeError, ArithmeticError) as exc:
        log.error("runtime failure: %s", exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
