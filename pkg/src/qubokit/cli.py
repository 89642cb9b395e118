"""Command-line entry point.

Subcommands: ``solve`` runs the configured experiment, ``validate`` checks a
config without computing, ``brute-force`` runs the exact reference on the
configured problem.  Exit codes: 0 success, 2 configuration error, 3 runtime
solver error.  Diagnostics go to stderr, results to stdout or ``--output``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .config import (
    config_digest,
    load_config,
    problem_from_config,
    solver_from_config,
    validate_config,
)
from .errors import ConfigError, QubokitError, UnsupportedSolverError
from .results import add_evaluation_to_results, sort_solver_results, variable_fields
from .solvers import BruteForceSolver, SolverResults


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qubokit",
        description="Formulate penalized QUBOs and solve them with QAOA, annealing, or brute force.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io_flags(p):
        p.add_argument("--config", required=True, help="YAML or JSON experiment file")
        p.add_argument("--output", help="write results here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--top", type=int, metavar="K", help="keep only the K most probable records")

    solve = sub.add_parser("solve", help="run the configured solver")
    add_io_flags(solve)

    validate = sub.add_parser("validate", help="check a config file and exit")
    validate.add_argument("--config", required=True)

    brute = sub.add_parser("brute-force", help="run the exact reference solver")
    add_io_flags(brute)
    return parser


def _records_rows(records: np.ndarray) -> list[dict]:
    fields = variable_fields(records)
    rows = []
    for rec in records:
        row = {name: int(rec[name]) for name in fields}
        row["probability"] = float(rec["probability"])
        if "evaluation" in records.dtype.names:
            row["evaluation"] = float(rec["evaluation"])
        rows.append(row)
    return rows


def _render(records: np.ndarray, results: SolverResults, seed, digest: str, fmt: str) -> str:
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer)
        fields = variable_fields(records)
        header = fields + ["probability"]
        if "evaluation" in records.dtype.names:
            header.append("evaluation")
        writer.writerow(header)
        for row in _records_rows(records):
            writer.writerow([row[name] for name in header])
        return buffer.getvalue()
    payload = {
        "records": _records_rows(records),
        "history": results.history,
        "params": results.params,
        "seed": seed,
        "config_digest": digest,
    }
    return json.dumps(payload, indent=2) + "\n"


def _write_output(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _run_solver(args, brute_force: bool) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = dict(cfg)
        cfg["seed"] = args.seed
    digest = config_digest(cfg)
    seed = cfg.get("seed")
    validate_config(cfg)
    if brute_force:
        problem = problem_from_config(cfg["problem"])
        solver = BruteForceSolver(
            problem, hyper_args=_configured_hyper_args(cfg), seed=seed
        )
    else:
        if "solver" not in cfg:
            raise ConfigError("solver", "required key is missing")
        solver = solver_from_config(cfg)
    results = solver.solve(seed=seed)
    records = results.records
    if args.top is not None:
        records = sort_solver_results(records, args.top)
    records = add_evaluation_to_results(records, solver.problem.score)
    rendered = _render(records, results, seed, digest, args.format)
    _write_output(rendered, args.output)
    output_target = cfg.get("output")
    if args.output is None and isinstance(output_target, str) and output_target:
        _write_output(rendered, output_target)
    return 0


def _configured_hyper_args(cfg):
    """Penalty weights for the brute-force subcommand, if the config sets any."""
    solver_section = cfg.get("solver")
    if isinstance(solver_section, dict):
        params = solver_section.get("params_inits")
        if isinstance(params, dict) and "hyper_args" in params:
            return tuple(float(v) for v in params["hyper_args"])
    return None


def _run_validate(args) -> int:
    cfg = load_config(args.config)
    validate_config(cfg)
    print(f"{args.config}: OK", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            return _run_validate(args)
        if args.command == "solve":
            return _run_solver(args, brute_force=False)
        return _run_solver(args, brute_force=True)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except UnsupportedSolverError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except QubokitError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 3


def main_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    main_entry()
