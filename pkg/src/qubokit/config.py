"""Declarative experiment configuration (YAML or JSON) and solver assembly.

A document has a ``problem`` section naming one of the built-in problem
types and a ``solver`` section choosing a solver plus its optimizers.  The
schema is strict: unknown keys raise :class:`ConfigError` with the dotted
path of the offender, so typos fail before any computation starts.
"""

from __future__ import annotations

import copy
import hashlib
import json
from typing import Mapping

import yaml

from .errors import ConfigError, UnsupportedSolverError
from .optimizers import HyperOptimizerSpec
from .problems import (
    KnapsackInstance,
    Problem,
    custom_problem,
    knapsack_problem,
    maxcut_problem,
    tsp_problem,
)
from .qaoa import Angles
from .solvers import (
    DEFAULT_NUM_SWEEPS,
    DEFAULT_TEMP_START,
    DEFAULT_TEMP_STOP,
    AnnealingSolver,
    BruteForceSolver,
    VqaSolver,
    warn_deprecated_solver_type,
)

NATIVE_BACKEND = "default.qubit"


def load_config(path: str) -> dict:
    """Read a YAML or JSON config file (YAML parses both)."""
    try:
        with open(path, "r", encoding="utf-8") as stream:
            document = yaml.safe_load(stream)
    except OSError as exc:
        raise ConfigError(path, f"cannot read config file: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(path, f"malformed document: {exc}") from exc
    if not isinstance(document, Mapping):
        raise ConfigError(path, "top-level document must be a mapping")
    return dict(document)


def config_digest(cfg: Mapping) -> str:
    """Stable digest of the parsed document, for output provenance."""
    canonical = json.dumps(cfg, sort_keys=True, separators=(",", ":"), default=str)
    return "sha256:" + hashlib.sha256(canonical.encode()).hexdigest()


def _expect_mapping(value, path: str) -> dict:
    if not isinstance(value, Mapping):
        raise ConfigError(path, f"expected a mapping, got {type(value).__name__}")
    return dict(value)


def _check_unknown(section: Mapping, allowed: set[str], path: str) -> None:
    for key in section:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}", "unknown key")


def _require(section: Mapping, key: str, path: str):
    if key not in section:
        raise ConfigError(f"{path}.{key}", "required key is missing")
    return section[key]


def _as_int(value, path: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(path, f"must be >= {minimum}, got {value}")
    return value


def _as_number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"expected a number, got {value!r}")
    return float(value)


def _as_bool(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(path, f"expected a boolean, got {value!r}")
    return value


def _as_number_list(value, path: str) -> list[float]:
    if not isinstance(value, (list, tuple)):
        raise ConfigError(path, f"expected a list of numbers, got {value!r}")
    return [_as_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def problem_from_config(section: Mapping, path: str = "problem") -> Problem:
    section = _expect_mapping(section, path)
    kind = _require(section, "type", path)
    if kind == "knapsack":
        _check_unknown(section, {"type", "max_weight", "items_weights", "items_values"}, path)
        max_weight = _as_int(_require(section, "max_weight", path), f"{path}.max_weight", 1)
        weights = _require(section, "items_weights", path)
        values = _require(section, "items_values", path)
        if not isinstance(weights, (list, tuple)) or not isinstance(values, (list, tuple)):
            raise ConfigError(f"{path}.items_weights", "items must be lists")
        instance = KnapsackInstance(
            max_weight=max_weight,
            weights=tuple(_as_int(w, f"{path}.items_weights[{i}]", 1) for i, w in enumerate(weights)),
            values=tuple(_as_number(v, f"{path}.items_values[{i}]") for i, v in enumerate(values)),
        )
        return knapsack_problem(instance)
    if kind == "tsp":
        _check_unknown(section, {"type", "distance_matrix"}, path)
        matrix = _require(section, "distance_matrix", path)
        if not isinstance(matrix, (list, tuple)):
            raise ConfigError(f"{path}.distance_matrix", "expected a list of rows")
        rows = [_as_number_list(row, f"{path}.distance_matrix[{i}]") for i, row in enumerate(matrix)]
        return tsp_problem(rows)
    if kind == "maxcut":
        _check_unknown(section, {"type", "edges"}, path)
        edges = _require(section, "edges", path)
        if not isinstance(edges, (list, tuple)):
            raise ConfigError(f"{path}.edges", "expected a list of [u, v] pairs")
        parsed = []
        for i, edge in enumerate(edges):
            if not isinstance(edge, (list, tuple)) or len(edge) != 2:
                raise ConfigError(f"{path}.edges[{i}]", "expected a [u, v] pair")
            parsed.append((_as_int(edge[0], f"{path}.edges[{i}][0]"), _as_int(edge[1], f"{path}.edges[{i}][1]")))
        return maxcut_problem(parsed)
    if kind == "custom":
        _check_unknown(section, {"type", "objective", "constraints", "variables"}, path)
        objective = _require(section, "objective", path)
        if not isinstance(objective, str):
            raise ConfigError(f"{path}.objective", "expected an expression string")
        variables = section.get("variables")
        if variables is not None and (
            not isinstance(variables, (list, tuple))
            or any(not isinstance(v, str) for v in variables)
        ):
            raise ConfigError(f"{path}.variables", "expected a list of names")
        specs = []
        for i, item in enumerate(section.get("constraints", []) or []):
            cpath = f"{path}.constraints[{i}]"
            item = _expect_mapping(item, cpath)
            _check_unknown(item, {"lhs", "op", "rhs", "method", "lambdas", "label"}, cpath)
            lhs = _require(item, "lhs", cpath)
            op = _require(item, "op", cpath)
            rhs = _require(item, "rhs", cpath)
            method = item.get("method", "slack")
            lambdas = item.get("lambdas")
            if lambdas is not None:
                values = _as_number_list(lambdas, f"{cpath}.lambdas")
                if len(values) != 2:
                    raise ConfigError(f"{cpath}.lambdas", "expected exactly two values")
                specs.append((str(lhs), str(op), str(rhs), str(method), tuple(values)))
            else:
                specs.append((str(lhs), str(op), str(rhs), str(method)))
        return custom_problem(objective, specs, variables)
    raise ConfigError(f"{path}.type", f"unknown problem type {kind!r}")


def _hyper_optimizer_from_config(
    section: Mapping, path: str, expected_dims: int
) -> HyperOptimizerSpec:
    section = _expect_mapping(section, path)
    kind = _require(section, "type", path)
    if kind not in ("grid", "random", "cem"):
        raise ConfigError(f"{path}.type", f"unknown hyperoptimizer type {kind!r}")
    _check_unknown(
        section,
        {"type", "bounds", "steps", "samples", "processes", "samples_per_epoch", "epochs", "elite_frac"},
        path,
    )
    raw_bounds = _require(section, "bounds", path)
    if not isinstance(raw_bounds, (list, tuple)):
        raise ConfigError(f"{path}.bounds", "expected a list of [low, high] pairs")
    bounds = []
    for i, pair in enumerate(raw_bounds):
        values = _as_number_list(pair, f"{path}.bounds[{i}]")
        if len(values) != 2 or values[0] >= values[1]:
            raise ConfigError(f"{path}.bounds[{i}]", "expected [low, high] with low < high")
        bounds.append((values[0], values[1]))
    if len(bounds) != expected_dims:
        raise ConfigError(
            f"{path}.bounds",
            f"expected {expected_dims} dimensions (objective + constraint groups), got {len(bounds)}",
        )
    steps = None
    if kind == "grid":
        steps = tuple(_as_number_list(_require(section, "steps", path), f"{path}.steps"))
        if len(steps) != expected_dims:
            raise ConfigError(f"{path}.steps", f"expected {expected_dims} entries")
        if any(s <= 0 for s in steps):
            raise ConfigError(f"{path}.steps", "steps must be > 0")
    elif "steps" in section:
        raise ConfigError(f"{path}.steps", "only the grid hyperoptimizer takes steps")
    samples = _as_int(section.get("samples", 100), f"{path}.samples", 1)
    if kind != "random" and "samples" in section:
        raise ConfigError(f"{path}.samples", "only the random hyperoptimizer takes samples")
    spec = HyperOptimizerSpec(
        kind=kind,
        bounds=tuple(bounds),
        steps=steps,
        samples=samples,
        processes=_as_int(section.get("processes", 1), f"{path}.processes", 1),
        samples_per_epoch=_as_int(section.get("samples_per_epoch", 200), f"{path}.samples_per_epoch", 2),
        epochs=_as_int(section.get("epochs", 10), f"{path}.epochs", 1),
        elite_frac=_as_number(section.get("elite_frac", 0.1), f"{path}.elite_frac"),
    )
    if not 0 < spec.elite_frac <= 1:
        raise ConfigError(f"{path}.elite_frac", "must be in (0, 1]")
    return spec


def _params_inits(section: Mapping, path: str) -> dict:
    params = _expect_mapping(section, path)
    _check_unknown(params, {"angles", "hyper_args"}, path)
    return params


def _hyper_args_from(params: Mapping, path: str, problem: Problem) -> tuple[float, ...]:
    expected = problem.num_constraint_groups + 1
    if "hyper_args" not in params:
        return (1.0,) * expected
    values = _as_number_list(params["hyper_args"], f"{path}.hyper_args")
    if len(values) != expected:
        raise ConfigError(
            f"{path}.hyper_args",
            f"expected {expected} weights (objective + constraint groups), got {len(values)}",
        )
    return tuple(values)


def _vqa_from_config(section: Mapping, path: str, problem: Problem, seed: int | None):
    allowed = {"type", "pqc", "optimizer", "hyper_optimizer", "params_inits"}
    _check_unknown(section, allowed, path)

    pqc = _expect_mapping(_require(section, "pqc", path), f"{path}.pqc")
    _check_unknown(
        pqc, {"type", "layers", "backend", "limit_results", "penalty", "normalize"}, f"{path}.pqc"
    )
    pqc_type = _require(pqc, "type", f"{path}.pqc")
    if pqc_type not in ("qaoa", "wfqaoa"):
        raise ConfigError(f"{path}.pqc.type", f"unknown ansatz type {pqc_type!r}")
    layers = _as_int(_require(pqc, "layers", f"{path}.pqc"), f"{path}.pqc.layers", 1)
    backend = pqc.get("backend", NATIVE_BACKEND)
    if backend != NATIVE_BACKEND:
        raise ConfigError(f"{path}.pqc.backend", f"only {NATIVE_BACKEND!r} is supported")
    limit_results = _as_int(pqc.get("limit_results", 10), f"{path}.pqc.limit_results", 1)
    penalty = _as_number(pqc.get("penalty", 0.0), f"{path}.pqc.penalty")
    normalize = _as_bool(pqc.get("normalize", True), f"{path}.pqc.normalize")

    optimizer = _expect_mapping(section.get("optimizer", {"type": "qml"}), f"{path}.optimizer")
    _check_unknown(optimizer, {"type", "optimizer", "steps", "stepsize"}, f"{path}.optimizer")
    opt_type = optimizer.get("type", "qml")
    if opt_type not in ("qml", "adam"):
        raise ConfigError(f"{path}.optimizer.type", f"unknown optimizer type {opt_type!r}")
    inner_name = optimizer.get("optimizer", "adam")
    if inner_name != "adam":
        raise ConfigError(f"{path}.optimizer.optimizer", f"only 'adam' is supported, got {inner_name!r}")
    steps = _as_int(optimizer.get("steps", 200), f"{path}.optimizer.steps", 0)
    stepsize = _as_number(optimizer.get("stepsize", 0.01), f"{path}.optimizer.stepsize")
    if stepsize <= 0:
        raise ConfigError(f"{path}.optimizer.stepsize", "must be > 0")

    params = _params_inits(_require(section, "params_inits", path), f"{path}.params_inits")
    raw_angles = _require(params, "angles", f"{path}.params_inits")
    if (
        not isinstance(raw_angles, (list, tuple))
        or len(raw_angles) != 2
        or any(not isinstance(row, (list, tuple)) for row in raw_angles)
    ):
        raise ConfigError(f"{path}.params_inits.angles", "expected a 2-row matrix [gammas, betas]")
    rows = [_as_number_list(row, f"{path}.params_inits.angles[{i}]") for i, row in enumerate(raw_angles)]
    if any(len(row) != layers for row in rows):
        raise ConfigError(
            f"{path}.params_inits.angles", f"each row must have {layers} entries (one per layer)"
        )
    hyper_args = _hyper_args_from(params, f"{path}.params_inits", problem)

    hyper_optimizer = None
    if "hyper_optimizer" in section:
        hyper_optimizer = _hyper_optimizer_from_config(
            section["hyper_optimizer"], f"{path}.hyper_optimizer", len(hyper_args)
        )
    return VqaSolver(
        problem,
        angles=Angles.from_matrix(rows),
        pqc_type=pqc_type,
        hyper_args=hyper_args,
        steps=steps,
        stepsize=stepsize,
        limit_results=limit_results,
        normalize=normalize,
        penalty=penalty,
        hyper_optimizer=hyper_optimizer,
        seed=seed,
    )


def _annealing_from_config(section: Mapping, path: str, problem: Problem, seed: int | None):
    allowed = {
        "type",
        "num_reads",
        "num_sweeps",
        "temp_start",
        "temp_stop",
        "hyper_optimizer",
        "params_inits",
    }
    _check_unknown(section, allowed, path)
    num_reads = _as_int(section.get("num_reads", 100), f"{path}.num_reads", 1)
    num_sweeps = _as_int(section.get("num_sweeps", DEFAULT_NUM_SWEEPS), f"{path}.num_sweeps", 1)
    temp_start = _as_number(section.get("temp_start", DEFAULT_TEMP_START), f"{path}.temp_start")
    temp_stop = _as_number(section.get("temp_stop", DEFAULT_TEMP_STOP), f"{path}.temp_stop")
    if temp_start <= 0:
        raise ConfigError(f"{path}.temp_start", "must be > 0")
    if temp_stop <= 0:
        raise ConfigError(f"{path}.temp_stop", "must be > 0")
    params = _params_inits(section.get("params_inits", {}), f"{path}.params_inits")
    if "angles" in params:
        raise ConfigError(f"{path}.params_inits.angles", "annealing takes no angles")
    hyper_args = _hyper_args_from(params, f"{path}.params_inits", problem)
    hyper_optimizer = None
    if "hyper_optimizer" in section:
        hyper_optimizer = _hyper_optimizer_from_config(
            section["hyper_optimizer"], f"{path}.hyper_optimizer", len(hyper_args)
        )
    return AnnealingSolver(
        problem,
        hyper_args=hyper_args,
        num_reads=num_reads,
        num_sweeps=num_sweeps,
        temp_start=temp_start,
        temp_stop=temp_stop,
        hyper_optimizer=hyper_optimizer,
        seed=seed,
    )


def _brute_force_from_config(section: Mapping, path: str, problem: Problem, seed: int | None):
    _check_unknown(section, {"type", "hyper_optimizer", "params_inits"}, path)
    params = _params_inits(section.get("params_inits", {}), f"{path}.params_inits")
    if "angles" in params:
        raise ConfigError(f"{path}.params_inits.angles", "brute force takes no angles")
    hyper_args = _hyper_args_from(params, f"{path}.params_inits", problem)
    hyper_optimizer = None
    if "hyper_optimizer" in section:
        hyper_optimizer = _hyper_optimizer_from_config(
            section["hyper_optimizer"], f"{path}.hyper_optimizer", len(hyper_args)
        )
    return BruteForceSolver(
        problem, hyper_args=hyper_args, hyper_optimizer=hyper_optimizer, seed=seed
    )


def validate_config(cfg: Mapping) -> dict:
    """Validate the full document; returns a deep copy of it."""
    cfg = _expect_mapping(cfg, "<root>")
    _check_unknown(cfg, {"problem", "solver", "seed", "output"}, "<root>")
    if "seed" in cfg and cfg["seed"] is not None:
        _as_int(cfg["seed"], "seed")
    problem = problem_from_config(_require(cfg, "problem", "<root>"))
    if "solver" in cfg:
        _build_solver(cfg, problem)
    return copy.deepcopy(dict(cfg))


def _build_solver(cfg: Mapping, problem: Problem):
    section = _expect_mapping(_require(cfg, "solver", "<root>"), "solver")
    kind = _require(section, "type", "solver")
    seed = cfg.get("seed")
    if kind == "advantage":
        warn_deprecated_solver_type("advantage", "annealing")
        kind = "annealing"
    if kind == "vqa":
        return _vqa_from_config(section, "solver", problem, seed)
    if kind == "annealing":
        return _annealing_from_config(section, "solver", problem, seed)
    if kind == "brute_force":
        return _brute_force_from_config(section, "solver", problem, seed)
    raise UnsupportedSolverError(f"unknown solver type {kind!r}")


def solver_from_config(cfg: Mapping):
    """Build the configured solver; its ``problem`` attribute holds the problem."""
    cfg = _expect_mapping(cfg, "<root>")
    _check_unknown(cfg, {"problem", "solver", "seed", "output"}, "<root>")
    if "seed" in cfg and cfg["seed"] is not None:
        _as_int(cfg["seed"], "seed")
    problem = problem_from_config(_require(cfg, "problem", "<root>"))
    return _build_solver(cfg, problem)
