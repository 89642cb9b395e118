"""Local and global optimizers over real-vector objectives.

The local optimizer is Adam with central finite-difference gradients, which
works uniformly for variational angles and hyperparameters.  Global search
comes in three flavours (grid, random, cross-entropy); all of them respect
per-dimension bounds and are deterministic under a seed.  ``hyper_optimize``
wires a global optimizer to an inner solver to tune its penalty weights.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import GridTooLargeError, NonFiniteObjectiveError
from .results import weighted_avg_evaluation

Objective = Callable[[np.ndarray], float]

GRID_EVALUATION_CAP = 10_000_000

# Central-difference step; paired with a coarser step in the consistency tests.
FD_STEP = 1e-5


def _checked(f: Objective, x: np.ndarray) -> float:
    value = float(f(x))
    if not math.isfinite(value):
        raise NonFiniteObjectiveError(f"objective returned {value} at {x.tolist()}")
    return value


def finite_difference_gradient(f: Objective, x: np.ndarray, step: float = FD_STEP) -> np.ndarray:
    grad = np.empty_like(x, dtype=float)
    for i in range(len(x)):
        forward = x.copy()
        backward = x.copy()
        forward[i] += step
        backward[i] -= step
        grad[i] = (_checked(f, forward) - _checked(f, backward)) / (2 * step)
    return grad


def adam_minimize(
    f: Objective,
    x0: Sequence[float],
    steps: int = 200,
    stepsize: float = 0.01,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> tuple[np.ndarray, list[float]]:
    """First/second-moment adaptive gradient descent with FD gradients.

    Returns the final point and the objective value after each step.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if stepsize <= 0:
        raise ValueError("stepsize must be > 0")
    x = np.asarray(x0, dtype=float).copy()
    m = np.zeros_like(x)
    v = np.zeros_like(x)
    history: list[float] = []
    for t in range(1, steps + 1):
        grad = finite_difference_gradient(f, x)
        m = beta1 * m + (1 - beta1) * grad
        v = beta2 * v + (1 - beta2) * grad**2
        m_hat = m / (1 - beta1**t)
        v_hat = v / (1 - beta2**t)
        x = x - stepsize * m_hat / (np.sqrt(v_hat) + eps)
        history.append(_checked(f, x))
    return x, history


def _validate_bounds(bounds: Sequence[Sequence[float]]) -> tuple[np.ndarray, np.ndarray]:
    lows = np.array([float(b[0]) for b in bounds])
    highs = np.array([float(b[1]) for b in bounds])
    if np.any(lows >= highs):
        raise ValueError("each bound must satisfy low < high")
    return lows, highs


def _grid_points(low: float, high: float, step: float) -> np.ndarray:
    # Half-open [low, high): count rounds the quotient robustly so that e.g.
    # (10 - 1) / 0.1 yields 90 points, not 91.
    count = max(1, math.ceil((high - low) / step - 1e-9))
    return low + step * np.arange(count)


def grid_search(
    f: Objective,
    bounds: Sequence[Sequence[float]],
    steps: Sequence[float],
    evaluation_cap: int = GRID_EVALUATION_CAP,
) -> tuple[np.ndarray, int]:
    """Exhaustive search on the Cartesian grid over half-open intervals.

    Returns the first-encountered argmin in row-major order and the exact
    number of evaluations.
    """
    lows, highs = _validate_bounds(bounds)
    if len(steps) != len(bounds):
        raise ValueError("one step per dimension required")
    if any(s <= 0 for s in steps):
        raise ValueError("grid steps must be > 0")
    axes = [_grid_points(lo, hi, s) for lo, hi, s in zip(lows, highs, steps)]
    total = math.prod(len(a) for a in axes)
    if total > evaluation_cap:
        raise GridTooLargeError(f"{total} grid points exceed the cap of {evaluation_cap}")
    best_x = None
    best_val = math.inf
    for point in itertools.product(*axes):
        x = np.array(point)
        value = float(f(x))
        if best_x is None or value < best_val:
            best_val = value
            best_x = x
    return best_x, total


def random_search(
    f: Objective,
    bounds: Sequence[Sequence[float]],
    samples: int,
    seed: int | None = None,
) -> np.ndarray:
    """Uniform i.i.d. sampling in the bounds; returns the argmin."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    lows, highs = _validate_bounds(bounds)
    rng = np.random.default_rng(seed)
    points = rng.uniform(lows, highs, size=(samples, len(bounds)))
    best_x = points[0]
    best_val = math.inf
    for x in points:
        value = float(f(x))
        if value < best_val:
            best_val = value
            best_x = x
    return best_x.copy()


def _evaluate_batch(f: Objective, points: np.ndarray, processes: int) -> list[float]:
    if processes <= 1:
        values = [float(f(x)) for x in points]
    else:
        with ThreadPoolExecutor(max_workers=processes) as pool:
            values = [float(v) for v in pool.map(f, points)]
    for x, v in zip(points, values):
        if not math.isfinite(v):
            raise NonFiniteObjectiveError(f"objective returned {v} at {x.tolist()}")
    return values


def cem_minimize(
    f: Objective,
    bounds: Sequence[Sequence[float]],
    epochs: int = 10,
    samples_per_epoch: int = 200,
    elite_frac: float = 0.1,
    processes: int = 1,
    seed: int | None = None,
    std_floor: float = 1e-6,
) -> tuple[np.ndarray, list[float]]:
    """Cross-entropy method: sample, keep the elites, refit, repeat.

    The sampling distribution is an axis-aligned Gaussian started at the
    bounds' midpoint with stddev (high - low) / 2; samples are clipped to the
    bounds.  The full sample stream comes from one seeded generator, so the
    result is bit-identical for any ``processes`` value.  Returns the best
    point ever seen and the best value per epoch.
    """
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    if samples_per_epoch < 2:
        raise ValueError("samples_per_epoch must be >= 2")
    if not 0 < elite_frac <= 1:
        raise ValueError("elite_frac must be in (0, 1]")
    lows, highs = _validate_bounds(bounds)
    rng = np.random.default_rng(seed)
    mean = (lows + highs) / 2
    std = (highs - lows) / 2
    n_elite = math.ceil(elite_frac * samples_per_epoch)
    best_x: np.ndarray | None = None
    best_val = math.inf
    history: list[float] = []
    for _ in range(epochs):
        points = rng.normal(mean, std, size=(samples_per_epoch, len(bounds)))
        np.clip(points, lows, highs, out=points)
        values = np.array(_evaluate_batch(f, points, processes))
        order = np.argsort(values, kind="stable")
        if values[order[0]] < best_val:
            best_val = float(values[order[0]])
            best_x = points[order[0]].copy()
        history.append(best_val)
        elites = points[order[:n_elite]]
        mean = elites.mean(axis=0)
        std = np.maximum(elites.std(axis=0), std_floor)
    return best_x, history


@dataclass(frozen=True)
class HyperOptimizerSpec:
    """Configuration of a global search over penalty weights."""

    kind: str  # grid | random | cem
    bounds: tuple[tuple[float, float], ...]
    steps: tuple[float, ...] | None = None
    samples: int = 100
    processes: int = 1
    samples_per_epoch: int = 200
    epochs: int = 10
    elite_frac: float = 0.1


def hyper_optimize(
    inner_solve: Callable[[tuple[float, ...]], object],
    score_fn,
    spec: HyperOptimizerSpec,
    penalty: float = 0.0,
    limit_results: int = 10,
    normalize: bool = True,
    seed: int | None = None,
) -> tuple[tuple[float, ...], float, list[tuple[tuple[float, ...], float]]]:
    """Search penalty weights by re-solving the problem at each candidate.

    The objective of the global optimizer is the weighted average score of
    the inner solver's results.  Every (weights, score) pair is recorded in
    the returned ledger, one entry per inner invocation.
    """
    ledger: list[tuple[tuple[float, ...], float]] = []

    def objective(alpha_vec: np.ndarray) -> float:
        alphas = tuple(float(a) for a in alpha_vec)
        try:
            solved = inner_solve(alphas)
        except Exception as exc:
            if hasattr(exc, "add_note"):
                exc.add_note(f"raised at hyper_args {list(alphas)}")
            raise
        score = weighted_avg_evaluation(
            solved.records,
            score_fn,
            penalty=penalty,
            limit_results=limit_results,
            normalize=normalize,
        )
        ledger.append((alphas, score))
        return score

    if spec.kind == "grid":
        if spec.steps is None:
            raise ValueError("grid hyperoptimizer requires steps")
        best, _ = grid_search(objective, spec.bounds, spec.steps)
    elif spec.kind == "random":
        best = random_search(objective, spec.bounds, spec.samples, seed=seed)
    elif spec.kind == "cem":
        best, _ = cem_minimize(
            objective,
            spec.bounds,
            epochs=spec.epochs,
            samples_per_epoch=spec.samples_per_epoch,
            elite_frac=spec.elite_frac,
            processes=spec.processes,
            seed=seed,
        )
    else:
        raise ValueError(f"unknown hyperoptimizer kind {spec.kind!r}")

    best_args = tuple(float(v) for v in best)
    best_score = min(score for _, score in ledger)
    return best_args, best_score, ledger
