"""Solver orchestration: variational QAOA loop, annealing sampler, brute force.

Every solver consumes a :class:`~qubokit.problems.Problem`, folds it into a
QUBO with its current penalty weights, and returns a uniform
:class:`SolverResults` (record table, per-stage history, final parameters).
When a hyperoptimizer is attached, the solver is re-run per candidate weight
vector and the winning weights drive one final solve.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .conversion import Qubo, qubo_to_ising, to_qubo
from .optimizers import HyperOptimizerSpec, adam_minimize, hyper_optimize
from .problems import Problem
from .qaoa import (
    MAX_QUBITS,
    Angles,
    StateVector,
    assignment_matrix,
    evolve,
    expectation,
    precompute_energies,
    probabilities,
)
from .results import build_records, weighted_avg_evaluation

# Tie tolerance when collecting the brute-force argmin set.
_TIE_TOL = 1e-9

DEFAULT_NUM_SWEEPS = 1000
DEFAULT_TEMP_START = 10.0
DEFAULT_TEMP_STOP = 0.05


@dataclass
class SolverResults:
    """Uniform solver output.

    ``records`` is a structured array (one integer field per variable plus
    ``probability``); ``history`` holds one list of objective values per
    optimization stage; ``params`` carries the final angles and hyper_args.
    """

    records: np.ndarray
    history: list[list[float]] = field(default_factory=list)
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def probabilities(self) -> np.ndarray:
        return self.records


def _default_hyper_args(problem: Problem) -> tuple[float, ...]:
    return (1.0,) * (problem.num_constraint_groups + 1)


def _seed_streams(seed: int | None, count: int) -> list[np.random.SeedSequence]:
    return np.random.SeedSequence(seed).spawn(count)


def qubo_energies_of(qubo: Qubo, bits: np.ndarray) -> np.ndarray:
    """QUBO energies of each row of a 0/1 assignment matrix."""
    index = {name: i for i, name in enumerate(qubo.var_order)}
    energies = np.full(len(bits), qubo.offset, dtype=float)
    for mono, coeff in qubo.poly.terms.items():
        column = bits[:, index[mono[0]]].astype(float)
        if len(mono) == 2:
            column = column * bits[:, index[mono[1]]]
        energies += coeff * column
    return energies


class BruteForceSolver:
    """Exact reference: enumerate every assignment of the QUBO.

    Records contain the full argmin set with equal probabilities, which makes
    tie structure visible to tests and callers.
    """

    def __init__(
        self,
        problem: Problem,
        hyper_args: Sequence[float] | None = None,
        hyper_optimizer: HyperOptimizerSpec | None = None,
        penalty: float = 0.0,
        limit_results: int = 10,
        normalize: bool = True,
        seed: int | None = None,
        max_qubits: int = MAX_QUBITS,
    ):
        self.problem = problem
        self.hyper_args = tuple(hyper_args) if hyper_args is not None else _default_hyper_args(problem)
        self.hyper_optimizer = hyper_optimizer
        self.penalty = penalty
        self.limit_results = limit_results
        self.normalize = normalize
        self.seed = seed
        self.max_qubits = max_qubits

    def _solve_at(self, hyper_args: Sequence[float]) -> SolverResults:
        qubo = to_qubo(self.problem, hyper_args)
        energies = precompute_energies(qubo, self.max_qubits)
        minimum = float(energies.min())
        winners = np.flatnonzero(energies <= minimum + _TIE_TOL)
        bits = assignment_matrix(qubo.n)[winners]
        probs = np.full(len(winners), 1.0 / len(winners))
        records = build_records(qubo.var_order, bits, probs)
        return SolverResults(
            records=records,
            history=[[minimum]],
            params={"angles": None, "hyper_args": list(hyper_args)},
        )

    def solve(self, seed: int | None = None) -> SolverResults:
        master = seed if seed is not None else self.seed
        if self.hyper_optimizer is None:
            return self._solve_at(self.hyper_args)
        best_args, _, ledger = hyper_optimize(
            self._solve_at,
            self.problem.score,
            self.hyper_optimizer,
            penalty=self.penalty,
            limit_results=self.limit_results,
            normalize=self.normalize,
            seed=int(_seed_streams(master, 1)[0].generate_state(1)[0]),
        )
        final = self._solve_at(best_args)
        final.history = [[score for _, score in ledger]] + final.history
        return final


class AnnealingSolver:
    """Single-spin-flip Metropolis annealing on the Ising form of the QUBO.

    All reads run as independent chains over a geometric temperature
    schedule; records hold the empirical frequency of each distinct final
    state and the history the per-read final energies.
    """

    def __init__(
        self,
        problem: Problem,
        hyper_args: Sequence[float] | None = None,
        num_reads: int = 100,
        num_sweeps: int = DEFAULT_NUM_SWEEPS,
        temp_start: float = DEFAULT_TEMP_START,
        temp_stop: float = DEFAULT_TEMP_STOP,
        hyper_optimizer: HyperOptimizerSpec | None = None,
        penalty: float = 0.0,
        limit_results: int = 10,
        normalize: bool = True,
        seed: int | None = None,
    ):
        if num_reads < 1:
            raise ValueError("num_reads must be >= 1")
        if num_sweeps < 1:
            raise ValueError("num_sweeps must be >= 1")
        if temp_start <= 0 or temp_stop <= 0:
            raise ValueError("temperatures must be > 0")
        self.problem = problem
        self.hyper_args = tuple(hyper_args) if hyper_args is not None else _default_hyper_args(problem)
        self.num_reads = num_reads
        self.num_sweeps = num_sweeps
        self.temp_start = temp_start
        self.temp_stop = temp_stop
        self.hyper_optimizer = hyper_optimizer
        self.penalty = penalty
        self.limit_results = limit_results
        self.normalize = normalize
        self.seed = seed

    def _anneal(self, qubo: Qubo, rng: np.random.Generator) -> np.ndarray:
        """Run all reads in parallel arrays; returns the 0/1 final states."""
        ising = qubo_to_ising(qubo)
        n = qubo.n
        coupling = ising.j + ising.j.T
        spins = rng.integers(0, 2, size=(self.num_reads, n)) * 2 - 1
        temperatures = np.geomspace(self.temp_start, self.temp_stop, self.num_sweeps)
        for temperature in temperatures:
            for i in range(n):
                local = spins @ coupling[:, i] + ising.h[i]
                delta = -2.0 * spins[:, i] * local
                log_accept = np.minimum(-delta / temperature, 0.0)
                accept = rng.random(self.num_reads) < np.exp(log_accept)
                spins[:, i] = np.where(accept, -spins[:, i], spins[:, i])
        return ((1 - spins) // 2).astype(np.int8)

    def _solve_at(self, hyper_args: Sequence[float], seed: int | None) -> SolverResults:
        qubo = to_qubo(self.problem, hyper_args)
        rng = np.random.default_rng(seed)
        final_states = self._anneal(qubo, rng)
        energies = qubo_energies_of(qubo, final_states)
        states, counts = np.unique(final_states, axis=0, return_counts=True)
        records = build_records(qubo.var_order, states, counts / self.num_reads)
        return SolverResults(
            records=records,
            history=[[float(e) for e in energies]],
            params={"angles": None, "hyper_args": list(hyper_args)},
        )

    def solve(self, seed: int | None = None) -> SolverResults:
        master = seed if seed is not None else self.seed
        hyper_stream, read_stream = _seed_streams(master, 2)
        read_seed = read_stream.generate_state(1)[0]
        if self.hyper_optimizer is None:
            return self._solve_at(self.hyper_args, int(read_seed))
        best_args, _, ledger = hyper_optimize(
            lambda alphas: self._solve_at(alphas, int(read_seed)),
            self.problem.score,
            self.hyper_optimizer,
            penalty=self.penalty,
            limit_results=self.limit_results,
            normalize=self.normalize,
            seed=int(hyper_stream.generate_state(1)[0]),
        )
        final = self._solve_at(best_args, int(read_seed))
        final.history = [[score for _, score in ledger]] + final.history
        return final


class VqaSolver:
    """Variational loop around the QAOA state-vector simulator.

    ``pqc_type`` selects the training loss: ``"qaoa"`` minimizes the QUBO
    energy expectation; ``"wfqaoa"`` minimizes the probability-weighted score
    of the most probable outcomes, which needs no penalty-weight tuning to
    rank feasible states first.
    """

    def __init__(
        self,
        problem: Problem,
        angles: Angles | Sequence[Sequence[float]],
        pqc_type: str = "qaoa",
        hyper_args: Sequence[float] | None = None,
        steps: int = 200,
        stepsize: float = 0.01,
        limit_results: int = 10,
        normalize: bool = True,
        penalty: float = 0.0,
        hyper_optimizer: HyperOptimizerSpec | None = None,
        seed: int | None = None,
        max_qubits: int = MAX_QUBITS,
    ):
        if pqc_type not in ("qaoa", "wfqaoa"):
            raise ValueError(f"unknown pqc type {pqc_type!r}")
        self.problem = problem
        self.angles = angles if isinstance(angles, Angles) else Angles.from_matrix(angles)
        self.pqc_type = pqc_type
        self.hyper_args = tuple(hyper_args) if hyper_args is not None else _default_hyper_args(problem)
        self.steps = steps
        self.stepsize = stepsize
        self.limit_results = limit_results
        self.normalize = normalize
        self.penalty = penalty
        self.hyper_optimizer = hyper_optimizer
        self.seed = seed
        self.max_qubits = max_qubits

    def _loss_function(self, qubo: Qubo, energies: np.ndarray):
        layers = self.angles.layers
        if self.pqc_type == "qaoa":
            def loss(theta: np.ndarray) -> float:
                amps = evolve(energies, Angles.from_vector(theta, layers))
                return expectation(amps, energies)

            return loss

        bits = assignment_matrix(qubo.n)

        def loss(theta: np.ndarray) -> float:
            amps = evolve(energies, Angles.from_vector(theta, layers))
            records = build_records(qubo.var_order, bits, np.abs(amps) ** 2)
            return weighted_avg_evaluation(
                records,
                self.problem.score,
                penalty=self.penalty,
                limit_results=self.limit_results,
                normalize=self.normalize,
            )

        return loss

    def _solve_at(self, hyper_args: Sequence[float]) -> SolverResults:
        qubo = to_qubo(self.problem, hyper_args)
        energies = precompute_energies(qubo, self.max_qubits)
        loss = self._loss_function(qubo, energies)
        theta, history = adam_minimize(
            loss, self.angles.to_vector(), steps=self.steps, stepsize=self.stepsize
        )
        final_angles = Angles.from_vector(theta, self.angles.layers)
        state = StateVector(evolve(energies, final_angles), qubo.var_order)
        return SolverResults(
            records=probabilities(state),
            history=[history],
            params={"angles": final_angles.as_matrix(), "hyper_args": list(hyper_args)},
        )

    def solve(self, seed: int | None = None) -> SolverResults:
        master = seed if seed is not None else self.seed
        if self.hyper_optimizer is None:
            return self._solve_at(self.hyper_args)
        hyper_seed = int(_seed_streams(master, 1)[0].generate_state(1)[0])
        best_args, _, ledger = hyper_optimize(
            self._solve_at,
            self.problem.score,
            self.hyper_optimizer,
            penalty=self.penalty,
            limit_results=self.limit_results,
            normalize=self.normalize,
            seed=hyper_seed,
        )
        final = self._solve_at(best_args)
        final.history = [[score for _, score in ledger]] + final.history
        return final


def warn_deprecated_solver_type(configured: str, canonical: str) -> None:
    warnings.warn(
        f"solver type {configured!r} is deprecated; use {canonical!r}",
        category=UserWarning,
        stacklevel=3,
    )
