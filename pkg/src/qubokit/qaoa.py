"""Exact state-vector simulation of the QAOA ansatz.

The circuit alternates a diagonal phase layer exp(-i*gamma*E) built from the
precomputed QUBO energies with a transverse mixer RX(2*beta) on every qubit.
Bit i of a state index holds the value of ``var_order[i]`` (little-endian),
which keeps record field order aligned with the variable registry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .conversion import Qubo
from .errors import TooManyVariablesError
from .results import build_records

# 2^24 complex amplitudes; a desk-scale guardrail, not a hard physics limit.
MAX_QUBITS = 24


@dataclass(frozen=True)
class Angles:
    """Per-layer phase (gamma) and mixer (beta) angles."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        if len(self.gammas) != len(self.betas):
            raise ValueError("gammas and betas must have the same length")

    @property
    def layers(self) -> int:
        return len(self.gammas)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[float]]) -> "Angles":
        """Build from a 2 x p array: row 0 holds gammas, row 1 betas."""
        if len(rows) != 2:
            raise ValueError("angles must be a 2-row matrix [gammas, betas]")
        return cls(tuple(float(g) for g in rows[0]), tuple(float(b) for b in rows[1]))

    def to_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas, dtype=float)

    @classmethod
    def from_vector(cls, vector: Sequence[float], layers: int) -> "Angles":
        vec = np.asarray(vector, dtype=float)
        if vec.shape != (2 * layers,):
            raise ValueError(f"expected {2 * layers} angles, got shape {vec.shape}")
        return cls(tuple(vec[:layers]), tuple(vec[layers:]))

    def as_matrix(self) -> list[list[float]]:
        return [list(self.gammas), list(self.betas)]


@dataclass(frozen=True)
class StateVector:
    amps: np.ndarray
    var_order: tuple[str, ...]

    @property
    def n(self) -> int:
        return len(self.var_order)


def _check_qubit_count(n: int, max_qubits: int) -> None:
    if n > max_qubits:
        raise TooManyVariablesError(f"{n} variables exceed the cap of {max_qubits}")


def assignment_matrix(n: int) -> np.ndarray:
    """All 2^n assignments; row k bit i = bit i of k (little-endian)."""
    indices = np.arange(1 << n, dtype=np.int64)
    return ((indices[:, None] >> np.arange(n)) & 1).astype(np.int8)


def precompute_energies(qubo: Qubo, max_qubits: int = MAX_QUBITS) -> np.ndarray:
    """QUBO energy (offset included) of every assignment, indexed little-endian."""
    n = qubo.n
    _check_qubit_count(n, max_qubits)
    index = {name: i for i, name in enumerate(qubo.var_order)}
    k = np.arange(1 << n, dtype=np.int64)
    energies = np.full(1 << n, qubo.offset, dtype=np.float64)
    for mono, coeff in qubo.poly.terms.items():
        bits = (k >> index[mono[0]]) & 1
        if len(mono) == 2:
            bits = bits * ((k >> index[mono[1]]) & 1)
        energies += coeff * bits
    return energies


def _apply_mixer(amps: np.ndarray, n: int, beta: float) -> np.ndarray:
    """RX(2*beta) on every qubit: [[cos b, -i sin b], [-i sin b, cos b]]."""
    c = math.cos(beta)
    s = -1j * math.sin(beta)
    state = amps.reshape([2] * n)
    for qubit in range(n):
        axis = n - 1 - qubit  # C-order: axis 0 is the most significant bit
        lo = state.take(0, axis=axis)
        hi = state.take(1, axis=axis)
        state = np.stack((c * lo + s * hi, s * lo + c * hi), axis=axis)
    return state.reshape(-1)


def evolve(energies: np.ndarray, angles: Angles) -> np.ndarray:
    """Run the alternating ansatz on the uniform superposition."""
    size = len(energies)
    n = size.bit_length() - 1
    amps = np.full(size, 1.0 / math.sqrt(size), dtype=np.complex128)
    for gamma, beta in zip(angles.gammas, angles.betas):
        amps = amps * np.exp(-1j * gamma * energies)
        amps = _apply_mixer(amps, n, beta)
    norm = np.linalg.norm(amps)
    return amps / norm


def run_qaoa_circuit(qubo: Qubo, angles: Angles, max_qubits: int = MAX_QUBITS) -> StateVector:
    energies = precompute_energies(qubo, max_qubits)
    return StateVector(evolve(energies, angles), qubo.var_order)


def probabilities(state: StateVector) -> np.ndarray:
    """Record table of all 2^n outcomes in ascending index order."""
    probs = np.abs(state.amps) ** 2
    return build_records(state.var_order, assignment_matrix(state.n), probs)


def expectation(state: StateVector | np.ndarray, energies: np.ndarray) -> float:
    """Mean energy of the state's outcome distribution."""
    amps = state.amps if isinstance(state, StateVector) else state
    if len(amps) != len(energies):
        raise ValueError("state and energy table sizes differ")
    return float(np.real(np.abs(amps) ** 2 @ energies))
