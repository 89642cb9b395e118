"""Assembly of solver-ready QUBOs from problems and penalty weights.

The assembled quadratic polynomial is the weighted sum of the objective and
one squared-equality penalty per constraint group; inequalities are first
rewritten with binary slack variables or replaced by an unbalanced penalty.
The constant term is kept in a separate offset so backends that ignore
constants still report exact energies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    DegreeError,
    InvalidLambdaError,
    UnboundedSlackError,
    WeightCountMismatchError,
)
from .polynomial import Polynomial
from .problems import Comparison, Constraint, InequalityMethod, Problem

_INT_TOL = 1e-9


@dataclass(frozen=True)
class Qubo:
    """Degree-<=2 polynomial over binary variables plus a constant offset."""

    poly: Polynomial
    offset: float
    var_order: tuple[str, ...]

    def __post_init__(self):
        known = set(self.var_order)
        if len(known) != len(self.var_order):
            raise ValueError("duplicate names in var_order")
        for mono in self.poly.terms:
            if not 1 <= len(mono) <= 2 or len(set(mono)) != len(mono):
                raise ValueError(f"non-QUBO monomial {mono}")
            if not set(mono) <= known:
                raise ValueError(f"monomial {mono} uses unregistered variables")

    @property
    def n(self) -> int:
        return len(self.var_order)

    def energy(self, assignment: Mapping[str, float]) -> float:
        return self.poly.evaluate(assignment) + self.offset


@dataclass(frozen=True)
class Ising:
    """Spin form of a QUBO under z = 1 - 2x.

    ``j`` is strictly upper triangular; energy(h, j, offset) at spins(x)
    equals the QUBO energy at x for every assignment.
    """

    h: np.ndarray
    j: np.ndarray
    offset: float
    var_order: tuple[str, ...]

    def energy(self, spins: Sequence[float]) -> float:
        z = np.asarray(spins, dtype=float)
        return float(self.h @ z + z @ self.j @ z + self.offset)


def _integer_bound(diff: Polynomial) -> int:
    """Largest value of ``diff`` over binary assignments, by interval bound.

    Exact for linear polynomials; an upper bound otherwise, which keeps the
    slack encoding sound (every reachable gap stays representable).
    """
    bound = 0.0
    for mono, coeff in diff.terms.items():
        if abs(coeff - round(coeff)) > _INT_TOL:
            raise UnboundedSlackError(f"non-integer coefficient {coeff} in inequality")
        if not mono:
            bound += coeff
        elif coeff > 0:
            bound += coeff
    return int(round(bound))


def _slack_coefficients(bound: int) -> list[int]:
    """Bounded binary encoding whose subset sums cover exactly 0..bound."""
    if bound <= 0:
        return []
    nu = (bound + 1).bit_length() - 1
    coeffs = [1 << i for i in range(nu)]
    remainder = bound - ((1 << nu) - 1)
    if remainder > 0:
        coeffs.append(remainder)
    return coeffs


def apply_slack(constraint: Constraint, prefix: str | None = None) -> tuple[Constraint, list[str]]:
    """Rewrite an inequality as an equality by adding binary slack variables.

    For ``lhs <= rhs`` the gap ``rhs - lhs`` is absorbed by slack bits whose
    coefficients cover exactly 0..M, M being the largest gap over binary
    assignments; ``>=`` is handled by swapping sides.  With M = 0 the
    constraint degenerates to a plain equality with no new variables.
    """
    if constraint.op is Comparison.EQ:
        raise ValueError("apply_slack expects an inequality constraint")
    if constraint.op is Comparison.LE:
        small, large = constraint.lhs, constraint.rhs
    else:
        small, large = constraint.rhs, constraint.lhs
    bound = _integer_bound(large - small)
    if bound < 0:
        raise UnboundedSlackError(
            f"inequality {constraint.label or constraint.group} holds for no assignment"
        )
    prefix = prefix if prefix is not None else f"s_{constraint.label or constraint.group}"
    names = [f"{prefix}_{k}" for k in range(len(_slack_coefficients(bound)))]
    slack_poly = Polynomial(
        {(name,): float(c) for name, c in zip(names, _slack_coefficients(bound))}
    )
    rewritten = Constraint(
        lhs=small + slack_poly,
        rhs=large,
        op=Comparison.EQ,
        group=constraint.group,
        label=constraint.label,
    )
    return rewritten, names


def apply_unbalanced(
    constraint: Constraint, lambdas: tuple[float, float] = (1.0, 1.0)
) -> Polynomial:
    """Slack-free inequality penalty -lambda1*h + lambda2*h^2.

    ``h`` is the feasibility gap (non-negative exactly when the constraint
    holds): rhs - lhs for ``<=`` and lhs - rhs for ``>=``.
    """
    lam1, lam2 = float(lambdas[0]), float(lambdas[1])
    if lam1 <= 0 or lam2 <= 0:
        raise InvalidLambdaError(f"lambdas must be positive, got {lambdas}")
    if constraint.op is Comparison.EQ:
        raise ValueError("apply_unbalanced expects an inequality constraint")
    if constraint.op is Comparison.LE:
        gap = constraint.rhs - constraint.lhs
    else:
        gap = constraint.lhs - constraint.rhs
    penalty = (-lam1) * gap + lam2 * (gap * gap)
    return penalty.reduce_binary_powers()


def to_qubo(problem: Problem, hyper_args: Sequence[float]) -> Qubo:
    """Fold a problem and its penalty weights into a single quadratic form.

    ``hyper_args[0]`` scales the objective and ``hyper_args[g]`` the squared
    penalty of constraint group ``g``.  Slack variables introduced by
    inequality rewriting are appended to the variable order after the
    problem's own register.
    """
    alphas = [float(a) for a in hyper_args]
    expected = problem.num_constraint_groups + 1
    if len(alphas) != expected:
        raise WeightCountMismatchError(
            f"expected {expected} penalty weights (objective + groups), got {len(alphas)}"
        )
    if any(a < 0 for a in alphas):
        raise ValueError("penalty weights must be non-negative")

    assembled = alphas[0] * problem.objective
    slack_names: list[str] = []
    taken = set(problem.binary_vars)
    for index, constraint in enumerate(problem.constraints):
        if constraint.op is Comparison.EQ:
            gap = constraint.lhs - constraint.rhs
            penalty = gap * gap
        elif constraint.method is InequalityMethod.SLACK:
            prefix = f"s{index}"
            while any(name.startswith(prefix + "_") for name in taken):
                prefix += "_"
            rewritten, names = apply_slack(constraint, prefix=prefix)
            slack_names.extend(names)
            taken.update(names)
            gap = rewritten.lhs - rewritten.rhs
            penalty = gap * gap
        else:
            penalty = apply_unbalanced(constraint, constraint.lambdas)
        assembled = assembled + alphas[constraint.group] * penalty

    reduced = assembled.reduce_binary_powers()
    if reduced.degree > 2:
        raise DegreeError(
            f"penalized objective has degree {reduced.degree} after binary reduction"
        )
    offset = reduced.constant
    quadratic = Polynomial({m: c for m, c in reduced.terms.items() if m})
    return Qubo(quadratic, offset, tuple(problem.binary_vars) + tuple(slack_names))


def qubo_to_ising(qubo: Qubo) -> Ising:
    """Exact spin transform via x = (1 - z) / 2."""
    n = qubo.n
    index = {name: i for i, name in enumerate(qubo.var_order)}
    h = np.zeros(n)
    j = np.zeros((n, n))
    offset = qubo.offset
    for mono, coeff in qubo.poly.terms.items():
        if len(mono) == 1:
            i = index[mono[0]]
            offset += coeff / 2
            h[i] -= coeff / 2
        else:
            a, b = sorted(index[name] for name in mono)
            offset += coeff / 4
            h[a] -= coeff / 4
            h[b] -= coeff / 4
            j[a, b] += coeff / 4
    return Ising(h, j, offset, qubo.var_order)
