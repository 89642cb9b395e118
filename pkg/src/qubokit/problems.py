"""Combinatorial problem definitions over binary variables.

A problem couples a minimization objective with a list of constraints and an
ordered variable registry.  Scoring an assignment returns the exact objective
value when every constraint holds and the caller-supplied penalty otherwise,
so infeasible outcomes can be ranked or discarded uniformly across solvers.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .errors import InvalidInstanceError, UnknownVariableError
from .expressions import parse_expression
from .polynomial import Polynomial

# Feasibility checks compare exact polynomial evaluations; this absorbs float noise.
_FEASIBILITY_TOL = 1e-9


class Comparison(Enum):
    EQ = "=="
    LE = "<="
    GE = ">="


class InequalityMethod(Enum):
    SLACK = "slack"
    UNBALANCED = "unbalanced"


@dataclass(frozen=True)
class Constraint:
    """One side-constraint of a problem.

    ``group`` selects which penalty weight applies when the constraint is
    folded into a QUBO (group 0 is reserved for the objective).  ``method``
    and ``lambdas`` only matter for inequalities.
    """

    lhs: Polynomial
    rhs: Polynomial
    op: Comparison
    group: int
    label: str = ""
    method: InequalityMethod = InequalityMethod.SLACK
    lambdas: tuple[float, float] = (1.0, 1.0)

    def __post_init__(self):
        if self.group < 1:
            raise ValueError(f"constraint group must be >= 1, got {self.group}")

    def holds(self, assignment: Mapping[str, float]) -> bool:
        gap = self.lhs.evaluate(assignment) - self.rhs.evaluate(assignment)
        if self.op is Comparison.EQ:
            return abs(gap) <= _FEASIBILITY_TOL
        if self.op is Comparison.LE:
            return gap <= _FEASIBILITY_TOL
        return gap >= -_FEASIBILITY_TOL


@dataclass(frozen=True)
class Problem:
    """Minimization objective + constraints over an ordered binary register."""

    objective: Polynomial
    constraints: tuple[Constraint, ...]
    binary_vars: tuple[str, ...]

    def __post_init__(self):
        universe = set(self.binary_vars)
        if len(universe) != len(self.binary_vars):
            raise InvalidInstanceError("duplicate variable names in binary_vars")
        mentioned = set(self.objective.variables)
        for c in self.constraints:
            mentioned.update(c.lhs.variables)
            mentioned.update(c.rhs.variables)
        stray = mentioned - universe
        if stray:
            raise UnknownVariableError(
                f"variables not declared in binary_vars: {sorted(stray)}"
            )

    @property
    def num_constraint_groups(self) -> int:
        return max((c.group for c in self.constraints), default=0)

    def score(self, assignment: Mapping[str, float], penalty: float = 0.0) -> float:
        """Objective value if every constraint holds, else ``penalty``."""
        if all(c.holds(assignment) for c in self.constraints):
            return self.objective.evaluate(assignment)
        return penalty


@dataclass(frozen=True)
class KnapsackInstance:
    """Items with integer weights and positive values, capacity ``max_weight``."""

    max_weight: int
    weights: tuple[int, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.values) or not self.weights:
            raise InvalidInstanceError("weights and values must be non-empty and equal length")
        if self.max_weight < 1:
            raise InvalidInstanceError("max_weight must be >= 1")
        if any(w < 1 or w != int(w) for w in self.weights):
            raise InvalidInstanceError("item weights must be positive integers")
        if any(v <= 0 for v in self.values):
            raise InvalidInstanceError("item values must be positive")


def knapsack_problem(instance: KnapsackInstance) -> Problem:
    """Value-maximizing knapsack as a minimization problem.

    Selection bits ``x0..x{N-1}`` are joined by a one-hot register ``y1..yW``
    declaring the total weight: group 1 forces exactly one ``y`` bit on and
    group 2 forces the declared weight to equal the packed weight.  The
    all-zero ``y`` register is infeasible, so the empty knapsack is excluded
    by construction.
    """
    n = len(instance.weights)
    w_cap = instance.max_weight
    x_names = [f"x{i}" for i in range(n)]
    y_names = [f"y{i}" for i in range(1, w_cap + 1)]

    objective = Polynomial({(x,): -float(v) for x, v in zip(x_names, instance.values)})
    one_hot = Constraint(
        lhs=Polynomial({(y,): 1.0 for y in y_names}),
        rhs=Polynomial({(): 1.0}),
        op=Comparison.EQ,
        group=1,
        label="encoding",
    )
    declared_weight = Polynomial({(y,): float(i) for i, y in enumerate(y_names, start=1)})
    packed_weight = Polynomial({(x,): float(w) for x, w in zip(x_names, instance.weights)})
    weight_match = Constraint(
        lhs=declared_weight - packed_weight,
        rhs=Polynomial(),
        op=Comparison.EQ,
        group=2,
        label="weight",
    )
    return Problem(
        objective=objective,
        constraints=(one_hot, weight_match),
        binary_vars=tuple(x_names + y_names),
    )


def maxcut_problem(edges: Sequence[tuple[int, int]]) -> Problem:
    """Unconstrained max-cut; the objective is the negated cut size."""
    if not edges:
        raise InvalidInstanceError("edge list must not be empty")
    seen = set()
    terms: dict[tuple[str, ...], float] = {}
    for u, v in edges:
        if u == v:
            raise InvalidInstanceError(f"self-loop on node {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InvalidInstanceError(f"duplicate edge {key}")
        seen.add(key)
        xu, xv = f"x{u}", f"x{v}"
        for mono, coeff in (((xu, xv), 2.0), ((xu,), -1.0), ((xv,), -1.0)):
            terms[mono] = terms.get(mono, 0.0) + coeff
    nodes = sorted({node for edge in seen for node in edge})
    return Problem(
        objective=Polynomial(terms),
        constraints=(),
        binary_vars=tuple(f"x{node}" for node in nodes),
    )


def tsp_problem(distance_matrix: Sequence[Sequence[float]]) -> Problem:
    """Tour-length minimization with one-hot city/step encoding.

    Variable ``x{v}_{t}`` is 1 when city ``v`` is visited at step ``t``.
    Groups 1..n force one city per step; groups n+1..2n force one step per
    city.
    """
    n = len(distance_matrix)
    if n < 3:
        raise InvalidInstanceError("distance matrix must be at least 3x3")
    for i, row in enumerate(distance_matrix):
        if len(row) != n:
            raise InvalidInstanceError("distance matrix must be square")
        if abs(row[i]) > _FEASIBILITY_TOL:
            raise InvalidInstanceError("distance matrix diagonal must be zero")
        for j, d in enumerate(row):
            if d < 0:
                raise InvalidInstanceError("distances must be non-negative")
            if abs(d - distance_matrix[j][i]) > _FEASIBILITY_TOL:
                raise InvalidInstanceError("distance matrix must be symmetric")

    def var(v: int, t: int) -> str:
        return f"x{v}_{t}"

    terms: dict[tuple[str, ...], float] = {}
    for t in range(n):
        for u in range(n):
            for v in range(n):
                if u == v:
                    continue
                d = float(distance_matrix[u][v])
                if d == 0.0:
                    continue
                mono = tuple(sorted((var(u, t), var(v, (t + 1) % n))))
                terms[mono] = terms.get(mono, 0.0) + d

    constraints = []
    for t in range(n):
        constraints.append(
            Constraint(
                lhs=Polynomial({(var(v, t),): 1.0 for v in range(n)}),
                rhs=Polynomial({(): 1.0}),
                op=Comparison.EQ,
                group=1 + t,
                label=f"step{t}",
            )
        )
    for v in range(n):
        constraints.append(
            Constraint(
                lhs=Polynomial({(var(v, t),): 1.0 for t in range(n)}),
                rhs=Polynomial({(): 1.0}),
                op=Comparison.EQ,
                group=1 + n + v,
                label=f"city{v}",
            )
        )
    order = tuple(var(v, t) for v in range(n) for t in range(n))
    return Problem(Polynomial(terms), tuple(constraints), order)


_OP_ALIASES = {
    "==": Comparison.EQ,
    "=": Comparison.EQ,
    "eq": Comparison.EQ,
    "<=": Comparison.LE,
    "le": Comparison.LE,
    ">=": Comparison.GE,
    "ge": Comparison.GE,
}


def _parse_comparison(op) -> Comparison:
    if isinstance(op, Comparison):
        return op
    try:
        return _OP_ALIASES[str(op).lower()]
    except KeyError:
        raise InvalidInstanceError(f"unknown comparison operator {op!r}") from None


def _parse_method(method) -> InequalityMethod:
    if isinstance(method, InequalityMethod):
        return method
    try:
        return InequalityMethod(str(method).lower())
    except ValueError:
        raise InvalidInstanceError(f"unknown inequality method {method!r}") from None


def custom_problem(
    objective: str,
    constraints: Sequence[tuple] = (),
    variables: Sequence[str] | None = None,
) -> Problem:
    """Build a problem from expression strings.

    Each constraint is ``(lhs, op, rhs)`` optionally extended with a method
    (``"slack"`` or ``"unbalanced"``) and a ``(lambda1, lambda2)`` pair.  The
    variable universe is the objective's variables unless ``variables`` lists
    it explicitly; constraints may not introduce variables outside it.
    """
    objective_poly = parse_expression(objective)
    if variables is not None:
        universe = list(dict.fromkeys(variables))
        stray = set(objective_poly.variables) - set(universe)
        if stray:
            raise UnknownVariableError(
                f"objective uses undeclared variables: {sorted(stray)}"
            )
    else:
        universe = list(objective_poly.variables)

    built = []
    for index, spec in enumerate(constraints):
        lhs_text, op, rhs_text, *rest = spec
        method = _parse_method(rest[0]) if len(rest) >= 1 else InequalityMethod.SLACK
        lambdas = tuple(float(v) for v in rest[1]) if len(rest) >= 2 else (1.0, 1.0)
        lhs = parse_expression(str(lhs_text))
        rhs = parse_expression(str(rhs_text))
        stray = (set(lhs.variables) | set(rhs.variables)) - set(universe)
        if stray:
            raise UnknownVariableError(
                f"constraint {index} uses undeclared variables: {sorted(stray)}"
            )
        built.append(
            Constraint(
                lhs=lhs,
                rhs=rhs,
                op=_parse_comparison(op),
                group=index + 1,
                label=f"c{index}",
                method=method,
                lambdas=lambdas,
            )
        )
    return Problem(objective_poly, tuple(built), tuple(universe))
