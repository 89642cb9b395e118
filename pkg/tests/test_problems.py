import itertools

import pytest

from qubokit.errors import InvalidInstanceError, ParseError, UnknownVariableError
from qubokit.polynomial import Polynomial
from qubokit.problems import (
    Comparison,
    InequalityMethod,
    KnapsackInstance,
    custom_problem,
    knapsack_problem,
    maxcut_problem,
    tsp_problem,
)


@pytest.fixture
def three_items():
    return knapsack_problem(KnapsackInstance(max_weight=2, weights=(1, 1, 1), values=(2.0, 2.0, 1.0)))


def assignments(names):
    for bits in itertools.product((0, 1), repeat=len(names)):
        yield dict(zip(names, bits))


class TestKnapsack:
    def test_variable_registry(self, three_items):
        assert three_items.binary_vars == ("x0", "x1", "x2", "y1", "y2")

    def test_feasible_optimum_scores_value(self, three_items):
        assert three_items.score({"x0": 1, "x1": 1, "x2": 0, "y1": 0, "y2": 1}) == -4.0

    def test_wrong_declared_weight_scores_penalty(self, three_items):
        # weight 2 packed but y declares 1
        assert three_items.score({"x0": 1, "x1": 0, "x2": 1, "y1": 1, "y2": 0}, penalty=0) == 0.0

    def test_score_equals_objective_iff_feasible(self, three_items):
        feasible_count = 0
        for assignment in assignments(three_items.binary_vars):
            holds = all(c.holds(assignment) for c in three_items.constraints)
            expected = (
                three_items.objective.evaluate(assignment) if holds else 123.0
            )
            assert three_items.score(assignment, penalty=123.0) == expected
            feasible_count += holds
        assert feasible_count > 0

    def test_brute_force_optimum(self, three_items):
        best = min(
            (three_items.score(a, penalty=0.0), tuple(a.values()))
            for a in assignments(three_items.binary_vars)
        )
        assert best == (-4.0, (1, 1, 0, 0, 1))

    def test_empty_knapsack_is_infeasible(self, three_items):
        # all-zero one-hot register violates the encoding constraint
        zero = {name: 0 for name in three_items.binary_vars}
        assert three_items.score(zero, penalty=99.0) == 99.0

    def test_instance_validation(self):
        with pytest.raises(InvalidInstanceError):
            KnapsackInstance(max_weight=2, weights=(1, 1), values=(1.0,))
        with pytest.raises(InvalidInstanceError):
            KnapsackInstance(max_weight=0, weights=(1,), values=(1.0,))
        with pytest.raises(InvalidInstanceError):
            KnapsackInstance(max_weight=2, weights=(0, 1), values=(1.0, 1.0))
        with pytest.raises(InvalidInstanceError):
            KnapsackInstance(max_weight=2, weights=(1, 1), values=(1.0, -1.0))


class TestMaxcut:
    def test_triangle_minimum(self):
        p = maxcut_problem([(0, 1), (1, 2), (0, 2)])
        values = [
            p.objective.evaluate(a) for a in assignments(p.binary_vars)
        ]
        assert p.objective.evaluate({"x0": 1, "x1": 0, "x2": 0}) == -2.0
        assert min(values) == -2.0

    def test_empty_cut_scores_zero(self):
        p = maxcut_problem([(0, 1), (1, 2), (0, 2)])
        assert p.score({"x0": 0, "x1": 0, "x2": 0}) == 0.0

    def test_single_edge(self):
        p = maxcut_problem([(0, 1)])
        assert p.score({"x0": 1, "x1": 0}) == -1.0

    def test_score_is_objective(self):
        p = maxcut_problem([(0, 1), (1, 2)])
        for a in assignments(p.binary_vars):
            assert p.score(a, penalty=55.0) == p.objective.evaluate(a)

    def test_rejects_self_loop(self):
        with pytest.raises(InvalidInstanceError):
            maxcut_problem([(0, 0)])

    def test_rejects_duplicates_and_empty(self):
        with pytest.raises(InvalidInstanceError):
            maxcut_problem([(0, 1), (1, 0)])
        with pytest.raises(InvalidInstanceError):
            maxcut_problem([])


class TestTsp:
    def test_uniform_distances_every_tour_scores_n(self):
        p = tsp_problem([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        scores = {
            p.score(a, penalty=float("inf")) for a in assignments(p.binary_vars)
        }
        assert scores == {3.0, float("inf")}

    def test_feasible_count_is_factorial(self):
        p = tsp_problem([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        feasible = sum(
            all(c.holds(a) for c in p.constraints) for a in assignments(p.binary_vars)
        )
        assert feasible == 6

    def test_two_cities_in_one_step_penalized(self):
        p = tsp_problem([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        a = {name: 0 for name in p.binary_vars}
        a["x0_0"] = a["x1_0"] = a["x2_1"] = 1
        assert p.score(a, penalty=77.0) == 77.0

    def test_asymmetric_tour_optimum(self):
        # d(0,1)=1, d(1,2)=2, d(0,2)=3: the single 3-cycle always has length 6
        p = tsp_problem([[0, 1, 3], [1, 0, 2], [3, 2, 0]])
        best = min(
            p.score(a, penalty=float("inf")) for a in assignments(p.binary_vars)
        )
        assert best == 6.0

    def test_validation(self):
        with pytest.raises(InvalidInstanceError):
            tsp_problem([[0, 1], [1, 0]])
        with pytest.raises(InvalidInstanceError):
            tsp_problem([[0, 1, 1], [2, 0, 1], [1, 1, 0]])  # asymmetric
        with pytest.raises(InvalidInstanceError):
            tsp_problem([[0, -1, 1], [-1, 0, 1], [1, 1, 0]])
        with pytest.raises(InvalidInstanceError):
            tsp_problem([[1, 1, 1], [1, 0, 1], [1, 1, 0]])  # non-zero diagonal

    def test_groups_cover_steps_then_cities(self):
        p = tsp_problem([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        assert p.num_constraint_groups == 6
        assert sorted(c.group for c in p.constraints) == [1, 2, 3, 4, 5, 6]


class TestCustom:
    def test_capacity_one(self):
        p = custom_problem("-x0 - x1", [("x0 + x1", Comparison.LE, "1", "slack")])
        best = min(
            (p.score(a, penalty=0.0), tuple(a.values())) for a in assignments(p.binary_vars)
        )
        assert best[0] == -1.0
        assert best[1] in ((1, 0), (0, 1))

    def test_unconstrained(self):
        p = custom_problem("x0")
        assert p.score({"x0": 0}) == 0.0
        assert p.constraints == ()

    def test_malformed_expression(self):
        with pytest.raises(ParseError):
            custom_problem("x0 +")

    def test_constraint_variable_outside_universe(self):
        with pytest.raises(UnknownVariableError):
            custom_problem("-x0", [("x9", "<=", "1")])

    def test_declared_variables_extend_universe(self):
        p = custom_problem("-x0", [("x9", "<=", "1")], variables=["x0", "x9"])
        assert p.binary_vars == ("x0", "x9")

    def test_method_and_lambdas_carried(self):
        p = custom_problem(
            "-x0", [("x0", "<=", "1", "unbalanced", (2.0, 3.0))]
        )
        assert p.constraints[0].method is InequalityMethod.UNBALANCED
        assert p.constraints[0].lambdas == (2.0, 3.0)

    def test_groups_assigned_in_order(self):
        p = custom_problem(
            "-x0 - x1",
            [("x0", "<=", "1"), ("x1", "<=", "1")],
        )
        assert [c.group for c in p.constraints] == [1, 2]


def test_problem_rejects_undeclared_variables():
    with pytest.raises(UnknownVariableError):
        from qubokit.problems import Constraint, Problem

        Problem(
            objective=Polynomial({("x",): 1.0}),
            constraints=(),
            binary_vars=("y",),
        )
