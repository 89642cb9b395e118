import itertools

import numpy as np
import pytest

from qubokit.conversion import (
    Qubo,
    apply_slack,
    apply_unbalanced,
    qubo_to_ising,
    to_qubo,
)
from qubokit.errors import (
    DegreeError,
    InvalidLambdaError,
    UnboundedSlackError,
    WeightCountMismatchError,
)
from qubokit.polynomial import Polynomial
from qubokit.problems import (
    Comparison,
    Constraint,
    InequalityMethod,
    KnapsackInstance,
    custom_problem,
    knapsack_problem,
)

LISTING_ALPHAS = [1.0, 2.5, 2.5]


@pytest.fixture
def three_items():
    return knapsack_problem(KnapsackInstance(2, (1, 1, 1), (2.0, 2.0, 1.0)))


def all_assignments(names):
    for bits in itertools.product((0, 1), repeat=len(names)):
        yield dict(zip(names, bits))


class TestToQubo:
    def test_knapsack_coefficient_table(self, three_items):
        q = to_qubo(three_items, LISTING_ALPHAS)
        expected = {
            ("x0",): 0.5,
            ("x1",): 0.5,
            ("x2",): 1.5,
            ("y2",): 7.5,
            ("x0", "x1"): 5.0,
            ("x0", "x2"): 5.0,
            ("x1", "x2"): 5.0,
            ("x0", "y1"): -5.0,
            ("x1", "y1"): -5.0,
            ("x2", "y1"): -5.0,
            ("x0", "y2"): -10.0,
            ("x1", "y2"): -10.0,
            ("x2", "y2"): -10.0,
            ("y1", "y2"): 15.0,
        }
        assert dict(q.poly.terms) == pytest.approx(expected, abs=1e-9)
        assert ("y1",) not in q.poly.terms  # exact cancellation drops the term
        assert q.offset == pytest.approx(2.5, abs=1e-9)
        assert q.var_order == ("x0", "x1", "x2", "y1", "y2")

    def test_energy_at_constrained_optimum(self, three_items):
        q = to_qubo(three_items, LISTING_ALPHAS)
        optimum = {"x0": 1, "x1": 1, "x2": 0, "y1": 0, "y2": 1}
        assert q.energy(optimum) == pytest.approx(-4.0, abs=1e-9)

    def test_argmin_is_constrained_optimum(self, three_items):
        q = to_qubo(three_items, LISTING_ALPHAS)
        energies = {
            tuple(a[v] for v in q.var_order): q.energy(a)
            for a in all_assignments(q.var_order)
        }
        argmin = min(energies, key=energies.get)
        assert argmin == (1, 1, 0, 0, 1)
        assert energies[argmin] == pytest.approx(-4.0)

    def test_zero_weights_give_empty_qubo(self, three_items):
        q = to_qubo(three_items, [0.0, 0.0, 0.0])
        assert q.poly == Polynomial()
        assert q.offset == 0.0

    def test_weight_count_mismatch(self, three_items):
        with pytest.raises(WeightCountMismatchError):
            to_qubo(three_items, [1.0, 2.5])

    def test_eq_penalty_zero_iff_constraint_holds(self, three_items):
        # per-group exactness of squared-equality penalties
        for constraint in three_items.constraints:
            gap = constraint.lhs - constraint.rhs
            penalty = (gap * gap).reduce_binary_powers()
            for a in all_assignments(three_items.binary_vars):
                value = penalty.evaluate(a)
                if constraint.holds(a):
                    assert value == pytest.approx(0.0, abs=1e-12)
                else:
                    assert value > 0.5

    def test_cubic_objective_rejected(self):
        p = custom_problem("x0*x1*x2")
        with pytest.raises(DegreeError):
            to_qubo(p, [1.0])

    def test_slack_variables_enter_var_order(self):
        p = custom_problem("-x0 - x1 - x2", [("x0 + x1 + x2", "<=", "2")])
        q = to_qubo(p, [1.0, 10.0])
        assert q.var_order[:3] == ("x0", "x1", "x2")
        assert len(q.var_order) == 5  # two slack bits for a gap bound of 2

    def test_unbalanced_constraint_feeds_through(self):
        p = custom_problem("-x0 - x1", [("x0 + x1", "<=", "1", "unbalanced")])
        q = to_qubo(p, [1.0, 1.0])
        assert q.var_order == ("x0", "x1")  # no slack bits
        # at the violating point h = -1: penalty 1 + 1 = 2
        assert q.energy({"x0": 1, "x1": 1}) == pytest.approx(-2.0 + 2.0)


class TestApplySlack:
    def build(self, lhs, rhs, op=Comparison.LE):
        return Constraint(lhs=lhs, rhs=rhs, op=op, group=1, label="t")

    def test_sum_le_two(self):
        c = self.build(
            Polynomial({("x0",): 1, ("x1",): 1, ("x2",): 1}), Polynomial({(): 2})
        )
        rewritten, names = apply_slack(c, prefix="s")
        assert names == ["s_0", "s_1"]
        coeffs = [rewritten.lhs.terms[(n,)] for n in names]
        assert coeffs == [1.0, 1.0]
        assert rewritten.op is Comparison.EQ

    def test_single_bit(self):
        c = self.build(Polynomial({("x0",): 1}), Polynomial({(): 1}))
        rewritten, names = apply_slack(c, prefix="s")
        assert len(names) == 1
        assert rewritten.lhs.terms[(names[0],)] == 1.0

    def test_degenerate_zero_bound(self):
        c = self.build(Polynomial({("x0",): 1}), Polynomial())
        rewritten, names = apply_slack(c)
        assert names == []
        assert rewritten.lhs == Polynomial({("x0",): 1})

    def test_ge_swaps_sides(self):
        c = self.build(
            Polynomial({("x0",): 1, ("x1",): 1}), Polynomial({(): 1}), op=Comparison.GE
        )
        rewritten, names = apply_slack(c, prefix="s")
        # rhs + slack == lhs, slack covers 0..1
        assert len(names) == 1
        assert rewritten.rhs == Polynomial({("x0",): 1, ("x1",): 1})

    def test_infeasible_everywhere(self):
        c = self.build(Polynomial({("x0",): 1}), Polynomial({(): -1}))
        with pytest.raises(UnboundedSlackError):
            apply_slack(c)

    def test_non_integer_coefficients(self):
        c = self.build(Polynomial({("x0",): 0.5}), Polynomial({(): 1}))
        with pytest.raises(UnboundedSlackError):
            apply_slack(c)

    @pytest.mark.parametrize("bound", range(1, 17))
    def test_encoding_covers_exactly_0_to_bound(self, bound):
        from qubokit.conversion import _slack_coefficients

        coeffs = _slack_coefficients(bound)
        sums = set()
        for bits in itertools.product((0, 1), repeat=len(coeffs)):
            sums.add(sum(b * c for b, c in zip(bits, coeffs)))
        assert sums == set(range(bound + 1))

    def test_projection_preserves_feasible_set(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            names = tuple(f"x{i}" for i in range(n))
            coeffs = rng.integers(-4, 5, size=n)
            rhs_value = int(rng.integers(-3, 7))
            op = Comparison.LE if rng.random() < 0.5 else Comparison.GE
            lhs = Polynomial({(v,): float(c) for v, c in zip(names, coeffs)})
            constraint = Constraint(lhs, Polynomial({(): float(rhs_value)}), op, group=1)

            original_feasible = {
                tuple(a[v] for v in names)
                for a in all_assignments(names)
                if constraint.holds(a)
            }
            try:
                rewritten, slack_names = apply_slack(constraint, prefix="s")
            except UnboundedSlackError:
                assert original_feasible == set()
                continue
            projected = set()
            for a in all_assignments(names + tuple(slack_names)):
                if rewritten.holds(a):
                    projected.add(tuple(a[v] for v in names))
            assert projected == original_feasible


class TestApplyUnbalanced:
    def setup_method(self):
        lhs = Polynomial({("x0",): 1, ("x1",): 1, ("x2",): 1})
        self.constraint = Constraint(lhs, Polynomial({(): 2}), Comparison.LE, group=1)
        self.penalty = apply_unbalanced(self.constraint, (1.0, 1.0))

    def test_gap_two(self):
        assert self.penalty.evaluate({"x0": 0, "x1": 0, "x2": 0}) == pytest.approx(2.0)

    def test_boundary_zero(self):
        assert self.penalty.evaluate({"x0": 1, "x1": 1, "x2": 0}) == pytest.approx(0.0)

    def test_violation(self):
        assert self.penalty.evaluate({"x0": 1, "x1": 1, "x2": 1}) == pytest.approx(2.0)

    def test_positive_at_every_infeasible_point(self):
        names = ("x0", "x1", "x2")
        for a in all_assignments(names):
            if not self.constraint.holds(a):
                assert self.penalty.evaluate(a) > 0

    def test_ge_mirrors(self):
        c = Constraint(
            Polynomial({("x0",): 1, ("x1",): 1}),
            Polynomial({(): 1}),
            Comparison.GE,
            group=1,
        )
        penalty = apply_unbalanced(c)
        # h = lhs - rhs = -1 at all-zeros: infeasible, positive penalty
        assert penalty.evaluate({"x0": 0, "x1": 0}) == pytest.approx(2.0)
        assert penalty.evaluate({"x0": 1, "x1": 0}) == pytest.approx(0.0)

    def test_lambda_validation(self):
        with pytest.raises(InvalidLambdaError):
            apply_unbalanced(self.constraint, (0.0, 1.0))
        with pytest.raises(InvalidLambdaError):
            apply_unbalanced(self.constraint, (1.0, -1.0))


class TestIsing:
    def test_single_variable(self):
        q = Qubo(Polynomial({("x0",): 1.0}), 0.0, ("x0",))
        ising = qubo_to_ising(q)
        assert ising.h[0] == pytest.approx(-0.5)
        assert ising.offset == pytest.approx(0.5)

    def test_quadratic_term(self):
        q = Qubo(Polynomial({("x0", "x1"): 4.0}), 0.0, ("x0", "x1"))
        ising = qubo_to_ising(q)
        assert ising.j[0, 1] == pytest.approx(1.0)
        assert ising.h[0] == pytest.approx(-1.0)
        assert ising.h[1] == pytest.approx(-1.0)
        assert ising.offset == pytest.approx(1.0)

    def test_constant_only(self):
        q = Qubo(Polynomial(), 3.0, ("x0", "x1"))
        ising = qubo_to_ising(q)
        assert np.all(ising.h == 0)
        assert np.all(ising.j == 0)
        assert ising.offset == 3.0

    def test_random_energy_equivalence(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            n = int(rng.integers(1, 9))
            names = tuple(f"v{i}" for i in range(n))
            terms = {}
            for i in range(n):
                terms[(names[i],)] = float(rng.normal())
                for j in range(i + 1, n):
                    if rng.random() < 0.5:
                        terms[(names[i], names[j])] = float(rng.normal())
            q = Qubo(Polynomial(terms), float(rng.normal()), names)
            ising = qubo_to_ising(q)
            for a in all_assignments(names):
                spins = [1 - 2 * a[v] for v in names]
                assert ising.energy(spins) == pytest.approx(q.energy(a), abs=1e-9)
