"""qubokit: penalized QUBO formulation and interchangeable solvers.

Constrained binary problems are expressed as polynomial objectives plus
constraints, folded into a weighted QUBO, and handed to a QAOA state-vector
simulator, a simulated-annealing sampler, or an exact brute-force reference.
Local (Adam) and global (grid / random / cross-entropy) optimizers tune the
variational angles and the penalty weights; experiments are driven by a
declarative YAML/JSON config or the Python API re-exported here.
"""

from .config import load_config, problem_from_config, solver_from_config, validate_config
from .conversion import Ising, Qubo, apply_slack, apply_unbalanced, qubo_to_ising, to_qubo
from .errors import (
    ConfigError,
    DegreeError,
    EmptyResultsError,
    GridTooLargeError,
    InvalidInstanceError,
    InvalidLambdaError,
    MissingVariableError,
    NonFiniteObjectiveError,
    ParseError,
    QubokitError,
    TooManyVariablesError,
    UnboundedSlackError,
    UnknownVariableError,
    UnsupportedSolverError,
    WeightCountMismatchError,
)
from .expressions import format_polynomial, parse_expression
from .optimizers import (
    HyperOptimizerSpec,
    adam_minimize,
    cem_minimize,
    grid_search,
    hyper_optimize,
    random_search,
)
from .polynomial import Polynomial
from .problems import (
    Comparison,
    Constraint,
    InequalityMethod,
    KnapsackInstance,
    Problem,
    custom_problem,
    knapsack_problem,
    maxcut_problem,
    tsp_problem,
)
from .qaoa import Angles, StateVector, expectation, precompute_energies, probabilities, run_qaoa_circuit
from .results import add_evaluation_to_results, sort_solver_results, weighted_avg_evaluation
from .solvers import AnnealingSolver, BruteForceSolver, SolverResults, VqaSolver

__version__ = "0.1.0"

__all__ = [
    "Angles",
    "AnnealingSolver",
    "BruteForceSolver",
    "Comparison",
    "ConfigError",
    "Constraint",
    "DegreeError",
    "EmptyResultsError",
    "GridTooLargeError",
    "HyperOptimizerSpec",
    "InequalityMethod",
    "InvalidInstanceError",
    "InvalidLambdaError",
    "Ising",
    "KnapsackInstance",
    "MissingVariableError",
    "NonFiniteObjectiveError",
    "ParseError",
    "Polynomial",
    "Problem",
    "Qubo",
    "QubokitError",
    "SolverResults",
    "StateVector",
    "TooManyVariablesError",
    "UnboundedSlackError",
    "UnknownVariableError",
    "UnsupportedSolverError",
    "VqaSolver",
    "WeightCountMismatchError",
    "add_evaluation_to_results",
    "adam_minimize",
    "apply_slack",
    "apply_unbalanced",
    "cem_minimize",
    "custom_problem",
    "expectation",
    "format_polynomial",
    "grid_search",
    "hyper_optimize",
    "knapsack_problem",
    "load_config",
    "maxcut_problem",
    "parse_expression",
    "precompute_energies",
    "probabilities",
    "problem_from_config",
    "qubo_to_ising",
    "random_search",
    "run_qaoa_circuit",
    "solver_from_config",
    "sort_solver_results",
    "to_qubo",
    "tsp_problem",
    "validate_config",
    "weighted_avg_evaluation",
]
