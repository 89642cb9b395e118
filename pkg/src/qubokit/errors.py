"""Exception hierarchy shared by every module in the package."""


class QubokitError(Exception):
    """Base class for all package-specific errors."""


class MissingVariableError(QubokitError):
    """A polynomial was evaluated without a value for one of its variables."""


class ParseError(QubokitError):
    """An expression string could not be parsed.

    ``position`` is the 1-based character offset of the offending token.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class InvalidInstanceError(QubokitError):
    """A problem instance violates its structural requirements."""


class UnknownVariableError(QubokitError):
    """A constraint refers to a variable outside the problem's universe."""


class DegreeError(QubokitError):
    """A polynomial exceeds degree 2 after binary reduction."""


class WeightCountMismatchError(QubokitError):
    """The penalty-weight vector does not match 1 + number of constraint groups."""


class UnboundedSlackError(QubokitError):
    """An inequality has no finite integer slack bound (or is infeasible everywhere)."""


class InvalidLambdaError(QubokitError):
    """Unbalanced-penalty lambdas must be strictly positive."""


class TooManyVariablesError(QubokitError):
    """The variable count exceeds the state-vector / enumeration cap."""


class NonFiniteObjectiveError(QubokitError):
    """An objective function returned NaN or infinity."""


class GridTooLargeError(QubokitError):
    """A grid search would exceed the evaluation cap."""


class EmptyResultsError(QubokitError):
    """A result-processing utility received an empty record table."""


class UnsupportedSolverError(QubokitError):
    """The configured solver type is not recognized."""


class ConfigError(QubokitError):
    """A configuration document is invalid.

    ``path`` is the dotted location of the offending key, e.g. ``problem.type``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message
