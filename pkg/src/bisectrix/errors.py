"""Exception hierarchy. Every error carries a stable ``code`` used by the CLI."""


class BisectrixError(Exception):
    code = "BISECTRIX_ERROR"


class ParallelLines(BisectrixError):
    code = "PARALLEL_LINES"


class DegenerateTriangle(BisectrixError):
    code = "DEGENERATE_TRIANGLE"


class DomainViolation(BisectrixError):
    code = "DOMAIN_VIOLATION"


class NotApplicable(BisectrixError):
    code = "NOT_APPLICABLE"


class LeadingZero(BisectrixError):
    code = "LEADING_ZERO"


class DegenerateApex(BisectrixError):
    code = "DEGENERATE_APEX"


class RightAngleAtBase(BisectrixError):
    code = "RIGHT_ANGLE_AT_BASE"


class IsoscelesDegenerate(BisectrixError):
    code = "ISOSCELES_DEGENERATE"


class HypothesisViolation(BisectrixError):
    code = "HYPOTHESIS_VIOLATION"


class NoTransversal(BisectrixError):
    code = "NO_TRANSVERSAL"


class PointsOnLine(BisectrixError):
    code = "POINTS_ON_LINE"


class OppositeSides(BisectrixError):
    code = "OPPOSITE_SIDES"


class CoincidentPoints(BisectrixError):
    code = "COINCIDENT_POINTS"


class VerticalPair(BisectrixError):
    code = "VERTICAL_PAIR"


class InvalidScene(BisectrixError):
    code = "INVALID_SCENE"


class ConvergenceError(BisectrixError):
    code = "CONVERGENCE"


class ConsistencyError(BisectrixError):
    """A computed configuration failed one of its own post-condition checks."""

    code = "CONSISTENCY"


class NotFound(BisectrixError):
    """A randomized search exhausted its budget without a result."""

    code = "NOT_FOUND"

    def __init__(self, message, budget=None, trials=None, best_margin=None):
        super().__init__(message)
        self.budget = budget
        self.trials = trials
        self.best_margin = best_margin


class NonGeometricReport(BisectrixError):
    code = "NON_GEOMETRIC_REPORT"


class SceneFileError(BisectrixError):
    code = "SCENE_FILE"
