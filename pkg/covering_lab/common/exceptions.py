from covering_lab.common.response.codes import ExitCode


class CoveringLabError(Exception):
    """Base exception class for covering-lab errors."""
    exit_code = ExitCode.INTERNAL_ERROR


class InvalidConfigError(CoveringLabError):
    """Raised when an experiment config or an operation argument is invalid."""
    exit_code = ExitCode.INVALID_CONFIG

    def __init__(self, message: str, errors: list = None):
        super().__init__(message)
        self.errors = errors if errors else []


class InsufficientDataError(CoveringLabError):
    """Raised when an explicit radius list is too short to estimate from."""
    exit_code = ExitCode.INVALID_CONFIG

    def __init__(self, length: int, required: int):
        self.length = length
        self.required = required
        super().__init__(f"insufficient data: {length} radii given, at least {required} required.")


class ArgumentOrderError(CoveringLabError):
    """Raised when dimension arguments violate 0 <= dim_h <= dim_p <= t or 0 <= alpha <= t."""
    exit_code = ExitCode.INVALID_CONFIG

    def __init__(self, violated: str):
        self.violated = violated
        super().__init__(f"Argument ordering violated: {violated}.")


class UnsupportedTargetError(CoveringLabError):
    exit_code = ExitCode.INVALID_CONFIG

    def __init__(self, target_kind: str):
        self.target_kind = target_kind
        super().__init__(f"Target '{target_kind}' is unsupported in snowflake metric.")


class UnsupportedDimensionError(CoveringLabError):
    exit_code = ExitCode.INVALID_CONFIG

    def __init__(self, d: int, supported: tuple):
        self.d = d
        self.supported = supported
        super().__init__(f"unsupported dimension {d}; supported: {', '.join(map(str, supported))}.")


class GridMismatchError(CoveringLabError):
    """Raised when two grids of different dimension or depth are combined."""
    exit_code = ExitCode.INVALID_CONFIG

    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"Grid mismatch: depths {left} and {right} differ.")


class RegimeMismatchError(CoveringLabError):
    """Raised when an experiment needs a hitting regime but the predictor says otherwise."""
    exit_code = ExitCode.INVALID_CONFIG

    def __init__(self, verdict: str):
        self.verdict = verdict
        super().__init__(f"Intersection dimension requires a hitting regime, predictor returned {verdict}.")


class ResourceCapError(CoveringLabError):
    exit_code = ExitCode.RESOURCE_CAP

    def __init__(self, message: str, requested: int = None, cap: int = None):
        self.requested = requested
        self.cap = cap
        super().__init__(message)


class DegenerateOutcomeError(CoveringLabError):
    exit_code = ExitCode.DEGENERATE_OUTCOME

    def __init__(self, message="no intersections observed; window too shallow or regime misclassified"):
        super().__init__(message)


class EmptySetError(DegenerateOutcomeError):
    def __init__(self):
        super().__init__("empty set has no dimension estimate")
