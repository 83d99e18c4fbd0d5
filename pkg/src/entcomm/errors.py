class EntcommError(Exception):
    pass


class ValidationError(EntcommError):
    """Raised when a quantum object violates one of its invariants."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DimensionMismatchError(EntcommError, ValueError):
    pass


class SolverConvergenceError(EntcommError):
    """The SDP did not reach the requested gap; ``result`` holds the best certified interval."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InfeasibleCapError(EntcommError, ValueError):
    pass


class ScenarioTooLargeError(EntcommError):
    pass


class NonProjectiveMeasurementError(EntcommError, ValueError):
    pass


class TargetUnreachableError(EntcommError):
    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
