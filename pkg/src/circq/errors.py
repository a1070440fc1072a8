"""Exception hierarchy shared by all circq modules."""


class CircuitError(Exception):
    """Base class for every error raised by circq."""


class NetlistError(CircuitError):
    """Malformed or invalid netlist text.

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class TopologyError(CircuitError):
    pass


class TransformationError(CircuitError):
    pass


class HamiltonianError(CircuitError):
    pass


class BasisError(CircuitError):
    pass


class ConvergenceError(CircuitError):
    """Iterative eigensolver did not converge; carries the best residuals seen."""

    def __init__(self, message: str, residuals=None):
        self.residuals = residuals
        super().__init__(message)
