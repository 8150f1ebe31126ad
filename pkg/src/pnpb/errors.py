"""Exception types shared across the solver."""


class PnpbError(Exception):
    """Base class for all solver errors."""


class DimensionMismatch(PnpbError):
    pass


class NonPositiveBulkVoid(PnpbError):
    """Bulk void fraction 1 - eta * sum(v_i * C_i^B) is not positive."""


class NonPositiveTotalVoid(PnpbError):
    """Total void budget 1 - eta * sum(v_i * m_i) is not positive."""


class ValidationError(PnpbError):
    pass


class SingularAtZero(PnpbError):
    """Kernel family is singular at r = 0 and was evaluated there."""


class QuadratureNonConvergence(PnpbError):
    """Adaptive quadrature could not reach the requested tolerance."""


class VoidCollapse(PnpbError):
    """Void fraction dropped to zero or below at some cell (strict mode)."""

    def __init__(self, cell, gamma):
        self.cell = cell
        self.gamma = gamma
        super().__init__(f"void fraction {gamma:.6e} <= 0 at cell {cell}")


class NonpositiveConcentration(PnpbError):
    pass


class LinearSolveFailure(PnpbError):
    pass


class NoConvergence(PnpbError):
    def __init__(self, iterations, last_update):
        self.iterations = iterations
        self.last_update = last_update
        super().__init__(
            f"no convergence after {iterations} iterations "
            f"(last update {last_update:.3e})"
        )


class ParseError(PnpbError):
    def __init__(self, line_no, message):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")
