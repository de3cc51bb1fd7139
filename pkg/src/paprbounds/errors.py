class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SolverError(RuntimeError):
    """An iterative solver failed to converge.

    ``diagnostics`` carries whatever state the solver had when it gave up
    (bracket endpoints, sandwich gap, iteration count).
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})

    def __str__(self):
        base = super().__str__()
        if not self.diagnostics:
            return base
        detail = ", ".join(f"{k}={v!r}" for k, v in self.diagnostics.items())
        return f"{base} [{detail}]"
