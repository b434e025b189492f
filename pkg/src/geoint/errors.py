"""Exception hierarchy shared by the steppers and diagnostics."""


class GeointError(Exception):
    """Base class for runtime failures of the integrators."""


class DomainError(GeointError):
    """Evaluation outside the model's domain of validity (e.g. B <= 0)."""


class NonConvergence(GeointError):
    """An implicit solve failed to reach tolerance within its iteration budget."""

    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"fixed-point iteration did not converge: residual {residual:.3e} "
            f"after {iterations} iterations"
        )


class SingularOperator(GeointError):
    """The 2x2 linear operator of the implicit update is numerically singular."""


class SingularConfiguration(GeointError):
    """Gravitational separation below the singularity guard."""


class SeriesTooShort(GeointError):
    """A diagnostic series is shorter than the analysis windows require."""
