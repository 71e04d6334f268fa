"""Exception types shared across the package.

Plain ``ValueError`` is used for dimension/argument mismatches; the classes
here exist where callers need to tell failure modes apart (CLI exit codes,
benchmark cells that must survive a solver crash).
"""


class SvdConvergenceError(RuntimeError):
    """The underlying SVD factorization failed to converge."""


class SolverDivergedError(RuntimeError):
    """A solver produced a non-finite objective; carries the iteration index."""

    def __init__(self, iteration: int, message: str = ""):
        self.iteration = iteration
        super().__init__(message or f"non-finite objective at iteration {iteration}")


class DiagnosticError(RuntimeError):
    """A runtime convergence inequality failed while diagnostics were on."""


class ConfigError(ValueError):
    """Malformed run/grid configuration; the message names the bad field."""
