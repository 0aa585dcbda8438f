"""Exception types shared across the package.

Every error raised deliberately by this package derives from ModelError, so
callers can catch one base class at API boundaries.  The CLI maps these onto
its exit-status contract.
"""

from __future__ import annotations


class ModelError(Exception):
    """Base class for all errors raised by hcvdyn."""


class ParameterError(ModelError, ValueError):
    """A parameter set violates a hard structural invariant."""


class DomainError(ModelError, ValueError):
    """A computation was requested outside its mathematical domain.

    Examples: a derived constant that is undefined for the given rates, a
    Lyapunov evaluation at a nonpositive state, or a certificate for an
    equilibrium that does not exist.
    """


class IntegrityError(ModelError, ArithmeticError):
    """Two independent routes to the same quantity disagreed.

    Closed-form expressions in this package are cross-checked against a
    second derivation (minor expansion, spectral radius, collected algebraic
    form).  Disagreement beyond the integrity tolerance means a transcription
    error somewhere, and is never silently ignored.
    """


class IntegrationError(ModelError, RuntimeError):
    """Time integration failed before reaching t_end.

    The partial trajectory accumulated so far is attached so callers can
    still inspect or persist it.
    """

    def __init__(self, message: str, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class ScenarioError(ModelError, ValueError):
    """A scenario or sweep-spec file failed to parse.

    Carries the 1-based line number of the offending line when one can be
    attributed.
    """

    def __init__(self, message: str, line: int | None = None, source: str = "<input>"):
        self.line = line
        self.source = source
        prefix = f"{source}:{line}: " if line is not None else f"{source}: "
        super().__init__(prefix + message)


class SweepError(ModelError, ValueError):
    """A sweep specification violates its invariants."""
