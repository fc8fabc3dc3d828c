"""Exception types shared across the package."""


class PwcycleError(Exception):
    """Base class for all package errors."""


class DomainError(PwcycleError, ValueError):
    """A first integral or polar form was evaluated outside its domain."""


class DegenerateError(PwcycleError, ValueError):
    """A saddle specification is not hyperbolic (discriminant >= 0)."""


class DegenerateConfig(PwcycleError):
    """The matching equations of a configuration collapse or contradict."""


class HypothesisViolation(PwcycleError):
    """A stated hypothesis of a closing analysis does not hold."""


class NoIntersection(PwcycleError):
    """A separatrix does not meet the requested ray inside the sector."""


class EmptyDomain(PwcycleError):
    """No grid ordinate produced a completed half-orbit."""


class NotHamiltonian(PwcycleError):
    """The closing solvers only accept divergence-free saddle zones."""


class ParseError(PwcycleError):
    """A system description file is malformed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
