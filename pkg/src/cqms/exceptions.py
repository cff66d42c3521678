"""Exception hierarchy."""


class CqmsError(Exception):
    """Base class for all errors raised by the package."""


class InvalidInputError(CqmsError, ValueError):
    """An argument violates an operation's precondition."""


class PreconditionError(InvalidInputError):
    """A numerical precondition (e.g. nonnegativity of a symbol) fails."""


class LPError(CqmsError, RuntimeError):
    pass


class InfeasibleError(LPError):
    """The linear program has an empty feasible region."""


class UnboundedError(LPError):
    """The linear program objective is unbounded in the optimisation direction."""
