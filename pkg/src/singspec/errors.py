"""Exception types shared across modules."""


class SingspecError(Exception):
    pass


class NonIsolatedError(SingspecError, ValueError):
    """The ideal has infinite colength, so the germ is not an isolated singularity."""


class BudgetExceededError(SingspecError, RuntimeError):
    """The reduction-step budget ran out before a standard basis was found."""


class DegeneracyError(SingspecError, ValueError):
    """Newton non-degeneracy could not be established for some facet."""


class NotConvenientError(SingspecError, ValueError):
    pass


class DomainError(SingspecError, ValueError):
    """Family parameters outside their domain, or an instantiation whose mu disagrees."""
