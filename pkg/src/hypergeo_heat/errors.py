"""Exception types raised by the numerical routines."""


class HypergeoError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedRootSystem(HypergeoError, ValueError):
    pass


class WeylClosureError(HypergeoError):
    """Reflection closure did not terminate within the safety bound."""


class SingularParameter(HypergeoError):
    """A denominator ``(mu, mu - 2 lambda)`` of the coefficient recursion vanishes.

    The caller is expected to perturb the spectral parameter.
    """


class PoleEncountered(HypergeoError):
    """A Gamma factor of the c-function sits on an uncancelled pole."""


class DomainError(HypergeoError, ValueError):
    """A point lies outside the domain where the requested evaluation is valid."""


class InsufficientDecay(HypergeoError):
    """A sampled function is not negligible at the edge of its quadrature box."""
