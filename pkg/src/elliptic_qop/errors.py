"""Exception hierarchy shared by all modules."""


class EllipticQopError(Exception):
    """Base class for all library errors."""


class ConfigInvalid(EllipticQopError):
    """A context or suite configuration violates its invariants."""


class DivergenceGuard(ConfigInvalid):
    """A series/product parameter lies outside its convergence domain."""


class PoleProximity(EllipticQopError):
    """An evaluation point is too close to a pole or zero lattice.

    Carries the offending point when known.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class NoConvergence(EllipticQopError):
    """An adaptive series failed its tail test within the term cap."""


class GenericityViolation(EllipticQopError):
    """Parameters hit a non-generic configuration (zero/pole collision)."""


class UnalignedLattices(EllipticQopError):
    """Comb supports live on incompatible delta lattices (strict mode)."""


class WindowTooSmall(EllipticQopError):
    """A truncation window cannot cover the requested comparison region."""


class TermExplosion(EllipticQopError):
    """An operator composition exceeded the term cap."""


class SingularGauge(EllipticQopError):
    """Gauge matrix is numerically singular."""


class NormalizationSingular(EllipticQopError):
    """Q-operator normalization evaluated at one of its pole points."""


class FiniteFormUnavailable(EllipticQopError):
    """Finite intertwiner form requested at non-half-integer spin."""


class SpinNotInteger(EllipticQopError):
    """Operation requires a non-negative integer spin."""


class ConstraintInfeasible(EllipticQopError):
    """Edge-parameter constraints admit no integer solution."""


class UnknownFunction(EllipticQopError):
    """CLI evaluation of an unregistered function id."""
