"""Exception types raised across the package."""


class PeriodicDirichletError(Exception):
    """Base class for all package errors."""


class SingularPointError(PeriodicDirichletError, ValueError):
    """Kernel evaluated on (or numerically at) a lattice point."""


class InvalidParametersError(PeriodicDirichletError, ValueError):
    """Ewald parameters out of range or failing the construction self-check."""


class OutOfDomainError(PeriodicDirichletError, ValueError):
    pass


class InvalidShapeError(PeriodicDirichletError, ValueError):
    pass


class InadmissiblePlacementError(PeriodicDirichletError, ValueError):
    """The scaled hole does not fit strictly inside the unit cell."""


class InvalidDiscretizationError(PeriodicDirichletError, ValueError):
    pass


class NearBoundaryError(PeriodicDirichletError, ValueError):
    """Target point closer to the hole boundary than the quadrature resolves."""


class UnderResolvedDataError(PeriodicDirichletError, ValueError):
    pass


class IllConditionedSystemError(PeriodicDirichletError, ArithmeticError):
    pass


class FluxUnresolvedError(PeriodicDirichletError, ArithmeticError):
    pass


class FitError(PeriodicDirichletError, ValueError):
    pass


class UnresolvedHoleError(PeriodicDirichletError, ValueError):
    """Finite-difference grid too coarse to resolve the hole."""


class ConvergenceError(PeriodicDirichletError, ArithmeticError):
    pass
