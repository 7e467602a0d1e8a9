"""Exception hierarchy shared by all modules.

Every raisable condition named in the operation contracts maps to one class
here; callers can catch ``ConifoldError`` to get all of them.
"""


class ConifoldError(Exception):
    """Base class for all library errors."""


class DomainError(ConifoldError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class BranchCutError(DomainError):
    """Evaluation requested on a branch cut without a side flag."""


class BranchTrackError(ConifoldError):
    """A path-continuous log could not be tracked across a zero."""


class PoleError(DomainError):
    """Argument hits (or is too close to) a zero/pole lattice point."""


class WallError(DomainError):
    """Point on the wall 2 Re(e^{2 pi i t}) = 1 where Im(tau) = 0."""


class SingularityError(DomainError):
    """Instanton sum evaluated at a singular fiber t = n."""


class OnRayError(DomainError):
    """lambda (or zeta) within angular tolerance of a BPS ray."""


class DegenerateError(ConifoldError):
    """Metric assembly would divide by a (near-)vanishing density."""


class BudgetError(ConifoldError, RuntimeError):
    """Requested tolerance not reachable within the truncation budget."""


class ConvergenceError(ConifoldError, RuntimeError):
    """An infinite product/sum has a non-decaying term and cannot converge."""


class OrderingError(ConifoldError):
    """Sector walk is ambiguous (start/target too close to a ray)."""


class RegimeError(ConifoldError):
    """No stabilized sign pattern found within the term budget."""


class FitError(ConifoldError):
    """Least-squares Laurent fit residual exceeds tolerance."""


class DivergenceWarning(UserWarning):
    """Asymptotic series evaluated outside its decreasing-term regime."""
