"""Exception and warning types shared across the package."""


class RatioDistError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParamsError(RatioDistError, ValueError):
    """Parameters violate a documented precondition (degenerate scale,
    out-of-range correlation, malformed grid, mismatched lengths, ...)."""


class OverflowRangeError(RatioDistError, OverflowError):
    """Input lies outside the range where a formula can be evaluated in
    IEEE double precision without overflow."""


class QuadratureError(RatioDistError):
    """Base class for quadrature failures."""


class NonConvergenceError(QuadratureError):
    """Level-doubling exhausted the maximum refinement depth with the error
    estimate still above the requested tolerance."""


class IntegrandError(QuadratureError):
    """The integrand produced a non-finite value at a quadrature node."""


class GridError(RatioDistError, ValueError):
    """A 2D inversion grid is malformed (non-positive steps, zero nodes)."""


class UndecayedCFError(RatioDistError):
    """A characteristic function did not fall below the decay threshold
    within the probed range, so no finite truncation point exists."""


class SingularProductError(RatioDistError):
    """The product-density integral is evaluated at a point where it may
    diverge (both factor supports contain zero and t = 0)."""


class AccuracyWarning(UserWarning):
    """A numerically computed probability needed clamping by more than the
    documented excursion budget, or a best-effort target was missed."""
