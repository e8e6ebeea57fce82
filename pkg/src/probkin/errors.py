"""Exception types shared across the package.

Everything derives from ProbkinError so callers can catch the package's
failures with one except clause; the subclasses also inherit the closest
builtin (ValueError / ArithmeticError / RuntimeError) so generic handlers
keep working.
"""


class ProbkinError(Exception):
    """Base class for all errors raised by probkin."""


class DomainError(ProbkinError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class NumericError(ProbkinError, ArithmeticError):
    """NaN or other non-recoverable numeric failure."""


class SingularityError(ProbkinError, ArithmeticError):
    """Evaluation at a point where the quantity is singular (e.g. d = 0)."""


class SupportMismatchError(ProbkinError, ValueError):
    """Target puts mass where the reference (or prior) has none."""


class DegenerateSampleError(ProbkinError, ValueError):
    """Sample set carries no usable spread (e.g. MAD = 0)."""


class DegenerateFrameError(ProbkinError, ValueError):
    """Three reference atoms are collinear; no placement frame exists."""


class InvalidCdfError(ProbkinError, ValueError):
    """Callable handed in as a CDF is not monotone on the sample grid."""


class GradientError(ProbkinError, ValueError):
    """Analytic gradient disagrees with finite differences beyond tolerance."""


class AdaptationFailureError(ProbkinError, RuntimeError):
    """Step-size adaptation never found a workable step (all-divergent warmup)."""
