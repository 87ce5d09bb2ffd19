"""Exception hierarchy shared by all fraclap modules."""


class FraclapError(Exception):
    """Base class for every error raised by the package."""


class InvalidParameters(FraclapError, ValueError):
    """Exponents, weights or dimensions outside their admissible ranges."""


class InadmissibleExponents(InvalidParameters):
    """Effective exponents of a general symbol violate 0 <= theta <= alpha."""


class PreconditionError(FraclapError, ValueError):
    """An operation was called outside its documented domain."""


class QuadratureNonConvergent(FraclapError, RuntimeError):
    """Adaptive quadrature exhausted its panel budget."""


class StepTooLarge(PreconditionError):
    """RK4 step exceeds the stability-safe bound 0.1 / max(1, |lambda|)."""


class EquivalenceViolated(FraclapError, AssertionError):
    """A sample broke the lower bound E >= E1 / 2."""


class HypothesisViolated(PreconditionError):
    """An estimate was requested outside its hypothesis (e.g. delta > theta)."""


class HypothesisNotMet(PreconditionError):
    """No rate formula applies; the message names the violated condition."""


class BetaRequired(PreconditionError):
    """Regularity-loss case (theta < delta) needs an explicit beta."""


class ThetaOutOfRange(InvalidParameters):
    """Damping exponent outside the admissible interval of a preset."""


class DegenerateInput(FraclapError, ValueError):
    """A decay curve cannot be fitted (NaN or zero values in the window)."""


class ConfigError(FraclapError, ValueError):
    """Inconsistent command-line configuration."""
