"""Exception types shared across the toolkit."""


class StqcError(Exception):
    """Base class for all toolkit errors."""


class WrapAroundRisk(StqcError):
    """Periodic translation would wrap a non-negligible amount of mass."""


class SupportOverflow(StqcError):
    """State support reaches the box boundary; the box is too small."""


class ChirpAliasing(StqcError):
    """Quadratic chirp |x|^2/4s is not resolved by the grid (s too small)."""


class ResonantPair(StqcError):
    """Commutation coefficient 1+4as is (numerically) zero."""

    def __init__(self, s, a, value):
        super().__init__(f"resonant pair: 1+4as = {value:.3e} for s={s}, a={a}")
        self.s = s
        self.a = a
        self.value = value


class BlowUp(StqcError):
    """ODE solution escaped the configured bound in finite time."""

    def __init__(self, t_star, message=""):
        super().__init__(message or f"ODE blow-up detected at t = {t_star:.6g}")
        self.t_star = t_star


class FitFailed(StqcError):
    """Amplitude profile admits no positive-width Gaussian fit."""


class StiffSegment(StqcError):
    """dt policy demands more sub-steps than the configured ceiling."""


class BumpRangeError(StqcError):
    """No bump amplitude solves the endpoint equation in the bracket."""


class BudgetExceeded(StqcError):
    """Synthesized schedule duration exceeds the requested budget."""


class ToleranceNotMet(StqcError):
    """Refinement floor reached before the target error."""

    def __init__(self, best_error, message=""):
        super().__init__(message or f"refinement exhausted; best error {best_error:.3e}")
        self.best_error = best_error


class ConfigError(StqcError):
    """Invalid experiment configuration."""
