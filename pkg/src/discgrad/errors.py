"""Exception types shared across the package."""


class SingularJetDivisionError(ZeroDivisionError):
    """Division by a truncated series whose constant term vanishes."""


class ResonanceStepError(ValueError):
    """Step size too large for the locally exact denominator (tan pole)."""


class DegenerateStepError(ZeroDivisionError):
    """sin(omega*h) vanished where the momentum reconstruction needs it."""


class NonConvergenceError(RuntimeError):
    """Fixed-point iteration ran out of iterations.

    Carries the last increment so callers can judge how close it got.
    """

    def __init__(self, message, last_increment):
        super().__init__(message)
        self.last_increment = last_increment


class DivergenceError(RuntimeError):
    """Fixed-point iteration blew past the divergence guard."""


class UnsupportedSchemeError(ValueError):
    """Scheme applied to a system it cannot handle (e.g. leap-frog on a
    non-separable Hamiltonian), or an unknown scheme id."""


class PrecisionFloorWarning(UserWarning):
    """Measured error sits at the round-off floor; point excluded from fits."""
