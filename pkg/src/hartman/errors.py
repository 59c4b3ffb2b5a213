"""Exception hierarchy.

Every failure mode that the numerical routines can detect is surfaced as a
dedicated subclass of :class:`HartmanError` so that callers (and the CLI
sentinel column) can tell a regime violation from a numerical pole.
"""


class HartmanError(Exception):
    """Base class for all errors raised by this package."""


class ZeroDecayError(HartmanError, ValueError):
    """The decay constant vanishes (u = k**2 and v = 0)."""


class RegimeError(HartmanError, ValueError):
    """Parameters lie outside the tunneling regime required by a formula."""


class PhaseAmbiguityError(HartmanError, ValueError):
    """Two adjacent wrapped phases differ by (almost exactly) pi."""


class StepSizeError(HartmanError, ValueError):
    """A finite-difference step is too small (or too large) to be meaningful."""


class TransmissionOverflowError(HartmanError, ArithmeticError):
    """|m22| fell below 1e-300: the transmission amplitude is pole-like."""


class PhasePoleError(HartmanError, ArithmeticError):
    """T_N(xi) vanishes relative to U_{N-1}(xi); arctan(g chi) crosses a branch."""


class BandEdgeError(HartmanError, ArithmeticError):
    """|xi**2 - 1| is too small for the layered time formula."""


class DegeneratePhaseError(HartmanError, ArithmeticError):
    """Both real and imaginary parts of Q underflow; the phase is undefined."""


class FitConditioningError(HartmanError, ArithmeticError):
    """A least-squares design matrix is too ill-conditioned to trust."""


class ConfigError(HartmanError, ValueError):
    """One or more configuration problems; ``errors`` lists all of them."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))
