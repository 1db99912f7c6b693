"""Exception hierarchy shared by every module."""


class QSeriesError(Exception):
    """Base class for all library errors."""


class DomainError(QSeriesError, ValueError):
    """An argument lies outside the region where an operation is defined."""


class DivisionByZero(QSeriesError, ZeroDivisionError):
    """A Pochhammer factor in a denominator vanished (argument on a pole lattice)."""


class NotConverged(QSeriesError, ArithmeticError):
    """A truncated product or sum hit ``max_terms`` before meeting its tolerance."""


class OutsideAnnulus(DomainError):
    """The series variable is not strictly inside the convergence annulus."""


class DegenerateNodes(QSeriesError, ValueError):
    """Interpolation nodes make a theta denominator vanish (or nearly so)."""


class ZeroCountMismatch(QSeriesError):
    """The argument-principle count disagrees with the expected number of zeros."""


class NewtonStall(QSeriesError):
    """Newton seeding could not locate every zero class."""


class ProbeDegenerate(QSeriesError):
    """No probe point far enough from the zero classes could be drawn."""


class BranchJump(QSeriesError):
    """A tracked zero moved too far in one step (near a branch point)."""


class NearBranchPoint(DomainError):
    """An integration path or limit comes too close to a branch point."""


class QuadratureFail(QSeriesError, ArithmeticError):
    """Adaptive quadrature exhausted its subdivision budget."""


class PoleHit(DomainError):
    """A quotient was evaluated at (or next to) a pole."""


class BranchPointHit(DomainError):
    """The elliptic kernel was evaluated at one of its branch points."""


class GuardFailed(QSeriesError):
    """A lemma hypothesis checked before the conclusion did not hold."""


class SamplingError(QSeriesError):
    """No admissible sample could be drawn within the retry budget."""
