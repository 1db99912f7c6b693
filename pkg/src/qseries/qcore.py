"""q-Pochhammer symbols and the Jacobi theta function.

All evaluation goes through a :class:`QContext`, which fixes the base ``q``
and the truncation contract for infinite products and bilateral sums.
"""

from __future__ import annotations

import cmath
import os
from dataclasses import dataclass, field
from typing import Iterable

from ._backend import kernels
from .errors import DivisionByZero, DomainError, NotConverged

DEFAULT_EPS = 1e-14
DEFAULT_MAX_TERMS = 200_000
DEFAULT_CONSEC = 4

Q_MAX = 0.9
Q_MIN = 1e-6


def _default_max_terms() -> int:
    env = os.environ.get("QS_MAX_TERMS")
    if env is None:
        return DEFAULT_MAX_TERMS
    return int(env)


@dataclass(frozen=True)
class QContext:
    """Base ``q`` plus the truncation policy used by every evaluation.

    Parameters
    ----------
    q : complex
        The base; ``1e-6 <= |q| <= 0.9``.
    eps : float
        Target relative accuracy of truncated products and sums.
    max_terms : int
        Hard cap on factors (or terms per direction).  ``QS_MAX_TERMS``
        overrides the default.
    consec_small : int
        Number of consecutive negligible factors/terms required to stop.
    """

    q: complex
    eps: float = DEFAULT_EPS
    max_terms: int = field(default_factory=_default_max_terms)
    consec_small: int = DEFAULT_CONSEC

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", complex(self.q))
        aq = abs(self.q)
        if not 0.0 < aq < 1.0:
            raise DomainError(f"need 0 < |q| < 1, got |q| = {aq}")
        if aq > Q_MAX or aq < Q_MIN:
            raise DomainError(f"|q| = {aq:.3g} outside the supported band [{Q_MIN}, {Q_MAX}]")
        if not 0.0 < self.eps < 1e-3:
            raise DomainError(f"need 0 < eps < 1e-3, got {self.eps}")
        if self.max_terms < 64:
            raise DomainError(f"max_terms must be >= 64, got {self.max_terms}")
        if self.consec_small < 2:
            raise DomainError(f"consec_small must be >= 2, got {self.consec_small}")

    @property
    def sqrt_q(self) -> complex:
        """Principal square root of ``q``; used wherever ``q^(1/2)`` appears."""
        return cmath.sqrt(self.q)

    @property
    def margin(self) -> float:
        """Relative annulus margin ``eps**0.25``."""
        return self.eps ** 0.25

    def with_q(self, q: complex) -> "QContext":
        return QContext(q, self.eps, self.max_terms, self.consec_small)


@dataclass(frozen=True)
class TruncationOutcome:
    value: complex
    terms_used: int
    converged: bool

    def unwrap(self, what: str = "product") -> complex:
        if not self.converged:
            raise NotConverged(f"{what} did not converge within {self.terms_used} terms")
        return self.value


def qpoch(x: complex, n: int, ctx: QContext) -> complex:
    """Finite symbol ``(x)_n`` for any integer ``n``.

    For ``n < 0`` this is ``1 / prod_{m=n}^{-1} (1 - x q^m)``.
    """
    x = complex(x)
    q = ctx.q
    if n >= 0:
        prod = 1.0 + 0.0j
        t = x
        for _ in range(n):
            prod *= 1.0 - t
            t *= q
        return prod
    prod = 1.0 + 0.0j
    t = x / q
    for m in range(-1, n - 1, -1):
        f = 1.0 - t
        if f == 0:
            raise DivisionByZero(f"(x)_{n}: factor 1 - x q^{m} vanishes for x = {x}")
        prod *= f
        t /= q
    return 1.0 / prod


def qpoch_inf_outcome(x: complex, ctx: QContext) -> TruncationOutcome:
    value, terms, conv = kernels.qpoch_inf(x, ctx.q, ctx.eps, ctx.max_terms, ctx.consec_small)
    return TruncationOutcome(value, terms, conv)


def qpoch_inf(x: complex, ctx: QContext) -> complex:
    """Infinite symbol ``(x)_inf``, truncated under the context contract."""
    return qpoch_inf_outcome(x, ctx).unwrap("(x)_inf")


def qpoch_multi(xs: Iterable[complex], n: int | None, ctx: QContext) -> complex:
    """``(x_1, ..., x_m)_n``; ``n=None`` means ``n = infinity``."""
    prod = 1.0 + 0.0j
    for x in xs:
        prod *= qpoch_inf(x, ctx) if n is None else qpoch(x, n, ctx)
    return prod


def theta(x: complex, ctx: QContext) -> complex:
    """Jacobi theta function ``(x, q/x, q)_inf``."""
    x = complex(x)
    if x == 0:
        raise DomainError("theta is undefined at x = 0")
    value, terms, conv = kernels.theta(x, ctx.q, ctx.eps, ctx.max_terms, ctx.consec_small)
    if not conv:
        raise NotConverged(f"theta({x}) did not converge within {terms} factors")
    return value


def theta_prod(xs: Iterable[complex], ctx: QContext) -> complex:
    prod = 1.0 + 0.0j
    for x in xs:
        prod *= theta(x, ctx)
    return prod


def q_euler(ctx: QContext) -> complex:
    """``(q)_inf``."""
    return qpoch_inf(ctx.q, ctx)
