"""Bilateral ``_r psi_r`` and very-well-poised ``_r W_r`` series.

The starred numerators ``psi_star`` and ``w_star`` multiply the series by
the infinite products that carry all of its poles, leaving functions that
are analytic in ``y`` on the punctured plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from ._backend import kernels
from ._pykernels import NOT_CONVERGED, POLE
from .errors import DivisionByZero, DomainError, NotConverged, OutsideAnnulus
from .qcore import QContext, qpoch_inf


def _prod(values) -> complex:
    p = 1.0 + 0.0j
    for v in values:
        p *= v
    return p


@dataclass(frozen=True)
class SeriesSpec:
    """Parameters ``a_1..a_r`` (numerator) and ``b_1..b_r`` (denominator)."""

    a: tuple[complex, ...]
    b: tuple[complex, ...]

    def __init__(self, a: Sequence[complex], b: Sequence[complex]):
        a = tuple(complex(v) for v in a)
        b = tuple(complex(v) for v in b)
        if len(a) != len(b) or not a:
            raise DomainError(f"need len(a) == len(b) >= 1, got {len(a)} and {len(b)}")
        if any(v == 0 for v in a):
            raise DomainError("every a_j must be non-zero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def r(self) -> int:
        return len(self.a)

    @property
    def a_prod(self) -> complex:
        return _prod(self.a)

    @property
    def b_prod(self) -> complex:
        return _prod(self.b)

    @property
    def ratio(self) -> complex:
        """``b_1...b_r / (a_1...a_r)``, the inner radius quotient."""
        return self.b_prod / self.a_prod


@dataclass(frozen=True)
class WSpec:
    """Parameters ``a_1..a_{r-2}`` of a VWP-balanced ``_r W_r`` series."""

    a: tuple[complex, ...]

    def __init__(self, a: Sequence[complex]):
        a = tuple(complex(v) for v in a)
        if not a:
            raise DomainError("need r >= 3, i.e. at least one parameter")
        if any(v == 0 for v in a):
            raise DomainError("every a_j must be non-zero")
        object.__setattr__(self, "a", a)

    @property
    def r(self) -> int:
        return len(self.a) + 2

    def argument(self, ctx: QContext) -> complex:
        """The power series variable ``q^((r-4)/2) / (a_1...a_{r-2})``."""
        return ctx.sqrt_q ** (self.r - 4) / _prod(self.a)


@dataclass(frozen=True)
class Annulus:
    inner: float
    outer: float

    @property
    def empty(self) -> bool:
        return not self.inner < self.outer

    def contains(self, x: complex, margin: float = 0.0) -> bool:
        ax = abs(x)
        return self.inner * (1.0 + margin) <= ax <= self.outer * (1.0 - margin)


@dataclass(frozen=True)
class SeriesValue:
    """A summed series with the largest single-term modulus seen."""

    value: complex
    max_term: float
    terms_used: int


def psi_annulus(spec: SeriesSpec, ctx: QContext | None = None) -> Annulus:
    return Annulus(abs(spec.ratio), 1.0)


def pole_free_band(spec: SeriesSpec, ctx: QContext) -> tuple[float, float]:
    """Moduli ``(lo, hi)`` between the two half-lattices of summand poles in ``y``.

    Poles sit at ``y = q^k / a_j`` (k >= 1) and ``y = q^-m / b_j`` (m >= 0).
    """
    aq = abs(ctx.q)
    lo = max(aq / abs(v) for v in spec.a)
    nz = [abs(v) for v in spec.b if v != 0]
    hi = 1.0 / max(nz) if nz else math.inf
    return lo, hi


def _poch_ratio(num: Sequence[complex], den: Sequence[complex], n: int, q: complex) -> complex:
    """``prod (num)_n / prod (den)_n`` one index at a time, so that large
    negative ``n`` does not underflow the two products separately."""
    value = 1.0 + 0.0j
    if n >= 0:
        for k in range(n):
            qk = q**k
            d = _prod(1.0 - v * qk for v in den)
            if d == 0:
                raise DivisionByZero(f"denominator factor {k} vanishes")
            value *= _prod(1.0 - v * qk for v in num) / d
    else:
        for k in range(1, -n + 1):
            qk = q**-k
            d = _prod(1.0 - v * qk for v in num)
            if d == 0:
                raise DivisionByZero(f"negative-index factor {k} vanishes")
            value *= _prod(1.0 - v * qk for v in den) / d
    return value


def psi_term(spec: SeriesSpec, x: complex, y: complex, n: int, ctx: QContext) -> complex:
    """The n-th summand ``(a y)_n / (b y)_n x^n``."""
    y = complex(y)
    try:
        ratio = _poch_ratio([aj * y for aj in spec.a], [bj * y for bj in spec.b], n, ctx.q)
    except DivisionByZero:
        raise DivisionByZero(f"denominator of term {n} vanishes at y = {y}") from None
    return ratio * complex(x) ** n


def _check_status(status: int, terms: int, what: str) -> None:
    if status == POLE:
        raise DivisionByZero(f"{what}: a summand hit a pole after {terms} terms")
    if status == NOT_CONVERGED:
        raise NotConverged(f"{what}: no convergence within {terms} terms per side")


def psi_eval(spec: SeriesSpec, x: complex, y: complex, ctx: QContext) -> SeriesValue:
    x = complex(x)
    ann = psi_annulus(spec, ctx)
    if ann.empty or not ann.contains(x, ctx.margin):
        raise OutsideAnnulus(
            f"|x| = {abs(x):.6g} not inside ({ann.inner:.6g}, {ann.outer:.6g}) with margin {ctx.margin:.2g}"
        )
    value, max_term, terms, status = kernels.psi_sum(
        spec.a, spec.b, x, y, ctx.q, ctx.eps, ctx.max_terms, ctx.consec_small
    )
    _check_status(status, terms, "psi")
    return SeriesValue(value, max_term, terms)


def psi(spec: SeriesSpec, x: complex, y: complex, ctx: QContext) -> complex:
    """Bilateral ``_r psi_r(x, y)`` inside its annulus of convergence."""
    return psi_eval(spec, x, y, ctx).value


def psi_star_factor(spec: SeriesSpec, x: complex, y: complex, ctx: QContext) -> complex:
    """``(x, B/x)_inf prod_j (q/(a_j y), b_j y)_inf`` with ``B = prod b / prod a``."""
    x = complex(x)
    y = complex(y)
    if y == 0:
        raise DomainError("psi_star needs y != 0")
    q = ctx.q
    args = [x, spec.ratio / x]
    for aj, bj in zip(spec.a, spec.b):
        args.append(q / (aj * y))
        args.append(bj * y)
    return _prod(qpoch_inf(v, ctx) for v in args)


def psi_star_eval(spec: SeriesSpec, x: complex, y: complex, ctx: QContext) -> SeriesValue:
    """``psi_star`` together with the largest normalized term (the cancellation scale)."""
    s = psi_eval(spec, x, y, ctx)
    f = psi_star_factor(spec, x, y, ctx)
    return SeriesValue(s.value * f, s.max_term * abs(f), s.terms_used)


def psi_star(spec: SeriesSpec, x: complex, y: complex, ctx: QContext) -> complex:
    """Analytic numerator of ``_r psi_r``."""
    return psi_star_eval(spec, x, y, ctx).value


def neville_at_zero(ts: Sequence[float], values: Sequence[complex]) -> complex:
    """Value at ``t = 0`` of the interpolating polynomial through ``(ts, values)``."""
    p = [complex(v) for v in values]
    n = len(ts)
    for level in range(1, n):
        for i in range(n - level):
            t_lo, t_hi = ts[i], ts[i + level]
            p[i] = (t_hi * p[i] - t_lo * p[i + 1]) / (t_hi - t_lo)
    return p[0]


def psi_star_limit_one(
    spec: SeriesSpec, y: complex, ctx: QContext, t0: float = 0.05, levels: int = 7
) -> complex:
    """``psi_star(1, y)`` as the limit ``x = 1 - t -> 1`` by polynomial extrapolation.

    Nodes are ``t0 / 2^k``; the smallest must respect the annulus margin.
    """
    ts = [t0 / 2.0**k for k in range(levels)]
    if ts[-1] < ctx.margin:
        raise DomainError(f"smallest node {ts[-1]:.3g} violates the annulus margin {ctx.margin:.3g}")
    values = [psi_star(spec, 1.0 - t, y, ctx) for t in ts]
    return neville_at_zero(ts, values)


def w_term(wspec: WSpec, y: complex, n: int, ctx: QContext) -> complex:
    """The n-th summand of the VWP series."""
    y = complex(y)
    q = ctx.q
    try:
        ratio = _poch_ratio([aj * y for aj in wspec.a], [q * y / aj for aj in wspec.a], n, q)
    except DivisionByZero:
        raise DivisionByZero(f"denominator of term {n} vanishes at y = {y}") from None
    return ratio * (1.0 - y * y * q ** (2 * n)) * wspec.argument(ctx) ** n


def _check_w(wspec: WSpec, y: complex, ctx: QContext) -> complex:
    if complex(y) == 0:
        raise DomainError("the VWP series needs y != 0")
    z = wspec.argument(ctx)
    if abs(z) > 1.0 - ctx.margin:
        raise OutsideAnnulus(
            f"|a_1...a_(r-2)| too small: series argument has modulus {abs(z):.6g}"
        )
    return z


def w_eval(wspec: WSpec, y: complex, ctx: QContext) -> SeriesValue:
    z = _check_w(wspec, y, ctx)
    value, max_term, terms, status = kernels.w_sum(
        wspec.a, y, z, ctx.q, ctx.eps, ctx.max_terms, ctx.consec_small
    )
    _check_status(status, terms, "W series")
    return SeriesValue(value, max_term, terms)


def w_series(wspec: WSpec, y: complex, ctx: QContext) -> complex:
    return w_eval(wspec, y, ctx).value


def w_star_factor(wspec: WSpec, y: complex, ctx: QContext) -> complex:
    y = complex(y)
    q = ctx.q
    args = [wspec.argument(ctx)]
    for aj in wspec.a:
        args.append(q / (aj * y))
        args.append(q * y / aj)
    return _prod(qpoch_inf(v, ctx) for v in args)


def w_star_eval(wspec: WSpec, y: complex, ctx: QContext) -> SeriesValue:
    s = w_eval(wspec, y, ctx)
    f = w_star_factor(wspec, y, ctx)
    return SeriesValue(s.value * f, s.max_term * abs(f), s.terms_used)


def w_star(wspec: WSpec, y: complex, ctx: QContext) -> complex:
    """Analytic numerator of ``_r W_r``."""
    return w_star_eval(wspec, y, ctx).value


def w_pole_free_band(wspec: WSpec, ctx: QContext) -> tuple[float, float]:
    """Moduli between the summand pole lattices ``q^k/a_j`` and ``a_j q^-k``."""
    aq = abs(ctx.q)
    lo = max(aq / abs(v) for v in wspec.a)
    hi = min(abs(v) / aq for v in wspec.a)
    return lo, hi


__all__ = [
    "Annulus",
    "SeriesSpec",
    "SeriesValue",
    "WSpec",
    "neville_at_zero",
    "pole_free_band",
    "psi",
    "psi_annulus",
    "psi_eval",
    "psi_star",
    "psi_star_eval",
    "psi_star_factor",
    "psi_star_limit_one",
    "psi_term",
    "w_eval",
    "w_pole_free_band",
    "w_series",
    "w_star",
    "w_star_eval",
    "w_term",
]
