"""Closed forms of the classical summations.

These are the right-hand sides of the q-Gauss sum, Ramanujan's 1psi1 sum,
Bailey's 6psi6 sum and the x = 1 evaluation of psi_star.  They serve as
independent oracles for the series module.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .errors import DivisionByZero, DomainError, NotConverged
from .qcore import QContext, q_euler, qpoch_inf, qpoch_multi, theta, theta_prod
from .series import SeriesSpec, WSpec, w_eval, w_star


class SummationName(str, Enum):
    QGauss = "QGauss"
    OnePsiOne = "OnePsiOne"
    SixPsiSix = "SixPsiSix"
    X1Factorization = "X1Factorization"


@dataclass(frozen=True)
class SummationCase:
    """One sampled instance of a classical summation."""

    name: SummationName
    params: tuple[complex, ...]
    point: complex


def q_gauss(a: complex, b: complex, x: complex, ctx: QContext) -> tuple[complex, complex]:
    """Both sides of the q-Gauss sum ``sum (a,b)_n/(q,abx)_n x^n = (ax,bx)_inf/(x,abx)_inf``.

    Returns
    -------
    (lhs, rhs)
        ``lhs`` is the unilateral sum truncated under the context contract.
    """
    a, b, x = complex(a), complex(b), complex(x)
    if abs(x) >= 1.0:
        raise DomainError(f"q-Gauss needs |x| < 1, got {abs(x):.6g}")
    q = ctx.q
    abx = a * b * x
    term = 1.0 + 0.0j
    total = term
    qn = 1.0 + 0.0j
    small = 0
    n = 0
    while n < ctx.max_terms:
        den = (1.0 - q * qn) * (1.0 - abx * qn)
        if den == 0:
            raise DivisionByZero(f"q-Gauss: denominator vanishes at n = {n + 1}")
        term = term * (1.0 - a * qn) * (1.0 - b * qn) / den * x
        total += term
        n += 1
        qn *= q
        if abs(term) < ctx.eps * (1.0 + abs(total)):
            small += 1
            if small >= ctx.consec_small:
                break
        else:
            small = 0
    else:
        raise NotConverged(f"q-Gauss sum did not converge within {ctx.max_terms} terms")
    rhs = qpoch_multi([a * x, b * x], None, ctx) / qpoch_multi([x, abx], None, ctx)
    return total, rhs


def one_psi_one_rhs(a: complex, b: complex, x: complex, ctx: QContext) -> complex:
    """Closed form ``(b/a)_inf theta(ax) / (x, b/(ax), b, q/a)_inf`` of the 1psi1 sum."""
    a, b, x = complex(a), complex(b), complex(x)
    if a == 0:
        raise DomainError("1psi1 needs a != 0")
    if not abs(b / a) < abs(x) < 1.0:
        raise DomainError(f"1psi1 needs |b/a| < |x| < 1, got |b/a| = {abs(b / a):.6g}, |x| = {abs(x):.6g}")
    q = ctx.q
    den = qpoch_multi([x, b / (a * x), b, q / a], None, ctx)
    if den == 0:
        raise DivisionByZero("1psi1 closed form has a vanishing denominator")
    return qpoch_inf(b / a, ctx) * theta(a * x, ctx) / den


def six_psi_six_rhs(a: Sequence[complex], y: complex, ctx: QContext) -> complex:
    """Product side of Bailey's 6psi6 sum."""
    a = [complex(v) for v in a]
    q = ctx.q
    y = complex(y)
    pairs = [q / (a[i] * a[j]) for i in range(4) for j in range(i + 1, 4)]
    den_args = [q / (aj * y) for aj in a] + [q * y / aj for aj in a]
    den_args.append(q / (a[0] * a[1] * a[2] * a[3]))
    den = qpoch_multi(den_args, None, ctx)
    if den == 0:
        raise DivisionByZero(f"6psi6 closed form has a vanishing denominator at y = {y}")
    return qpoch_multi(pairs, None, ctx) * theta(y * y, ctx) / den


def six_psi_six(a: Sequence[complex], y: complex, ctx: QContext) -> tuple[complex, complex]:
    """Both sides of Bailey's 6psi6 sum (series and product)."""
    a = [complex(v) for v in a]
    if len(a) != 4:
        raise DomainError(f"6psi6 takes four parameters, got {len(a)}")
    prod = a[0] * a[1] * a[2] * a[3]
    if not abs(prod) > abs(ctx.q) * (1.0 + ctx.margin):
        raise DomainError(f"6psi6 needs |a1 a2 a3 a4| > |q|, got {abs(prod):.6g}")
    if complex(y) == 0:
        raise DomainError("6psi6 needs y != 0")
    lhs = w_eval(WSpec(a), y, ctx).value
    return lhs, six_psi_six_rhs(a, y, ctx)


def six_psi_six_scale(a: Sequence[complex], y: complex, ctx: QContext) -> float:
    """Largest term modulus of the 6psi6 series, the scale for zero tests."""
    return w_eval(WSpec(a), y, ctx).max_term


def psi_star_x1(spec: SeriesSpec, y: complex, ctx: QContext) -> complex:
    """``psi_star(1, y) = (B)_inf / (q)_inf^(r-1) * prod_j theta(a_j y)``, ``B = prod b / prod a``."""
    y = complex(y)
    if y == 0:
        raise DomainError("psi_star_x1 needs y != 0")
    pre = qpoch_inf(spec.ratio, ctx) / q_euler(ctx) ** (spec.r - 1)
    return pre * theta_prod((aj * y for aj in spec.a), ctx)


def w6_star_product(a: Sequence[complex], y: complex, ctx: QContext) -> complex:
    """``_6W_6^*(y) = (q/(a_i a_j))_inf theta(y^2)`` over the six pairs ``i < j``."""
    a = [complex(v) for v in a]
    if len(a) != 4:
        raise DomainError(f"_6W_6 takes four parameters, got {len(a)}")
    q = ctx.q
    pairs = [q / (a[i] * a[j]) for i in range(4) for j in range(i + 1, 4)]
    y = complex(y)
    return qpoch_multi(pairs, None, ctx) * theta(y * y, ctx)


def w5_star_product(a: Sequence[complex], y: complex, ctx: QContext) -> complex:
    """``_5W_5^*(y) = (sqrt(q)/a_i, q/(a_i a_j))_inf / (q)_inf^2 * theta(y) theta(-y) theta(-y sqrt q)``."""
    a = [complex(v) for v in a]
    if len(a) != 3:
        raise DomainError(f"_5W_5 takes three parameters, got {len(a)}")
    q = ctx.q
    sq = ctx.sqrt_q
    y = complex(y)
    args = [sq / v for v in a] + [q / (a[i] * a[j]) for i in range(3) for j in range(i + 1, 3)]
    pre = qpoch_multi(args, None, ctx) / q_euler(ctx) ** 2
    return pre * theta(y, ctx) * theta(-y, ctx) * theta(-y * sq, ctx)


def sqrt_q_reduction(a: Sequence[complex], y: complex, ctx: QContext) -> tuple[complex, complex]:
    """Both sides of ``W_r^*(y)|_{a_(r-2) = sqrt q} = theta(y sqrt q)/(q)_inf W_(r-1)^*(y)``.

    ``a`` holds ``a_1..a_(r-3)``; the last parameter is set to ``sqrt q``.
    """
    a = [complex(v) for v in a]
    y = complex(y)
    lhs = w_star(WSpec(a + [ctx.sqrt_q]), y, ctx)
    rhs = theta(y * ctx.sqrt_q, ctx) / q_euler(ctx) * w_star(WSpec(a), y, ctx)
    return lhs, rhs


__all__ = [
    "SummationCase",
    "SummationName",
    "one_psi_one_rhs",
    "psi_star_x1",
    "q_gauss",
    "six_psi_six",
    "six_psi_six_rhs",
    "six_psi_six_scale",
    "sqrt_q_reduction",
    "w5_star_product",
    "w6_star_product",
]
