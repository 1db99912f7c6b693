"""q-Wronskians of the solutions ``theta(x/y) psi_star(x, y)``.

For ``r = 2`` the Wronskian factors completely; for general ``r`` the
modified determinant ``det(y_i^(j-1) psi_star(q^(j-1) x, y_i))`` divided by
its theta and Pochhammer factors is a constant (Gustafson's ``A_r`` sum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateNodes, DomainError, GuardFailed
from .factorize import A_given_rho, find_rhos_raw, psi_star_any_y
from .qcore import QContext, q_euler, qpoch, qpoch_multi, theta
from .series import SeriesSpec, psi_star_eval
from .thetaspaces import SampledFunction, delta_n, det

GUARD_TOL = 1e-9


def _poly(roots_scaled: Sequence[complex]) -> np.ndarray:
    """Coefficients (ascending in ``y``) of ``prod (1 - t_j y)``."""
    c = np.array([1.0 + 0.0j])
    for t in roots_scaled:
        c = np.append(c, 0.0) - np.append(0.0, complex(t) * c)
    return c


@dataclass(frozen=True)
class LambdaCoeffs:
    """``lambda_j(x) = alpha_j x - beta_j`` from
    ``x prod (1 - a_j y) - prod (1 - b_j y / q) = sum_j lambda_j(x) y^j``."""

    alpha: tuple[complex, ...]
    beta: tuple[complex, ...]
    x: complex

    def at(self, x: complex) -> list[complex]:
        return [al * complex(x) - be for al, be in zip(self.alpha, self.beta)]

    @property
    def values(self) -> list[complex]:
        return self.at(self.x)

    @property
    def lambdas(self) -> list[Callable[[complex], complex]]:
        return [lambda x, al=al, be=be: al * complex(x) - be for al, be in zip(self.alpha, self.beta)]

    def polynomial(self, y: complex) -> complex:
        y = complex(y)
        return sum(v * y**j for j, v in enumerate(self.values))


def lambda_coeffs(spec: SeriesSpec, x: complex, q: complex | QContext | None = None) -> LambdaCoeffs:
    """Expansion coefficients of ``x prod(1 - a_j y) - prod(1 - b_j y / q)``.

    ``q`` defaults to the base of a context passed in its place, or must be
    given; the ``b`` side depends on it.
    """
    if isinstance(q, QContext):
        q = q.q
    if q is None:
        raise DomainError("lambda_coeffs needs the base q")
    q = complex(q)
    alpha = _poly(spec.a)
    beta = _poly([bj / q for bj in spec.b])
    return LambdaCoeffs(tuple(complex(v) for v in alpha), tuple(complex(v) for v in beta), complex(x))


def _relation_coeffs(spec: SeriesSpec, x: complex, ctx: QContext) -> list[complex]:
    """``lambda_j(x) (x)_j / (B/(x q^j))_j`` for ``j = 0..r``."""
    q = ctx.q
    lam = lambda_coeffs(spec, x, q).values
    big_b = spec.ratio
    out = []
    for j, lj in enumerate(lam):
        den = qpoch(big_b / (x * q**j), j, ctx)
        if den == 0:
            raise DomainError(f"(B/(x q^{j}))_{j} vanishes")
        out.append(lj * qpoch(x, j, ctx) / den)
    return out


def psi_star_linear_relation_residual(spec: SeriesSpec, x: complex, y: complex, ctx: QContext) -> float:
    """``|sum_j y^j lambda_j (x)_j / (B/(x q^j))_j psi_star(x q^j, y)|`` over the sum of moduli."""
    x = complex(x)
    y = complex(y)
    q = ctx.q
    coeffs = _relation_coeffs(spec, x, ctx)
    total = 0.0 + 0.0j
    scale = 0.0
    for j, cj in enumerate(coeffs):
        t = y**j * cj * psi_star_any_y(spec, x * q**j, y, ctx).value
        total += t
        scale += abs(t)
    return abs(total) / scale


def recurrence_coeffs(spec: SeriesSpec, ctx: QContext) -> list[Callable[[complex], complex]]:
    """``c_j(x) = (-1)^j q^(j(j-1)/2) x^j lambda_j (x)_j / (B/(x q^j))_j``: the q-difference
    equation satisfied by ``theta(x/y) psi_star(x, y)`` for every ``y``."""
    q = ctx.q

    def make(j: int) -> Callable[[complex], complex]:
        def c(x: complex) -> complex:
            x = complex(x)
            return (-1) ** j * q ** (j * (j - 1) // 2) * x**j * _relation_coeffs(spec, x, ctx)[j]

        return c

    return [make(j) for j in range(spec.r + 1)]


def solution_function(spec: SeriesSpec, y: complex, ctx: QContext) -> SampledFunction:
    """``x -> theta(x/y) psi_star(x, y)``."""
    y = complex(y)
    return SampledFunction(lambda x: theta(complex(x) / y, ctx) * psi_star_any_y(spec, x, y, ctx).value,
                           f"theta(x/{y}) psi_star(x, {y})")


def wronskian2(spec2: SeriesSpec, x: complex, y: complex, z: complex, ctx: QContext) -> complex:
    """``theta(qx/y) P(qx,y) theta(x/z) P(x,z) - theta(x/y) P(x,y) theta(qx/z) P(qx,z)``, ``P = psi_star``."""
    if spec2.r != 2:
        raise DomainError(f"wronskian2 needs r = 2, got r = {spec2.r}")
    t1, t2 = wronskian2_terms(spec2, x, y, z, ctx)
    return t1 - t2


def wronskian2_terms(spec2: SeriesSpec, x: complex, y: complex, z: complex, ctx: QContext) -> tuple[complex, complex]:
    """The two products whose difference is :func:`wronskian2`."""
    x, y, z = complex(x), complex(y), complex(z)
    q = ctx.q

    def p(u: complex, v: complex) -> complex:
        return psi_star_any_y(spec2, u, v, ctx).value

    return (theta(q * x / y, ctx) * p(q * x, y) * theta(x / z, ctx) * p(x, z),
            theta(x / y, ctx) * p(x, y) * theta(q * x / z, ctx) * p(q * x, z))


def _wronskian_products(spec2: SeriesSpec, x: complex, ctx: QContext) -> complex:
    q = ctx.q
    (a1, a2), (b1, b2) = spec2.a, spec2.b
    return qpoch_multi([b1 / a1, b1 / a2, b2 / a1, b2 / a2, q * x, spec2.ratio / x], None, ctx)


def wronskian2_closed_form(spec2: SeriesSpec, x: complex, y: complex, z: complex, ctx: QContext) -> complex:
    """``(z/x) (b_i/a_j, qx, B/x)_inf theta(y/z) theta(x/y) theta(x/z) theta(a1 a2 x y z)``."""
    if spec2.r != 2:
        raise DomainError(f"wronskian2_closed_form needs r = 2, got r = {spec2.r}")
    x, y, z = complex(x), complex(y), complex(z)
    c = spec2.a_prod * x
    return (z / x * _wronskian_products(spec2, x, ctx) * theta(y / z, ctx) * theta(x / y, ctx)
            * theta(x / z, ctx) * theta(c * y * z, ctx))


def wronskian2_residual(spec2: SeriesSpec, x: complex, y: complex, z: complex, ctx: QContext) -> float:
    """Relative gap between :func:`wronskian2` and its closed form."""
    w = wronskian2(spec2, x, y, z, ctx)
    c = wronskian2_closed_form(spec2, x, y, z, ctx)
    return abs(w - c) / max(abs(w), abs(c))


def bracket_residual(spec2: SeriesSpec, x: complex, y: complex, z: complex, ctx: QContext) -> float:
    """``z P(x,y) P(qx,z) - y P(qx,y) P(x,z) = z (...)_inf theta(y/z) theta(a1 a2 x y z)``."""
    x, y, z = complex(x), complex(y), complex(z)
    q = ctx.q

    def p(u: complex, v: complex) -> complex:
        return psi_star_any_y(spec2, u, v, ctx).value

    t1 = z * p(x, y) * p(q * x, z)
    t2 = y * p(q * x, y) * p(x, z)
    rhs = z * _wronskian_products(spec2, x, ctx) * theta(y / z, ctx) * theta(spec2.a_prod * x * y * z, ctx)
    return abs(t1 - t2 - rhs) / max(abs(t1), abs(t2), abs(rhs))


def swap_residual(spec2: SeriesSpec, x: complex, y: complex, z: complex, ctx: QContext) -> float:
    """``W(x,y,z) + W(x,z,y)`` over the larger term.

    Swapping the columns negates the determinant; in the closed form the
    prefactor ``z theta(y/z)`` turns into ``y theta(z/y) = -z theta(y/z)``.
    """
    w1 = wronskian2(spec2, x, y, z, ctx)
    w2 = wronskian2(spec2, x, z, y, ctx)
    target = -w2
    return abs(w1 - target) / max(abs(w1), abs(target))


def aa_product_rhs(spec2: SeriesSpec, x: complex, r0: complex, r1: complex, ctx: QContext) -> complex:
    """``-a1 a2 x rho(x) rho(qx) (b_i/a_j, qx, B/x)_inf / (theta(rho(x)/rho(qx)) theta(a1 a2 x rho(x) rho(qx)))``."""
    c = spec2.a_prod * complex(x)
    return (-c * r0 * r1 * _wronskian_products(spec2, x, ctx)
            / (theta(r0 / r1, ctx) * theta(c * r0 * r1, ctx)))


def aa_relation_residual(spec2: SeriesSpec, x: complex, ctx: QContext) -> float:
    """``A(x) A(qx)`` from the factorization against the Wronskian-derived formula."""
    x = complex(x)
    q = ctx.q
    r0 = find_rhos_raw(spec2, x, ctx)[0]
    r1 = find_rhos_raw(spec2, q * x, ctx)[0]
    lhs = A_given_rho(spec2, x, r0, ctx) * A_given_rho(spec2, q * x, r1, ctx)
    rhs = aa_product_rhs(spec2, x, r0, r1, ctx)
    return abs(lhs - rhs) / abs(lhs)


def wronskian_at_zero_residual(spec2: SeriesSpec, x: complex, y: complex, ctx: QContext) -> float:
    """With ``z = rho(x)`` the Wronskian keeps one term; compare it with the
    product of ``A(x) A(qx)`` and the remaining theta factors."""
    x, y = complex(x), complex(y)
    q = ctx.q
    c = spec2.a_prod * x
    r0 = find_rhos_raw(spec2, x, ctx)[0]
    r1 = find_rhos_raw(spec2, q * x, ctx)[0]
    w = wronskian2(spec2, x, y, r0, ctx)
    aa = aa_product_rhs(spec2, x, r0, r1, ctx)
    # only theta(qx/y) P(qx,y) theta(x/z) P(x,z) survives, and P(x, rho) = 0,
    # so W = -theta(x/y) P(x,y) theta(qx/rho) P(qx, rho)
    p_xy = aa / A_given_rho(spec2, q * x, r1, ctx) * theta(y / r0, ctx) * theta(c * y * r0, ctx)
    p_qx_rho = A_given_rho(spec2, q * x, r1, ctx) * theta(r0 / r1, ctx) * theta(q * c * r0 * r1, ctx)
    built = -theta(x / y, ctx) * p_xy * theta(q * x / r0, ctx) * p_qx_rho
    return abs(w - built) / max(abs(w), abs(built))


def weierstrass_residual(spec2: SeriesSpec, x: complex, y: complex, z: complex, ctx: QContext) -> float:
    """The bracket written through ``rho(x), rho(qx)`` against the three-term
    theta identity, with ``A(x) A(qx)`` divided out."""
    t1, t2, rhs = weierstrass_terms(spec2, x, y, z, ctx)
    lhs = t1 - t2
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def weierstrass_terms(spec2: SeriesSpec, x: complex, y: complex, z: complex,
                      ctx: QContext) -> tuple[complex, complex, complex]:
    """``(t1, t2, rhs)`` with ``t1 - t2 = rhs`` the three-term theta identity."""
    x, y, z = complex(x), complex(y), complex(z)
    q = ctx.q
    c = spec2.a_prod * x
    r0 = find_rhos_raw(spec2, x, ctx)[0]
    r1 = find_rhos_raw(spec2, q * x, ctx)[0]
    t1 = z * theta(y / r0, ctx) * theta(c * y * r0, ctx) * theta(z / r1, ctx) * theta(q * c * z * r1, ctx)
    t2 = y * theta(y / r1, ctx) * theta(q * c * y * r1, ctx) * theta(z / r0, ctx) * theta(c * z * r0, ctx)
    rhs = (-z / (c * r0 * r1) * theta(r0 / r1, ctx) * theta(c * r0 * r1, ctx)
           * theta(y / z, ctx) * theta(c * y * z, ctx))
    return t1, t2, rhs


def sqrt_q_remark_residual(spec2: SeriesSpec, x: complex, y: complex, ctx: QContext) -> float:
    """``f(y) = P(x,y) P(qx, y sqrt q) + theta(sqrt q)/(2 sqrt q) (...)_inf theta(a1 a2 x y^2 sqrt q)``
    checked against ``f(y sqrt q) = f(y) / (a1 a2 x y^2 sqrt q)``."""
    x, y = complex(x), complex(y)
    q = ctx.q
    sq = ctx.sqrt_q
    c = spec2.a_prod * x
    const = theta(sq, ctx) / (2.0 * sq) * _wronskian_products(spec2, x, ctx)

    def f(u: complex) -> complex:
        return (psi_star_any_y(spec2, x, u, ctx).value * psi_star_any_y(spec2, q * x, u * sq, ctx).value
                + const * theta(c * u * u * sq, ctx))

    lhs = f(y * sq)
    rhs = f(y) / (c * y * y * sq)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def gustafson_matrix(spec: SeriesSpec, x: complex, ys: Sequence[complex], ctx: QContext) -> list[list[complex]]:
    """``y_i^(j-1) psi_star(q^(j-1) x, y_i)`` as rows."""
    q = ctx.q
    x = complex(x)
    return [[complex(y) ** j * psi_star_eval(spec, q**j * x, complex(y), ctx).value for j in range(spec.r)]
            for y in ys]


def gustafson_ratio(spec: SeriesSpec, x: complex, ys: Sequence[complex], ctx: QContext) -> complex:
    """``det(y_i^(j-1) psi_star(q^(j-1) x, y_i)) / (Delta_r(y) theta(a_1 y_1 ... a_r y_r x)
    prod_{j<r} (x q^j, B/(x q^(j-1)))_inf)``."""
    r = spec.r
    if r > 3:
        raise DomainError(f"gustafson_ratio supports r <= 3, got r = {r}")
    ys = [complex(v) for v in ys]
    if len(ys) != r:
        raise DomainError(f"need {r} nodes, got {len(ys)}")
    x = complex(x)
    q = ctx.q
    m = gustafson_matrix(spec, x, ys, ctx)
    big_b = spec.ratio
    den = delta_n(ys, ctx) * theta(spec.a_prod * math.prod(ys) * x, ctx)
    for j in range(1, r):
        den *= qpoch_multi([x * q**j, big_b / (x * q ** (j - 1))], None, ctx)
    if abs(den) < 1e-300:
        raise DegenerateNodes("the normalizing factor vanishes at these nodes")
    scale = max(abs(v) for row in m for v in row) ** r
    if abs(den) < 1e-12 * scale:
        raise DegenerateNodes(f"normalizing factor {abs(den):.3g} is negligible against the entries")
    return det(m) / den


def gustafson_value(spec: SeriesSpec, ctx: QContext) -> complex:
    """``(q)_inf^(-(r-1)(r-2)/2) prod_{i,j} (b_i/a_j)_inf``."""
    r = spec.r
    pro = qpoch_multi([bi / aj for bi in spec.b for aj in spec.a], None, ctx)
    return pro / q_euler(ctx) ** ((r - 1) * (r - 2) // 2)


def qwronskian_matrix(fs: Sequence[SampledFunction], x: complex, ctx: QContext) -> list[list[complex]]:
    """``f_i(x q^(j-1))`` as rows."""
    n = len(fs)
    q = ctx.q
    x = complex(x)
    return [[f(x * q**j) for j in range(n)] for f in fs]


def qwronskian(fs: Sequence[SampledFunction], x: complex, ctx: QContext) -> complex:
    """``det(f_i(x q^(j-1)))``."""
    return det(qwronskian_matrix(fs, x, ctx))


def qwronskian_step_check(fs: Sequence[SampledFunction], cs: Sequence[Callable[[complex], complex]],
                          x: complex, ctx: QContext) -> float:
    """Residual of ``W(qx) c_n(x) - (-1)^n c_0(x) W(x)`` over the larger term.

    Each ``f`` must first satisfy ``sum_m c_m(x) f(x q^m) = 0`` to ``1e-9``.
    """
    n = len(fs)
    if len(cs) != n + 1:
        raise DomainError(f"{n} functions need {n + 1} coefficients, got {len(cs)}")
    q = ctx.q
    x = complex(x)
    cv = [c(x) for c in cs]
    for i, f in enumerate(fs):
        terms = [cv[m] * f(x * q**m) for m in range(n + 1)]
        scale = sum(abs(t) for t in terms)
        res = abs(sum(terms)) / scale if scale else 0.0
        if res > GUARD_TOL:
            raise GuardFailed(f"function {i} misses the recurrence by {res:.3g}")
    lhs = qwronskian(fs, q * x, ctx) * cv[n]
    rhs = (-1) ** n * cv[0] * qwronskian(fs, x, ctx)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


__all__ = [
    "LambdaCoeffs",
    "aa_product_rhs",
    "aa_relation_residual",
    "bracket_residual",
    "gustafson_matrix",
    "gustafson_ratio",
    "gustafson_value",
    "lambda_coeffs",
    "psi_star_linear_relation_residual",
    "qwronskian",
    "qwronskian_matrix",
    "qwronskian_step_check",
    "recurrence_coeffs",
    "solution_function",
    "sqrt_q_remark_residual",
    "swap_residual",
    "weierstrass_residual",
    "weierstrass_terms",
    "wronskian2",
    "wronskian2_closed_form",
    "wronskian2_residual",
    "wronskian2_terms",
    "wronskian_at_zero_residual",
]
