"""Spaces of theta functions as testable objects.

``Theta_n(c)`` holds the analytic ``f`` on the punctured plane with
``f(qx) = (-1)^n f(x) / (c x^n)``.  ``Omega_2n(c)`` is the subspace of
products of ``n`` members of ``Theta_2(c)``; its members satisfy
``f(x) = f(q/(cx))``.  Everything here returns residuals or basis values so
that the structural lemmas can be checked numerically.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateNodes, DomainError
from .qcore import QContext, theta
from .series import SeriesSpec, WSpec, psi_star_eval, w_star_eval

DEGENERATE = 1e-8


@dataclass(frozen=True)
class ThetaSpaceTag:
    """Degree ``n`` and multiplier ``c`` of ``Theta_n(c)``."""

    n: int
    c: complex

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", complex(self.c))
        if self.c == 0:
            raise DomainError("Theta_n(c) needs c != 0")


@dataclass(frozen=True)
class SampledFunction:
    """A callable on the punctured plane with a label for reports.

    ``eval`` must be reentrant; the harness may call it from several threads.
    """

    eval: Callable[[complex], complex]
    label: str = ""

    def __call__(self, x: complex) -> complex:
        return complex(self.eval(complex(x)))


def det(m: Sequence[Sequence[complex]]) -> complex:
    """Determinant by cofactor expansion along the first row (small sizes only)."""
    n = len(m)
    if n == 0:
        return 1.0 + 0.0j
    if n == 1:
        return complex(m[0][0])
    if n == 2:
        return complex(m[0][0] * m[1][1] - m[0][1] * m[1][0])
    total = 0.0 + 0.0j
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in m[1:])]
        sign = -1.0 if j % 2 else 1.0
        total += sign * m[0][j] * det(minor)
    return total


def det_condition(m: Sequence[Sequence[complex]]) -> float:
    """Sum of the moduli of the expansion terms of ``det(m)`` over ``|det(m)|``.

    Near 1 when no cancellation takes place; ``inf`` for a singular matrix.
    """
    n = len(m)
    total = 0.0
    for perm in itertools.permutations(range(n)):
        term = 1.0
        for i, j in enumerate(perm):
            term *= abs(m[i][j])
        total += term
    d = abs(det(m))
    return total / d if d else math.inf


def theta_space_residual(f: SampledFunction, tag: ThetaSpaceTag, xs: Sequence[complex], ctx: QContext) -> float:
    """Largest relative defect of ``f(qx) c x^n = (-1)^n f(x)`` over ``xs``."""
    q = ctx.q
    sign = -1.0 if tag.n % 2 else 1.0
    worst = 0.0
    for x in xs:
        x = complex(x)
        if x == 0:
            raise DomainError("membership residual needs x != 0")
        fx = f(x)
        fqx = f(q * x)
        num = abs(fqx * tag.c * x**tag.n - sign * fx)
        # both sides carry the factor c x^n; normalize on the same footing
        den = abs(fx) + abs(fqx * tag.c * x**tag.n) + ctx.eps
        worst = max(worst, num / den)
    return worst


def _check_den(value: complex, what: str) -> complex:
    if abs(value) < DEGENERATE:
        raise DegenerateNodes(f"{what} is {abs(value):.3g}, below {DEGENERATE}")
    return value


def vartheta_basis(j: int, zs: Sequence[complex], c: complex, x: complex, ctx: QContext) -> complex:
    """Cardinal basis of ``Theta_n(c)`` for the nodes ``zs`` (``j`` counts from 0).

    ``theta(c Z x / z_j) / theta(c Z) * prod_{k != j} theta(x/z_k) / theta(z_j/z_k)``
    with ``Z = z_1 ... z_n``; satisfies ``vartheta_j(z_k) = delta_jk``.
    """
    zs = [complex(z) for z in zs]
    c = complex(c)
    x = complex(x)
    zprod = math.prod(zs) if zs else 1.0
    value = theta(c * zprod * x / zs[j], ctx) / _check_den(theta(c * zprod, ctx), "theta(c z_1...z_n)")
    for k, zk in enumerate(zs):
        if k == j:
            continue
        value *= theta(x / zk, ctx) / _check_den(theta(zs[j] / zk, ctx), f"theta(z_{j}/z_{k})")
    return value


def theta_expansion_residual(f: SampledFunction, c: complex, zs: Sequence[complex], y: complex, ctx: QContext) -> float:
    """Defect of ``f(y) = sum_j f(z_j) vartheta_j(y)`` for ``f`` in ``Theta_n(c)``, ``n = len(zs)``."""
    terms = [f(z) * vartheta_basis(j, zs, c, y, ctx) for j, z in enumerate(zs)]
    lhs = f(y)
    scale = abs(lhs) + sum(abs(t) for t in terms)
    return abs(lhs - sum(terms)) / scale if scale else 0.0


def slater_general_check(spec: SeriesSpec, x: complex, y: complex, zs: Sequence[complex], ctx: QContext) -> float:
    """Residual of the expansion of ``psi_star(x, .)`` over ``r`` nodes.

    The right side is
    ``sum_j psi_star(x, z_j) theta(a z x y / z_j) / theta(a z x) prod_{k != j} theta(y/z_k)/theta(z_j/z_k)``
    with ``a z = prod_j a_j z_j``; the defect is divided by the sum of the
    moduli of all terms.
    """
    if len(zs) != spec.r:
        raise DomainError(f"need {spec.r} nodes, got {len(zs)}")
    c = spec.a_prod * complex(x)
    lhs = psi_star_eval(spec, x, y, ctx)
    terms = []
    scale = lhs.max_term + abs(lhs.value)
    for j, z in enumerate(zs):
        pz = psi_star_eval(spec, x, z, ctx)
        b = vartheta_basis(j, zs, c, y, ctx)
        terms.append(pz.value * b)
        scale += abs(pz.value * b)
    return abs(lhs.value - sum(terms)) / scale


def omega_basis(j: int, zs: Sequence[complex], c: complex, x: complex, ctx: QContext) -> complex:
    """Cardinal basis of ``Omega_2n(c)`` on ``n + 1`` nodes (``j`` counts from 0).

    ``prod_{k != j} theta(x/z_k) theta(c z_k x) / (theta(z_j/z_k) theta(c z_j z_k))``.
    """
    zs = [complex(z) for z in zs]
    c = complex(c)
    x = complex(x)
    value = 1.0 + 0.0j
    for k, zk in enumerate(zs):
        if k == j:
            continue
        den = theta(zs[j] / zk, ctx) * theta(c * zs[j] * zk, ctx)
        value *= theta(x / zk, ctx) * theta(c * zk * x, ctx) / _check_den(den, f"omega denominator ({j},{k})")
    return value


def omega_expansion_residual(f: SampledFunction, c: complex, zs: Sequence[complex], x: complex, ctx: QContext) -> float:
    """Defect of ``f(x) = sum_j f(z_j) omega_j(x)`` for ``f`` in ``Omega_2n(c)``."""
    terms = [f(z) * omega_basis(j, zs, c, x, ctx) for j, z in enumerate(zs)]
    lhs = f(x)
    scale = abs(lhs) + sum(abs(t) for t in terms)
    return abs(lhs - sum(terms)) / scale if scale else 0.0


def omega_product(g: SampledFunction, c: complex, ctx: QContext) -> SampledFunction:
    """``x -> g(x) g(q/(cx))``, which lies in ``Omega_2n(c)`` whenever ``g`` is in some ``Theta_n``."""
    q = ctx.q
    c = complex(c)
    return SampledFunction(lambda x: g(x) * g(q / (c * x)), f"{g.label}*{g.label}(q/cx)")


def reflection_residual(f: SampledFunction, c: complex, xs: Sequence[complex], ctx: QContext, sign: int = 1) -> float:
    """Largest defect of ``f(x) = sign * f(q/(cx))`` over ``xs``."""
    q = ctx.q
    c = complex(c)
    worst = 0.0
    for x in xs:
        x = complex(x)
        a = f(x)
        b = f(q / (c * x))
        den = abs(a) + abs(b) + ctx.eps
        worst = max(worst, abs(a - sign * b) / den)
    return worst


def sign_lemma_function(g: SampledFunction, c: complex, ctx: QContext) -> SampledFunction:
    """``x -> x theta(c x^2) g(x)``; odd under ``x -> q/(cx)`` when ``g`` is in ``Omega(c)``."""
    c = complex(c)
    return SampledFunction(lambda x: x * theta(c * x * x, ctx) * g(x), f"x theta(cx^2) {g.label}")


def _slater_vwp_weight(wspec: WSpec, y: complex, ctx: QContext):
    ws = w_star_eval(wspec, y, ctx)
    w = theta(complex(y) ** 2, ctx)
    if wspec.r % 2:
        w = w / theta(complex(y) * ctx.sqrt_q, ctx)
    return ws.value / w, ws.max_term / abs(w)


def slater_vwp_check(wspec: WSpec, y: complex, zs: Sequence[complex], ctx: QContext) -> float:
    """Residual of the Omega expansion of ``W_star / theta(y^2)`` (even ``r``) or
    ``theta(y sqrt q) W_star / theta(y^2)`` (odd ``r``) over its nodes.

    Needs ``(r - 4)/2`` nodes for even ``r >= 6`` and ``(r - 3)/2`` for odd ``r >= 5``.
    """
    r = wspec.r
    if r < 5:
        raise DomainError(f"the VWP expansion needs r >= 5, got {r}")
    need = (r - 4) // 2 if r % 2 == 0 else (r - 3) // 2
    if len(zs) != need:
        raise DomainError(f"r = {r} needs {need} nodes, got {len(zs)}")
    lhs, scale = _slater_vwp_weight(wspec, y, ctx)
    scale += abs(lhs)
    total = 0.0 + 0.0j
    for j, z in enumerate(zs):
        vz, sz = _slater_vwp_weight(wspec, z, ctx)
        b = omega_basis(j, zs, ctx.q, y, ctx)
        total += vz * b
        scale += sz * abs(b)
    return abs(lhs - total) / scale


def delta_n(xs: Sequence[complex], ctx: QContext) -> complex:
    """``prod_{j<k} x_k theta(x_j / x_k)``; equal to 1 for a single point."""
    xs = [complex(x) for x in xs]
    if any(x == 0 for x in xs):
        raise DomainError("delta_n needs non-zero points")
    value = 1.0 + 0.0j
    for k in range(len(xs)):
        for j in range(k):
            value *= xs[k] * theta(xs[j] / xs[k], ctx)
    return value


def theta_det_value(fs: Sequence[SampledFunction], xs: Sequence[complex], c: complex, ctx: QContext) -> complex:
    """``det(f_i(x_j)) / (Delta_n(x) theta(c x_1 ... x_n))``."""
    xs = [complex(x) for x in xs]
    if len(fs) != len(xs):
        raise DomainError("need as many functions as nodes")
    m = [[f(x) for x in xs] for f in fs]
    den = delta_n(xs, ctx) * theta(complex(c) * math.prod(xs), ctx)
    _check_den(den, "Delta_n(x) theta(c prod x)")
    return det(m) / den


def theta_det_ratio(
    fs: Sequence[SampledFunction], xss: Sequence[Sequence[complex]], c: complex, ctx: QContext
) -> float:
    """Relative difference of the determinant quotient at two node lists.

    Near zero when the quotient is the constant promised for members of ``Theta_n(c)``.
    """
    if len(xss) != 2:
        raise DomainError("need exactly two node lists")
    r0 = theta_det_value(fs, xss[0], c, ctx)
    r1 = theta_det_value(fs, xss[1], c, ctx)
    return abs(r0 - r1) / (abs(r0) + ctx.eps)


def singular_value_ratio(fs: Sequence[SampledFunction], xs: Sequence[complex]) -> float:
    """Smallest over largest singular value of the sample matrix ``f_i(x_j)``."""
    m = np.array([[f(x) for x in xs] for f in fs], dtype=complex)
    sv = np.linalg.svd(m, compute_uv=False)
    return float(sv[-1] / sv[0])


def theta_product_function(alphas: Sequence[complex], ctx: QContext, scale: complex = 1.0) -> SampledFunction:
    """``x -> scale * prod theta(alpha_i x)``, a member of ``Theta_n(prod alpha)``."""
    alphas = [complex(a) for a in alphas]
    scale = complex(scale)

    def f(x: complex) -> complex:
        v = scale
        for a in alphas:
            v *= theta(a * x, ctx)
        return v

    return SampledFunction(f, "prod theta(alpha x)")


__all__ = [
    "SampledFunction",
    "ThetaSpaceTag",
    "delta_n",
    "det",
    "det_condition",
    "omega_basis",
    "omega_expansion_residual",
    "omega_product",
    "reflection_residual",
    "sign_lemma_function",
    "singular_value_ratio",
    "slater_general_check",
    "slater_vwp_check",
    "theta_det_ratio",
    "theta_det_value",
    "theta_expansion_residual",
    "theta_product_function",
    "theta_space_residual",
    "vartheta_basis",
]
