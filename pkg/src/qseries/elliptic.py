"""The theta-quotient map ``x -> theta(x)^2 / theta(-x)^2`` and its inverse.

The inverse is Jacobi's elliptic integral

    x = exp( 1/(theta(sqrt q) theta(-sqrt q)) * int_0^y du / sqrt(u (1 - k1 u)(1 - k2 u)) )

with ``k1 = theta(sqrt q)^2 / theta(-sqrt q)^2`` and ``k2 = 1 / k1``.  The
substitution ``u = s^2`` removes the endpoint singularity, leaving the smooth
integrand ``2 / sqrt((1 - k1 s^2)(1 - k2 s^2))`` on a path ``0 -> sqrt(y)``.
"""

from __future__ import annotations

import cmath
import functools
from dataclasses import dataclass

import numpy as np

from .errors import BranchPointHit, NearBranchPoint, PoleHit, QuadratureFail
from .qcore import QContext, theta

GL_ORDER = 15
PANEL_TOL = 1e-11
MAX_PANELS = 4096
BRANCH_GAP = 1e-3

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(GL_ORDER)


@dataclass(frozen=True)
class InversionConstants:
    k1: complex
    k2: complex
    norm: complex


@functools.lru_cache(maxsize=64)
def inversion_constants(ctx: QContext) -> InversionConstants:
    """Constants of the inversion integral for the base of ``ctx``."""
    sq = ctx.sqrt_q
    tp = theta(sq, ctx)
    tm = theta(-sq, ctx)
    return InversionConstants(k1=tp * tp / (tm * tm), k2=tm * tm / (tp * tp), norm=tp * tm)


def theta_quotient(x: complex, ctx: QContext) -> complex:
    """``theta(x)^2 / theta(-x)^2``; invariant under ``x -> qx`` and ``x -> q/x``."""
    x = complex(x)
    den = theta(-x, ctx)
    if abs(den) < 1e-10:
        raise PoleHit(f"theta(-x) vanishes at x = {x}")
    num = theta(x, ctx)
    return (num / den) ** 2


def inversion_kernel(u: complex, consts: InversionConstants) -> complex:
    """Principal value of ``1 / sqrt(u (1 - k1 u)(1 - k2 u))``."""
    u = complex(u)
    f1 = 1.0 - consts.k1 * u
    f2 = 1.0 - consts.k2 * u
    if u == 0 or f1 == 0 or f2 == 0:
        raise BranchPointHit(f"kernel evaluated at branch point u = {u}")
    return 1.0 / cmath.sqrt(u * f1 * f2)


def _roots(s: np.ndarray, k1: complex, k2: complex) -> np.ndarray:
    """Principal ``sqrt(1 - k1 s^2) sqrt(1 - k2 s^2)`` at the nodes ``s``."""
    s2 = s * s
    return np.sqrt(1.0 - k1 * s2) * np.sqrt(1.0 - k2 * s2)


def _track(values: np.ndarray, ref: complex) -> np.ndarray:
    # flip each sign so the root moves continuously from ``ref``
    out = values.copy()
    prev = ref
    for i, v in enumerate(out):
        if abs(v + prev) < abs(v - prev):
            v = -v
            out[i] = v
        prev = v
    return out


def _panel(p0: complex, p1: complex, lo: float, hi: float, ref: complex, k1: complex, k2: complex):
    """GL15 value of ``int 2 ds / root(s)`` over ``t in [lo, hi]`` of ``s = p0 + t (p1 - p0)``.

    Returns the value and the tracked root at ``t = hi``.
    """
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = np.append(mid + half * _GL_NODES, hi)
    roots = _track(_roots(p0 + t * (p1 - p0), k1, k2), ref)
    val = complex(half * np.dot(_GL_WEIGHTS, 2.0 * (p1 - p0) / roots[:-1]))
    return val, complex(roots[-1])


def _segment_distance(a: complex, b: complex, p: complex) -> float:
    """Distance from ``p`` to the segment ``[a, b]``."""
    d = b - a
    if d == 0:
        return abs(p - a)
    t = ((p - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(p - a - t * d)


def _path_clear(path: list[complex], consts: InversionConstants) -> bool:
    for k in (consts.k1, consts.k2):
        sb = cmath.sqrt(1.0 / k)
        for p in (sb, -sb):
            for a, b in zip(path[:-1], path[1:]):
                if _segment_distance(a, b, p) < BRANCH_GAP * abs(sb):
                    return False
    return True


def inverse_path(y: complex, consts: InversionConstants) -> list[complex]:
    """Integration path in ``s = sqrt(u)`` from 0 to the principal ``sqrt(y)``.

    The straight segment is used whenever it keeps a relative distance
    ``1e-3`` from the branch points ``+-1/sqrt(k)``; otherwise the path bends
    through a point offset perpendicular to the segment.  Raises
    NearBranchPoint when ``y`` itself is that close to a branch point.
    """
    y = complex(y)
    # the quotient's natural scale is the smaller branch point, not 1
    scale0 = min(abs(consts.k1), abs(consts.k2))
    if abs(y) < BRANCH_GAP * scale0:
        raise NearBranchPoint(f"|y| = {abs(y):.3g} is within relative {BRANCH_GAP} of the branch point 0")
    for k in (consts.k1, consts.k2):
        ub = 1.0 / k
        if abs(y - ub) < BRANCH_GAP * abs(ub):
            raise NearBranchPoint(f"y = {y} is within relative {BRANCH_GAP} of branch point {ub}")
    sy = cmath.sqrt(y)
    for offset in (0.0, 0.5, -0.5, 1.0, -1.0):
        path = [0j, sy * complex(0.5, offset), sy] if offset else [0j, sy]
        if _path_clear(path, consts):
            return path
    raise NearBranchPoint(f"no integration path to y = {y} clears the branch points")


def check_inverse_path(y: complex, consts: InversionConstants) -> None:
    """Raise NearBranchPoint if ``y`` is too close to a branch point."""
    inverse_path(y, consts)


def inverse_integral(y: complex, ctx: QContext) -> complex:
    """``int_0^y du / sqrt(u (1 - k1 u)(1 - k2 u))`` continued along :func:`inverse_path`.

    Substituting ``u = s^2`` leaves ``2 ds / sqrt((1 - k1 s^2)(1 - k2 s^2))``.
    The root starts at +1 for ``s = 0`` and is continued by sign tracking.
    Adaptive 15-point Gauss-Legendre: a panel is accepted once it agrees with
    the sum of its two halves to ``1e-11`` (relative to ``max(1, |panel|)``).
    """
    consts = inversion_constants(ctx)
    path = inverse_path(y, consts)
    k1, k2 = consts.k1, consts.k2
    total = 0.0 + 0.0j
    ref = 1.0 + 0.0j
    panels = 0
    for p0, p1 in zip(path[:-1], path[1:]):
        stack = [(0.0, 1.0)]
        while stack:
            lo, hi = stack.pop()
            mid = 0.5 * (lo + hi)
            whole, _ = _panel(p0, p1, lo, hi, ref, k1, k2)
            left, ref_mid = _panel(p0, p1, lo, mid, ref, k1, k2)
            right, ref_hi = _panel(p0, p1, mid, hi, ref_mid, k1, k2)
            panels += 1
            if abs(left + right - whole) < PANEL_TOL * max(1.0, abs(whole)):
                total += left + right
                ref = ref_hi
                continue
            if panels > MAX_PANELS:
                raise QuadratureFail(f"no convergence after {MAX_PANELS} panel splits for y = {y}")
            stack.append((mid, hi))
            stack.append((lo, mid))
    return total


def jacobi_inverse(y: complex, ctx: QContext) -> complex:
    """A solution ``x`` of ``theta(x)^2 / theta(-x)^2 = y`` on the principal branch.

    Every other solution is ``q^n x`` or ``q^n / x``.
    """
    consts = inversion_constants(ctx)
    return cmath.exp(inverse_integral(y, ctx) / consts.norm)


def solution_set(x0: complex, ctx: QContext, ns=(-1, 0, 1)) -> list[complex]:
    """The solutions ``q^n x0`` and ``q^n / x0`` for the given ``n``."""
    q = ctx.q
    x0 = complex(x0)
    return [q**n * x0 for n in ns] + [q**n / x0 for n in ns]


__all__ = [
    "InversionConstants",
    "check_inverse_path",
    "inverse_integral",
    "inverse_path",
    "inversion_constants",
    "inversion_kernel",
    "jacobi_inverse",
    "solution_set",
    "theta_quotient",
]
