"""Numerical factorization ``psi_star(x, y) = A(x) prod_j theta(y / rho_j(x))``.

The zeros in ``y`` are located by an argument-principle count followed by
seeded Newton iterations; ``A`` is read off at probe points.  For the
``2psi2`` series this module also checks the relations between ``A`` and
``rho``, the functional equation of ``rho``, its elliptic-integral formula
and Bailey's symmetry.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .elliptic import jacobi_inverse, theta_quotient
from .errors import (
    BranchJump,
    DomainError,
    GuardFailed,
    NewtonStall,
    ProbeDegenerate,
    ZeroCountMismatch,
)
from .qcore import QContext, qpoch_multi, theta
from .series import (
    SeriesSpec,
    SeriesValue,
    WSpec,
    pole_free_band,
    psi_annulus,
    psi_star_eval,
    w_pole_free_band,
    w_star_eval,
)

WINDING_NODES = 512
SEED_ARGS = 24
SEED_MODULI = 8
NEWTON_ITERS = 60
CLASS_TOL = 1e-8
PROBE_SEED = 20240617
PROBE_GAP = 1e-2
PROBE_TOL = 1e-8
CONT_RADIUS = 0.9
TRACK_STEP = 0.05
TRACK_MIN_STEPS = 16


# --------------------------------------------------------------------------
# evaluation helpers


def _fold_power(y: complex, center: float, q: complex) -> int:
    """The ``k`` for which ``y q^-k`` lies closest (in log-modulus) to ``center``."""
    return round(math.log(abs(y) / center) / math.log(abs(q)))


def psi_star_any_y(spec: SeriesSpec, x: complex, y: complex, ctx: QContext) -> SeriesValue:
    """``psi_star(x, y)`` for any ``y != 0``.

    ``y`` is moved into the middle of the summand pole-free band by powers of
    ``q``, and the result is carried back with
    ``psi_star(x, qy) = (-1)^r psi_star(x, y) / (a_1...a_r x y^r)``.
    """
    y = complex(y)
    if y == 0:
        raise DomainError("psi_star needs y != 0")
    q = ctx.q
    lo, hi = pole_free_band(spec, ctx)
    center = math.sqrt(lo * hi) if math.isfinite(hi) else lo / abs(q)
    k = _fold_power(y, center, q)
    if k == 0:
        return psi_star_eval(spec, x, y, ctx)
    r = spec.r
    c = spec.a_prod * complex(x)
    sign = -1.0 if r % 2 else 1.0
    u = y / q**k
    base = psi_star_eval(spec, x, u, ctx)
    factor = 1.0 + 0.0j
    if k > 0:
        for m in range(k):
            factor *= sign / (c * (u * q**m) ** r)
    else:
        for m in range(1, -k + 1):
            factor *= sign * c * (u / q**m) ** r
    return SeriesValue(base.value * factor, base.max_term * abs(factor), base.terms_used)


def psi2_star_continued(spec: SeriesSpec, x: complex, y: complex, ctx: QContext) -> SeriesValue:
    """``psi_star(x, y)`` for ``r = 2`` at any ``x`` beyond the inner radius.

    Points with ``|x| > 0.9`` (including ``|x| >= 1``, outside the annulus)
    are reached from ``q^m x`` and ``q^(m+1) x`` by the three-term relation
    ``(1 - B/(qx)) P(x) = -y((a1 + a2) x - (b1 + b2)/q) P(qx) + a1 a2 x y^2 (1 - qx) P(q^2 x)``,
    ``B = b1 b2 / (a1 a2)``.
    """
    if spec.r != 2:
        raise DomainError("continuation in x is implemented for r = 2 only")
    x = complex(x)
    y = complex(y)
    ann = psi_annulus(spec, ctx)
    if abs(x) <= CONT_RADIUS and ann.contains(x, ctx.margin):
        return psi_star_any_y(spec, x, y, ctx)
    q = ctx.q
    m = 1
    while abs(q**m * x) > CONT_RADIUS:
        m += 1
    a1, a2 = spec.a
    b1, b2 = spec.b
    big_b = spec.ratio
    v1 = psi_star_any_y(spec, q ** (m + 1) * x, y, ctx)
    v0 = psi_star_any_y(spec, q**m * x, y, ctx)
    # v0 = P(q^k x), v1 = P(q^(k+1) x); step k downwards to 0
    p0, s0, p1, s1 = v0.value, v0.max_term, v1.value, v1.max_term
    for k in range(m - 1, -1, -1):
        xk = q**k * x
        den = 1.0 - big_b / (q * xk)
        c1 = -y * ((a1 + a2) * xk - (b1 + b2) / q)
        c2 = a1 * a2 * xk * y * y * (1.0 - q * xk)
        pk = (c1 * p0 + c2 * p1) / den
        sk = (abs(c1) * s0 + abs(c2) * s1) / abs(den)
        p0, s0, p1, s1 = pk, sk, p0, s0
    return SeriesValue(p0, s0, v0.terms_used)


def psi_star_general(spec: SeriesSpec, x: complex, y: complex, ctx: QContext) -> SeriesValue:
    """Continued evaluator for ``r = 2``, folded direct evaluation otherwise."""
    if spec.r == 2:
        return psi2_star_continued(spec, x, y, ctx)
    return psi_star_any_y(spec, x, y, ctx)


def w_star_any_y(wspec: WSpec, y: complex, ctx: QContext) -> SeriesValue:
    """``W_star(y)`` for any ``y != 0`` via ``W_star(qy) = (-1)^r W_star(y) / (q^((r-4)/2) y^(r-2))``."""
    y = complex(y)
    if y == 0:
        raise DomainError("W_star needs y != 0")
    q = ctx.q
    lo, hi = w_pole_free_band(wspec, ctx)
    center = math.sqrt(lo * hi)
    k = _fold_power(y, center, q)
    if k == 0:
        return w_star_eval(wspec, y, ctx)
    r = wspec.r
    sign = -1.0 if r % 2 else 1.0
    qh = ctx.sqrt_q ** (r - 4)
    u = y / q**k
    base = w_star_eval(wspec, u, ctx)
    factor = 1.0 + 0.0j
    if k > 0:
        for m in range(k):
            factor *= sign / (qh * (u * q**m) ** (r - 2))
    else:
        for m in range(1, -k + 1):
            factor *= sign * qh * (u / q**m) ** (r - 2)
    return SeriesValue(base.value * factor, base.max_term * abs(factor), base.terms_used)


# --------------------------------------------------------------------------
# zero classes


def same_class(u: complex, v: complex, q: complex, tol: float = CLASS_TOL) -> bool:
    """True if ``u / v`` is within ``tol`` of an integer power of ``q``."""
    t = complex(u) / complex(v)
    k = round(math.log(abs(t)) / math.log(abs(q)))
    return abs(t / q**k - 1.0) < tol


def q_exponent(t: complex, q: complex) -> tuple[int, float]:
    """Nearest ``k`` with ``t ~ q^k`` and the relative defect ``|t/q^k - 1|``."""
    t = complex(t)
    k = round(math.log(abs(t)) / math.log(abs(q)))
    return k, abs(t / q**k - 1.0)


def fold_into(y: complex, q: complex, top: float) -> complex:
    """Representative of ``y q^Z`` with ``|q| top < |y| <= top``."""
    y = complex(y)
    aq = abs(q)
    k = math.floor(math.log(abs(y) / top) / math.log(aq))
    y = y / q**k
    # guard the half-open interval against rounding
    while abs(y) > top:
        y *= q
    while abs(y) <= aq * top:
        y /= q
    return y


@dataclass(frozen=True)
class RhoClass:
    """A zero class ``rep * q^Z`` with its canonical modulus band."""

    rep: complex
    modulus_band: tuple[float, float]

    def matches(self, other: complex | "RhoClass", q: complex, tol: float = CLASS_TOL) -> bool:
        v = other.rep if isinstance(other, RhoClass) else complex(other)
        return same_class(self.rep, v, q, tol)


@dataclass(frozen=True)
class FactorizationResult:
    """``psi_star(x, .) = A prod_j theta(y / rho_j)``.

    ``exponent`` is the ``k`` found in ``prod rep_j * a_1...a_r x = q^k``
    before the last representative was rescaled to make it zero;
    ``product_defect`` is the relative distance of that product from ``q^k``.
    """

    A: complex
    rhos: list[RhoClass]
    residual: float
    x: complex
    exponent: int = 0
    product_defect: float = 0.0
    probe_spread: float = 0.0


@dataclass
class BranchTrack:
    """A zero of ``psi_star(x, .)`` followed along a path in ``x``."""

    base_x: complex
    path: list[complex] = field(default_factory=list)
    rho_along_path: list[complex] = field(default_factory=list)

    @property
    def end(self) -> complex:
        return self.rho_along_path[-1]


def _winding(f: Callable[[complex], complex], radius: float, nodes: int) -> tuple[float, float]:
    """Total phase change of ``f`` around ``|y| = radius`` and the largest single step."""
    ts = np.exp(2j * np.pi * np.arange(nodes + 1) / nodes) * radius
    vals = [f(t) for t in ts]
    total = 0.0
    worst = 0.0
    for v0, v1 in zip(vals[:-1], vals[1:]):
        if v0 == 0 or v1 == 0:
            return math.nan, math.inf
        d = cmath.phase(v1 / v0)
        total += d
        worst = max(worst, abs(d))
    return total, worst


def count_zeros(f: Callable[[complex], complex], q: complex, top: float, nodes: int = WINDING_NODES) -> float:
    """Zeros of ``f`` in ``|q| top < |y| < top`` by the argument principle."""
    outer, w1 = _winding(f, top, nodes)
    inner, w2 = _winding(f, top * abs(q), nodes)
    if max(w1, w2) > 1.0:
        # the trapezoid phase sum is unreliable with steps this large
        return math.nan
    return (outer - inner) / (2.0 * math.pi)


def _newton(f: Callable[[complex], complex], y: complex, q: complex, top: float | None,
            iters: int = NEWTON_ITERS) -> complex | None:
    """Newton with a central-difference derivative.

    Stops once a step is below ``1e-14 |y|``.  When rounding noise in ``f``
    prevents that, the iterate is still accepted if the last step was below
    ``1e-9 |y|``.
    """
    last = math.inf
    for _ in range(iters):
        h = 1e-5 * abs(y)
        fy = f(y)
        if fy == 0:
            return y
        d = (f(y + h) - f(y - h)) / (2.0 * h)
        if d == 0 or not cmath.isfinite(d) or not cmath.isfinite(fy):
            return None
        step = fy / d
        y = y - step
        if y == 0 or not cmath.isfinite(y):
            return None
        if top is not None:
            y = fold_into(y, q, top)
        last = abs(step) / abs(y)
        if last < 1e-14:
            return y
    if last < 1e-9:
        return y
    return None


def annulus_zeros(f: Callable[[complex], complex], n: int, q: complex, tops: Sequence[float]) -> list[complex]:
    """The ``n`` zero classes of ``f`` (an element of some ``Theta_n``).

    For the first radius ``top`` in ``tops`` where the argument-principle
    count over ``|q| top < |y| < top`` comes out as ``n``, Newton iterations
    from a 24 x 8 grid of seeds are folded into that annulus and deduplicated
    modulo ``q^Z``.
    """
    top = None
    last = math.nan
    for t in tops:
        last = count_zeros(f, q, t)
        if math.isfinite(last) and abs(last - n) < 0.1:
            top = t
            break
    if top is None:
        raise ZeroCountMismatch(f"argument-principle count {last:.3f} differs from {n}")
    aq = abs(q)
    found: list[complex] = []
    for i in range(SEED_MODULI):
        for j in range(SEED_ARGS):
            # interleave so the first few seeds spread over the annulus
            jj = (j * 7) % SEED_ARGS
            mod = top * aq ** ((i + 0.5) / SEED_MODULI)
            seed = mod * cmath.exp(2j * math.pi * (jj + 0.5 * (i % 2)) / SEED_ARGS)
            z = _newton(f, seed, q, top)
            if z is None:
                continue
            if not any(same_class(z, w, q, 1e-7) for w in found):
                found.append(z)
            if len(found) == n:
                return found
    raise NewtonStall(f"found {len(found)} of {n} zero classes")


def _log_distance(u: complex, v: complex, q: complex) -> float:
    """Distance of ``log(u/v)`` from the lattice ``log q Z + 2 pi i Z``."""
    t = complex(u) / complex(v)
    k0 = round(math.log(abs(t)) / math.log(abs(q)))
    best = math.inf
    for k in (k0 - 1, k0, k0 + 1):
        best = min(best, abs(cmath.log(t / q**k)))
    return best


def _probes(zeros: Sequence[complex], q: complex, count: int = 3, draws: int = 100) -> list[complex]:
    rng = np.random.Generator(np.random.PCG64(PROBE_SEED))
    aq = abs(q)
    out: list[complex] = []
    for _ in range(draws):
        mod = math.exp(rng.uniform(math.log(aq), 0.0))
        y = mod * cmath.exp(1j * rng.uniform(-math.pi, math.pi))
        if all(_log_distance(y, z, q) >= PROBE_GAP for z in zeros):
            out.append(y)
            if len(out) == count:
                return out
    raise ProbeDegenerate(f"only {len(out)} of {count} admissible probe points in {draws} draws")


def _canonical_top(spec: SeriesSpec, x: complex) -> tuple[float, complex]:
    """Upper modulus of the canonical band and its anchor ``s``."""
    if spec.r == 2:
        s = cmath.sqrt(spec.a_prod * complex(x))
        return 1.0 / abs(s), s
    return 1.0, 1.0 + 0.0j


def find_rhos_raw(spec: SeriesSpec, x: complex, ctx: QContext) -> list[complex]:
    """Zero representatives of ``psi_star(x, .)`` as located, before canonicalization."""
    q = ctx.q
    aq = abs(q)

    def f(y: complex) -> complex:
        return psi_star_general(spec, x, y, ctx).value

    tops = [1.0, aq**0.31, aq**-0.27, aq**0.53, aq**-0.61]
    return annulus_zeros(f, spec.r, q, tops)


def canonical_rhos(spec: SeriesSpec, x: complex, zeros: Sequence[complex], ctx: QContext) -> tuple[list[RhoClass], int, float]:
    """Fold the zeros into the canonical band and rescale the last one so the
    product relation holds with exponent 0.

    Returns the classes, the exponent found and its relative defect.
    """
    q = ctx.q
    top, _ = _canonical_top(spec, x)
    band = (abs(q) * top, top)
    reps = [fold_into(z, q, top) for z in zeros]
    reps.sort(key=lambda z: (round(abs(z), 12), cmath.phase(z)))
    prod = spec.a_prod * complex(x)
    for rp in reps:
        prod *= rp
    k, defect = q_exponent(prod, q)
    reps[-1] = reps[-1] / q**k
    return [RhoClass(rp, band) for rp in reps], k, defect


def find_rhos(spec: SeriesSpec, x: complex, ctx: QContext) -> list[RhoClass]:
    """The ``r`` zero classes of ``y -> psi_star(x, y)``.

    Representatives satisfy ``|q| < |rep| <= 1`` (for ``r = 2``:
    ``|q| < |rep sqrt(a1 a2 x)| <= 1``), except that the last one is
    rescaled so that ``prod rep_j * a_1...a_r x = 1`` exactly.
    """
    rhos, _, _ = canonical_rhos(spec, x, find_rhos_raw(spec, x, ctx), ctx)
    return rhos


def _theta_factor(y: complex, rhos: Sequence[complex], ctx: QContext) -> complex:
    v = 1.0 + 0.0j
    for rp in rhos:
        v *= theta(y / rp, ctx)
    return v


def extract_A_spread(spec: SeriesSpec, x: complex, rhos: Sequence[RhoClass | complex], ctx: QContext) -> tuple[complex, float]:
    """``A`` from the first probe and its relative spread over three probes."""
    reps = [r.rep if isinstance(r, RhoClass) else complex(r) for r in rhos]
    values = []
    for y0 in _probes(reps, ctx.q):
        values.append(psi_star_general(spec, x, y0, ctx).value / _theta_factor(y0, reps, ctx))
    a0 = values[0]
    spread = max(abs(v / a0 - 1.0) for v in values)
    return a0, spread


def extract_A(spec: SeriesSpec, x: complex, rhos: Sequence[RhoClass | complex], ctx: QContext) -> complex:
    """``A = psi_star(x, y0) / prod_j theta(y0 / rep_j)`` at a probe ``y0``.

    Raises GuardFailed if three probes disagree by more than ``1e-8``.
    """
    a0, spread = extract_A_spread(spec, x, rhos, ctx)
    if spread > PROBE_TOL:
        raise GuardFailed(f"A differs by {spread:.3g} between probes")
    return a0


def reconstruction_residual(spec: SeriesSpec, x: complex, A: complex, rhos: Sequence[RhoClass | complex],
                            ys: Sequence[complex], ctx: QContext) -> float:
    """Largest relative gap between ``A prod theta(y / rho_j)`` and ``psi_star(x, y)``."""
    reps = [r.rep if isinstance(r, RhoClass) else complex(r) for r in rhos]
    worst = 0.0
    for y in ys:
        direct = psi_star_general(spec, x, y, ctx).value
        built = A * _theta_factor(complex(y), reps, ctx)
        worst = max(worst, abs(direct - built) / max(abs(direct), abs(built)))
    return worst


def factorize(spec: SeriesSpec, x: complex, ctx: QContext, ys: Sequence[complex] | None = None) -> FactorizationResult:
    """Zeros, ``A`` and the reconstruction residual at ``x``."""
    x = complex(x)
    raw = find_rhos_raw(spec, x, ctx)
    rhos, k, defect = canonical_rhos(spec, x, raw, ctx)
    a0, spread = extract_A_spread(spec, x, rhos, ctx)
    if ys is None:
        aq = abs(ctx.q)
        ys = [aq**0.37 * cmath.exp(0.9j), aq**0.71 * cmath.exp(-2.1j), 0.93 * cmath.exp(2.7j)]
    res = reconstruction_residual(spec, x, a0, rhos, ys, ctx)
    return FactorizationResult(a0, rhos, res, x, k, defect, spread)


# --------------------------------------------------------------------------
# the 2psi2 series


def _require_r2(spec: SeriesSpec) -> None:
    if spec.r != 2:
        raise DomainError(f"this operation is specific to r = 2, got r = {spec.r}")


def polish_zero(spec: SeriesSpec, x: complex, y: complex, ctx: QContext) -> complex:
    """Newton-refine a zero of ``psi_star(x, .)`` near ``y`` without folding."""

    def f(u: complex) -> complex:
        return psi_star_general(spec, x, u, ctx).value

    z = _newton(f, complex(y), ctx.q, None, iters=40)
    if z is None:
        raise BranchJump(f"Newton corrector failed near y = {y} at x = {x}")
    return z


def track_rho_path(spec2: SeriesSpec, x_from: complex, x_to: complex, rho_start: complex, ctx: QContext,
                   min_steps: int = TRACK_MIN_STEPS) -> BranchTrack:
    """Continue a zero along the straight log-space path ``x_from -> x_to``.

    Steps are at most ``0.05`` in ``log x`` (and at least ``min_steps`` of
    them); a step is halved while the Newton corrector fails or moves the
    zero by more than a quarter of its modulus.  BranchJump is raised once
    the step falls below ``1e-7`` of the path length, which happens next to
    a branch point of ``rho``.
    """
    _require_r2(spec2)
    x_from = complex(x_from)
    x_to = complex(x_to)
    rho = complex(rho_start)
    track = BranchTrack(x_from, [x_from], [rho])
    if x_to == x_from:
        return track
    span = cmath.log(x_to / x_from)
    base_step = 1.0 / max(min_steps, math.ceil(abs(span) / TRACK_STEP))
    t = 0.0
    h = base_step
    while t < 1.0:
        h = min(h, 1.0 - t)
        t_new = 1.0 if h >= 1.0 - t else t + h
        xi = x_to if t_new == 1.0 else x_from * cmath.exp(span * t_new)
        try:
            new = polish_zero(spec2, xi, rho, ctx)
            ok = abs(new - rho) <= 0.25 * abs(rho)
        except BranchJump:
            ok = False
        if not ok:
            h *= 0.5
            if h < 1e-7:
                raise BranchJump(f"zero lost near x = {xi}: step shrank below 1e-7 of the path")
            continue
        t = t_new
        rho = new
        track.path.append(xi)
        track.rho_along_path.append(rho)
        h = min(2.0 * h, base_step)
    return track


def track_rho(spec2: SeriesSpec, x_from: complex, x_to: complex, rho_start: complex, ctx: QContext) -> complex:
    """End point of :func:`track_rho_path`."""
    return track_rho_path(spec2, x_from, x_to, rho_start, ctx).end


def rho_branch(spec2: SeriesSpec, x: complex, shifts: Sequence[int], ctx: QContext,
               base: complex = 1.0) -> dict[int, complex]:
    """Coherent ``rho(q^k x)`` for each ``k`` in ``shifts``.

    The zero ``1/a1`` of ``psi_star(1, .)`` is tracked from ``base`` to ``x``
    and from there to each ``q^k x``.
    """
    _require_r2(spec2)
    q = ctx.q
    x = complex(x)
    start = 1.0 / spec2.a[0]
    base = complex(base)
    if base != 1.0:
        start = track_rho(spec2, 1.0, base, start, ctx)
    rho_x = track_rho(spec2, base, x, start, ctx)
    out = {}
    for k in shifts:
        out[k] = rho_x if k == 0 else track_rho(spec2, x, q**k * x, rho_x, ctx)
    return out


def rho_classes(spec2: SeriesSpec, x: complex, shifts: Sequence[int], ctx: QContext) -> dict[int, complex]:
    """A root-found representative of ``rho(q^k x)`` for each ``k``.

    The relations checked below hold for either zero class at each point and
    for any representative, so no continuation is needed.
    """
    _require_r2(spec2)
    q = ctx.q
    x = complex(x)
    return {k: find_rhos_raw(spec2, q**k * x, ctx)[0] for k in shifts}


def _rhos(spec2: SeriesSpec, x: complex, shifts: Sequence[int], ctx: QContext, tracked: bool) -> dict[int, complex]:
    if tracked:
        return rho_branch(spec2, x, shifts, ctx)
    return rho_classes(spec2, x, shifts, ctx)


def A_given_rho(spec2: SeriesSpec, x: complex, rho: complex, ctx: QContext) -> complex:
    """``A(x)`` in ``psi_star(x, y) = A theta(y/rho) theta(a1 a2 x y rho)``."""
    x = complex(x)
    rho = complex(rho)
    c = spec2.a_prod * x
    other = 1.0 / (c * rho)
    values = []
    for y0 in _probes([rho, other], ctx.q):
        den = theta(y0 / rho, ctx) * theta(c * y0 * rho, ctx)
        values.append(psi_star_general(spec2, x, y0, ctx).value / den)
    spread = max(abs(v / values[0] - 1.0) for v in values)
    if spread > PROBE_TOL:
        raise GuardFailed(f"A differs by {spread:.3g} between probes at x = {x}")
    return values[0]


BASE_OFFSET = 1e-3


def _nudge_base(x: complex) -> complex:
    # at x = 1 the relations degenerate to 0/0: rho(1/q) and rho(1) fall in
    # the same class, so the check is made beside the base point
    if abs(complex(x) - 1.0) < 1e-9:
        return cmath.exp(BASE_OFFSET * cmath.exp(1j * math.pi / 3))
    return complex(x)


def a_rho_rhs(spec2: SeriesSpec, x: complex, rm: complex, r0: complex, rp: complex, ctx: QContext) -> complex:
    """Right side of the ``A(x)^2`` formula from ``rho(x/q), rho(x), rho(qx)``."""
    a1, a2 = spec2.a
    b1, b2 = spec2.b
    c = a1 * a2 * x
    pro = qpoch_multi([x, b1 * b2 / c, b1 / a1, b1 / a2, b2 / a1, b2 / a2], None, ctx)
    num = c * r0 * pro * theta(rm / rp, ctx) * theta(c * rm * rp, ctx)
    den = ((a1 + a2) * x - b1 - b2) * theta(rm / r0, ctx) * theta(r0 / rp, ctx)
    den *= theta(c * r0 * rm, ctx) * theta(c * r0 * rp, ctx)
    return num / den


def verify_A_rho_relation(spec2: SeriesSpec, x: complex, ctx: QContext, tracked: bool = True) -> float:
    """Relative defect ``|A(x)^2 - RHS| / |A(x)^2|`` with coherent branches of ``rho``.

    At ``x = 1`` the relation is evaluated at ``exp(1e-3 e^(i pi/3))`` beside it.
    By default the zeros are continued from ``1/a1`` at ``x = 1``; with
    ``tracked=False`` they are root-found at each point instead (the relation
    holds for either zero class and any representative).
    """
    _require_r2(spec2)
    x = _nudge_base(x)
    rho = _rhos(spec2, x, (-1, 0, 1), ctx, tracked)
    a_x = A_given_rho(spec2, x, rho[0], ctx)
    lhs = a_x * a_x
    rhs = a_rho_rhs(spec2, x, rho[-1], rho[0], rho[1], ctx)
    return abs(lhs - rhs) / abs(lhs)


def _ratio_forms(spec2: SeriesSpec, x: complex, r0: complex, r1: complex, r2: complex, ctx: QContext):
    """The three printed expressions for ``A(qx)/A(q^2 x)``, ``A(q^2 x)/A(x)``, ``A(x)/A(qx)``."""
    a1, a2 = spec2.a
    b1, b2 = spec2.b
    q = ctx.q
    c = a1 * a2 * x
    t = theta
    e1 = -(r1 * (1 - q * x) * t(r0 / r2, ctx) * t(c * r0 * r2, ctx)) / (
        r2**2 * ((a1 + a2) * q * x - b1 - b2) * t(r0 / r1, ctx) * t(c * r0 * r1, ctx))
    e2 = (r2**2 * (a1 * a2 * q * x - b1 * b2) * t(r1 / r0, ctx) * t(c * r0 * r1, ctx)) / (
        (1 - q * x) * t(r1 / r2, ctx) * t(c * r1 * r2, ctx))
    e3 = (((a1 + a2) * q * x - b1 - b2) * t(r2 / r1, ctx) * t(c * r1 * r2, ctx)) / (
        r1 * (a1 * a2 * q * x - b1 * b2) * t(r2 / r0, ctx) * t(c * r0 * r2, ctx))
    return e1, e2, e3


def a_ratio_residuals(spec2: SeriesSpec, x: complex, ctx: QContext, tracked: bool = True) -> tuple[float, float, float]:
    """Relative defects of the three ratio relations for ``A`` at ``x, qx, q^2 x``."""
    _require_r2(spec2)
    q = ctx.q
    x = _nudge_base(x)
    rho = _rhos(spec2, x, (0, 1, 2), ctx, tracked)
    a = [A_given_rho(spec2, q**k * x, rho[k], ctx) for k in (0, 1, 2)]
    e1, e2, e3 = _ratio_forms(spec2, x, rho[0], rho[1], rho[2], ctx)
    lhs = (a[1] / a[2], a[2] / a[0], a[0] / a[1])
    return tuple(abs(l - e) / abs(l) for l, e in zip(lhs, (e1, e2, e3)))


def rho_fe_sides(spec2: SeriesSpec, x: complex, rho: dict[int, complex], ctx: QContext) -> tuple[complex, complex]:
    """Both sides of the functional equation linking ``rho`` at ``x, qx, q^2 x, q^3 x``."""
    a1, a2 = spec2.a
    b1, b2 = spec2.b
    q = ctx.q
    c = a1 * a2 * x
    r0, r1, r2, r3 = rho[0], rho[1], rho[2], rho[3]
    t = theta
    lhs = (t(r1 / r3, ctx) * t(c * r1 * r3, ctx)) / (t(r2 / r3, ctx) * t(c * r2 * r3, ctx))
    rhs = ((b1 + b2 - (a1 + a2) * q * x) * (b1 + b2 - (a1 + a2) * q * q * x)
           * t(r1 / r0, ctx) * t(c * r0 * r1, ctx)) / (
        (1 - q * x) * (b1 * b2 - a1 * a2 * q * q * x) * t(r2 / r0, ctx) * t(c * r0 * r2, ctx))
    return lhs, rhs


def verify_rho_functional_equation(spec2: SeriesSpec, x: complex, ctx: QContext, tracked: bool = True) -> float:
    """Defect of the ``rho`` functional equation, divided by the larger side."""
    _require_r2(spec2)
    x = _nudge_base(x)
    rho = _rhos(spec2, x, (0, 1, 2, 3), ctx, tracked)
    lhs, rhs = rho_fe_sides(spec2, x, rho, ctx)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def rho_fe_cross_check(spec2: SeriesSpec, x: complex, ctx: QContext, tracked: bool = True) -> float:
    """Compare the ratio relation for ``A(x)/A(qx)`` shifted to ``qx`` with the
    one for ``A(qx)/A(q^2 x)``; both are expressions in ``rho`` alone."""
    _require_r2(spec2)
    q = ctx.q
    x = _nudge_base(x)
    rho = _rhos(spec2, x, (0, 1, 2, 3), ctx, tracked)
    e1, _, _ = _ratio_forms(spec2, x, rho[0], rho[1], rho[2], ctx)
    _, _, e3_shift = _ratio_forms(spec2, q * x, rho[1], rho[2], rho[3], ctx)
    return abs(e1 - e3_shift) / max(abs(e1), abs(e3_shift))


def theorem2_residuals(spec2: SeriesSpec, x: complex, y: complex, ctx: QContext, tracked: bool = True) -> dict[str, float]:
    """Every ``2psi2`` relation at ``x`` from one set of branches ``rho(q^k x)``, ``k = -1..3``.

    Keys: ``A_rho_relation``, ``A_ratio_relations`` (largest of three),
    ``rho_functional_eq``, ``rho_fe_multiplicativity``, ``rho_integral_match``,
    ``bailey_symmetry`` (at ``y``).
    """
    _require_r2(spec2)
    q = ctx.q
    xb = _nudge_base(x)
    rho = _rhos(spec2, xb, (-1, 0, 1, 2, 3), ctx, tracked)
    a = {k: A_given_rho(spec2, q**k * xb, rho[k], ctx) for k in (0, 1, 2)}
    out: dict[str, float] = {}
    rhs = a_rho_rhs(spec2, xb, rho[-1], rho[0], rho[1], ctx)
    out["A_rho_relation"] = abs(a[0] ** 2 - rhs) / abs(a[0] ** 2)
    e1, e2, e3 = _ratio_forms(spec2, xb, rho[0], rho[1], rho[2], ctx)
    lhs = (a[1] / a[2], a[2] / a[0], a[0] / a[1])
    out["A_ratio_relations"] = max(abs(l - e) / abs(l) for l, e in zip(lhs, (e1, e2, e3)))
    fl, fr = rho_fe_sides(spec2, xb, rho, ctx)
    out["rho_functional_eq"] = abs(fl - fr) / max(abs(fl), abs(fr))
    _, _, e3s = _ratio_forms(spec2, q * xb, rho[1], rho[2], rho[3], ctx)
    out["rho_fe_multiplicativity"] = abs(e1 - e3s) / max(abs(e1), abs(e3s))
    out["rho_integral_match"], _ = rho_integral_match(spec2, x, ctx)
    out["bailey_symmetry"] = verify_bailey_symmetry(spec2, x, y, ctx)
    return out


@dataclass(frozen=True)
class IntegralRho:
    """Outcome of the elliptic-integral formula for ``rho``."""

    rho: RhoClass
    upper_limit: complex
    quotient_residual: float


def rho_via_integral_detail(spec2: SeriesSpec, x: complex, ctx: QContext) -> IntegralRho:
    _require_r2(spec2)
    x = complex(x)
    q = ctx.q
    s = cmath.sqrt(spec2.a_prod * x)
    p_plus = psi_star_general(spec2, x, 1.0 / s, ctx).value
    p_minus = psi_star_general(spec2, x, -1.0 / s, ctx).value
    if p_minus == 0:
        raise DomainError("psi_star(x, -1/sqrt(a1 a2 x)) vanishes: x is a branch point of rho")
    upper = -p_plus / p_minus
    xi = jacobi_inverse(upper, ctx)
    rho = xi / s
    # psi_star(x, 1/s) / psi_star(x, -1/s) = -theta(rho s)^2 / theta(-rho s)^2
    check = theta_quotient(rho * s, ctx)
    qres = abs(check - upper) / abs(upper)
    top, _ = _canonical_top(spec2, x)
    return IntegralRho(RhoClass(fold_into(rho, q, top), (abs(q) * top, top)), upper, qres)


def rho_via_integral(spec2: SeriesSpec, x: complex, ctx: QContext) -> RhoClass:
    """``rho(x) = exp(norm^-1 int_0^Y kernel) / sqrt(a1 a2 x)`` with
    ``Y = -psi_star(x, 1/s) / psi_star(x, -1/s)``, ``s = sqrt(a1 a2 x)`` principal."""
    return rho_via_integral_detail(spec2, x, ctx).rho


def rho_integral_match(spec2: SeriesSpec, x: complex, ctx: QContext,
                       rhos: Sequence[RhoClass] | None = None) -> tuple[float, bool]:
    """Class distance between the integral ``rho`` and the root-found classes.

    Returns the relative defect and whether the match needed the swap
    ``rho -> 1/(a1 a2 x rho)``.
    """
    x = complex(x)
    q = ctx.q
    got = rho_via_integral(spec2, x, ctx).rep
    if rhos is None:
        rhos = find_rhos(spec2, x, ctx)
    first = rhos[0].rep
    _, d_first = q_exponent(got / first, q)
    _, d_other = q_exponent(got / rhos[1].rep, q)
    if d_first <= d_other:
        return d_first, False
    return d_other, True


def verify_bailey_symmetry(spec2: SeriesSpec, x: complex, y: complex, ctx: QContext) -> float:
    """Relative defect of ``psi_star(x, y) = psi_star(x, q/(a1 a2 x y))``."""
    _require_r2(spec2)
    x = complex(x)
    y = complex(y)
    u = ctx.q / (spec2.a_prod * x * y)
    lhs = psi_star_general(spec2, x, y, ctx).value
    rhs = psi_star_general(spec2, x, u, ctx).value
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs))


def bailey_substitution(spec2: SeriesSpec, x: complex) -> tuple[SeriesSpec, complex]:
    """Image of ``(a2, b2, x) -> (a1 a2 x / b2, a1 x, b2 / a1)``."""
    _require_r2(spec2)
    a1, a2 = spec2.a
    b1, b2 = spec2.b
    x = complex(x)
    if b2 == 0:
        raise DomainError("the substitution needs b2 != 0")
    return SeriesSpec([a1, a1 * a2 * x / b2], [b1, a1 * x]), b2 / a1


def bailey_zero_set_residual(spec2: SeriesSpec, x: complex, ctx: QContext) -> float:
    """Largest class distance between the zeros at ``x`` and those of the
    substituted series at its corresponding point."""
    q = ctx.q
    s2, x2 = bailey_substitution(spec2, x)
    mine = [c.rep for c in find_rhos(spec2, x, ctx)]
    theirs = [c.rep for c in find_rhos(s2, x2, ctx)]
    worst = 0.0
    for u in mine:
        worst = max(worst, min(q_exponent(u / v, q)[1] for v in theirs))
    for v in theirs:
        worst = max(worst, min(q_exponent(v / u, q)[1] for u in mine))
    return worst


def branch_point_margin(spec2: SeriesSpec, x: complex, ctx: QContext) -> float:
    """Smallest of ``|psi_star(x, y)| / scale`` over ``y = +-1/s`` and ``+-sqrt(q)/s``."""
    _require_r2(spec2)
    x = complex(x)
    s = cmath.sqrt(spec2.a_prod * x)
    worst = math.inf
    for y in (1.0 / s, -1.0 / s, ctx.sqrt_q / s, -ctx.sqrt_q / s):
        v = psi_star_general(spec2, x, y, ctx)
        worst = min(worst, abs(v.value) / v.max_term)
    return worst


# --------------------------------------------------------------------------
# VWP factorization


@dataclass(frozen=True)
class VWPFit:
    """``W_star(y) = A theta(y^2) theta(y/rho) theta(q rho y)`` for ``r = 8``."""

    A: complex
    rho: complex
    residual: float


def fit_w8(wspec: WSpec, ctx: QContext, ys: Sequence[complex] | None = None) -> VWPFit:
    """Locate ``rho`` as a zero of ``W_star / theta(y^2)`` (an element of ``Theta_2(q)``)
    and read off ``A``; the residual is the largest relative reconstruction
    error over ``ys``."""
    if wspec.r != 8:
        raise DomainError(f"fit_w8 needs r = 8, got r = {wspec.r}")
    q = ctx.q
    aq = abs(q)

    def g(y: complex) -> complex:
        return w_star_any_y(wspec, y, ctx).value / theta(y * y, ctx)

    # circles at |q|^(-1/4) and |q|^(3/4) miss the zeros of theta(y^2)
    zeros = annulus_zeros(g, 2, q, [aq**-0.25, aq**-0.13, aq**-0.37])
    rho = zeros[0]
    avoid = [rho, 1.0 / (q * rho), ctx.sqrt_q, -ctx.sqrt_q, 1.0, -1.0]
    vals = []
    for y0 in _probes(avoid, q):
        vals.append(g(y0) / (theta(y0 / rho, ctx) * theta(q * rho * y0, ctx)))
    a0 = vals[0]
    if ys is None:
        ys = [0.83 * cmath.exp(0.4j), 1.21 * cmath.exp(-1.3j), 0.67 * cmath.exp(2.2j)]
    worst = 0.0
    for y in ys:
        direct = w_star_any_y(wspec, y, ctx).value
        built = a0 * theta(y * y, ctx) * theta(y / rho, ctx) * theta(q * rho * y, ctx)
        worst = max(worst, abs(direct - built) / max(abs(direct), abs(built)))
    return VWPFit(a0, rho, worst)


__all__ = [
    "A_given_rho",
    "BranchTrack",
    "FactorizationResult",
    "IntegralRho",
    "RhoClass",
    "VWPFit",
    "a_ratio_residuals",
    "a_rho_rhs",
    "annulus_zeros",
    "bailey_substitution",
    "bailey_zero_set_residual",
    "branch_point_margin",
    "canonical_rhos",
    "count_zeros",
    "extract_A",
    "extract_A_spread",
    "factorize",
    "find_rhos",
    "find_rhos_raw",
    "fit_w8",
    "fold_into",
    "polish_zero",
    "psi2_star_continued",
    "psi_star_any_y",
    "psi_star_general",
    "q_exponent",
    "reconstruction_residual",
    "rho_branch",
    "rho_classes",
    "rho_fe_cross_check",
    "rho_fe_sides",
    "rho_integral_match",
    "rho_via_integral",
    "rho_via_integral_detail",
    "same_class",
    "theorem2_residuals",
    "track_rho",
    "track_rho_path",
    "verify_A_rho_relation",
    "verify_bailey_symmetry",
    "verify_rho_functional_equation",
    "w_star_any_y",
]
