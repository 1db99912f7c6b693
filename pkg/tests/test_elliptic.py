from __future__ import annotations

import cmath

import numpy as np
import pytest

from conftest import rel
from qseries.elliptic import (
    InversionConstants,
    inversion_constants,
    inversion_kernel,
    jacobi_inverse,
    solution_set,
    theta_quotient,
)
from qseries.errors import BranchPointHit, NearBranchPoint, PoleHit
from qseries.factorize import same_class
from qseries.qcore import theta


def test_constants(ctx):
    c = inversion_constants(ctx)
    assert abs(c.k1 * c.k2 - 1) < 1e-12
    sq = ctx.sqrt_q
    assert rel(c.norm**2, theta(sq, ctx) ** 2 * theta(-sq, ctx) ** 2) < 1e-11


def test_theta_quotient(ctx):
    assert theta_quotient(ctx.q, ctx) == 0
    x = 0.6 + 0.2j
    v = theta_quotient(x, ctx)
    assert rel(theta_quotient(ctx.q / x, ctx), v) < 1e-11
    assert rel(theta_quotient(ctx.q * x, ctx), v) < 1e-11
    with pytest.raises(PoleHit):
        theta_quotient(-0.5, ctx)


def test_kernel(ctx):
    c = inversion_constants(ctx)
    # sqrt(u) K(u) = 1 + (k1 + k2) u / 2 + O(u^2); k2 is large for real q,
    # so the first-order term is kept at u = 1e-8
    u = 1e-8
    lead = 1 + (c.k1 + c.k2) * u / 2
    assert abs(cmath.sqrt(u) * inversion_kernel(u, c) - lead) < abs(c.k1 + c.k2) ** 2 * u * u
    assert abs(cmath.sqrt(1e-14) * inversion_kernel(1e-14, c) - 1) < 1e-8
    swapped = InversionConstants(c.k2, c.k1, c.norm)
    assert rel(inversion_kernel(0.3 - 0.1j, swapped), inversion_kernel(0.3 - 0.1j, c)) < 1e-15
    # expanded cubic u - (k1 + k2) u^2 + k1 k2 u^3 under the root
    u = 0.1
    cubic = u - (c.k1 + c.k2) * u**2 + c.k1 * c.k2 * u**3
    assert rel(inversion_kernel(u, c), 1 / cmath.sqrt(cubic)) < 1e-13
    with pytest.raises(BranchPointHit):
        inversion_kernel(0, c)


def _equivalent(x: complex, x0: complex, q: complex) -> bool:
    return same_class(x, x0, q, 1e-8) or same_class(x * x0, 1.0, q, 1e-8) or same_class(x, q / x0, q, 1e-8)


def test_inverse_known_point(ctx):
    x0 = 0.75
    x = jacobi_inverse(theta_quotient(x0, ctx), ctx)
    assert _equivalent(x, x0, ctx.q)


def test_inverse_at_one(ctx):
    x = jacobi_inverse(1.0, ctx)
    assert rel(theta(x, ctx) ** 2, theta(-x, ctx) ** 2) < 1e-8


def test_round_trip_random(ctx):
    rng = np.random.default_rng(11)
    c = inversion_constants(ctx)
    done = 0
    while done < 20:
        y = 10 ** rng.uniform(-1, np.log10(3)) * cmath.exp(1j * rng.uniform(-np.pi, np.pi))
        try:
            x = jacobi_inverse(y, ctx)
        except NearBranchPoint:
            continue
        assert rel(theta_quotient(x, ctx), y) < 1e-8
        done += 1
    assert c.k1 != c.k2


def test_solution_set(ctx):
    x0 = jacobi_inverse(0.4 + 0.3j, ctx)
    for x in solution_set(x0, ctx):
        assert rel(theta_quotient(x, ctx), 0.4 + 0.3j) < 1e-9


def test_near_branch_point(ctx):
    c = inversion_constants(ctx)
    with pytest.raises(NearBranchPoint):
        jacobi_inverse(1 / c.k1 * (1 + 1e-5), ctx)
    with pytest.raises(NearBranchPoint):
        jacobi_inverse(1e-9, ctx)
