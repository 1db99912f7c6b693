from __future__ import annotations

import cmath

import numpy as np
import pytest

from conftest import rel
from oracles import values as ov
from qseries.classical import psi_star_x1, w5_star_product
from qseries.errors import DomainError, OutsideAnnulus
from qseries.qcore import QContext, q_euler, qpoch_inf, qpoch_multi, theta
from qseries.series import (
    SeriesSpec,
    WSpec,
    psi,
    psi_annulus,
    psi_eval,
    psi_star,
    psi_star_limit_one,
    psi_term,
    w_eval,
    w_series,
    w_star,
    w_star_eval,
    w_term,
)


def test_spec_validation():
    with pytest.raises(DomainError):
        SeriesSpec([1.0, 0.0], [0.1, 0.2])
    with pytest.raises(DomainError):
        SeriesSpec([1.0], [0.1, 0.2])
    with pytest.raises(DomainError):
        WSpec([])
    assert WSpec([1.5, 1.7, 1.9, 2.1]).r == 6


def test_annulus(ctx):
    a = psi_annulus(SeriesSpec([2.0], [0.5]), ctx)
    assert (a.inner, a.outer) == (0.25, 1.0)
    assert psi_annulus(SeriesSpec([2.0, 3.0], [0.0, 0.0]), ctx).inner == 0.0
    assert psi_annulus(SeriesSpec([1.0, 1.0], [0.5, 0.5]), ctx).inner == 0.25


def test_psi_term(ctx):
    spec = SeriesSpec([2.0, 3.0], [0.1, 0.15])
    x, y = 0.4 + 0.1j, 0.7 - 0.2j
    assert psi_term(spec, x, y, 0, ctx) == 1
    want = x * (1 - 2 * y) * (1 - 3 * y) / ((1 - 0.1 * y) * (1 - 0.15 * y))
    assert rel(psi_term(spec, x, y, 1, ctx), want) < 1e-14
    s1 = SeriesSpec([2.0], [0.3])
    want = (1 - 0.3 * y / 0.5) / ((1 - 2 * y / 0.5) * x)
    assert rel(psi_term(s1, x, y, -1, ctx), want) < 1e-14


def _one_psi_one(a, b, x, ctx):
    return qpoch_inf(b / a, ctx) * theta(a * x, ctx) / qpoch_multi([x, b / (a * x), b, 0.5 / a], None, ctx)


def test_psi_1psi1_closed_form(ctx):
    # a x = 1 puts the closed form on a zero of theta
    v = psi_eval(SeriesSpec([2.0], [0.3]), 0.5, 1.0, ctx)
    assert _one_psi_one(2.0, 0.3, 0.5, ctx) == 0
    assert abs(v.value) < 1e-12 * v.max_term
    for x in (0.6, 0.35 + 0.4j):
        assert rel(psi(SeriesSpec([2.0], [0.3]), x, 1.0, ctx), _one_psi_one(2.0, 0.3, x, ctx)) < 1e-10


def test_psi_unilateral_part_small_x(ctx):
    # with |x| below the inner radius the bilateral sum is refused; the n >= 0
    # part still tends to 1 with the n = 1 term ratio as the bound
    spec = SeriesSpec([2.0, 3.0], [0.1, 0.2])
    x = 1e-6
    with pytest.raises(OutsideAnnulus):
        psi(spec, x, 1.0, ctx)
    part = sum(psi_term(spec, x, 1.0, n, ctx) for n in range(6))
    bound = abs(psi_term(spec, 1.0, 1.0, 1, ctx))
    assert abs(part - 1) < 2 * abs(x) * bound


def test_psi_fixed_window_oracle(ctx, spec2):
    brute = 0.0
    for n in range(-40, 41):
        brute += psi_term(spec2, 0.4, 0.7, n, ctx)
    got = psi(spec2, 0.4, 0.7, ctx)
    assert rel(got, brute) < 1e-10
    assert rel(got, ov.PSI_R2_X04_Y07_Q05) < 1e-12


def test_psi_star_frozen_values(spec2, spec3):
    c = QContext(0.3 + 0.2j)
    x = 0.8 * cmath.exp(0.3j)
    assert rel(psi_star(spec2, x, 0.9, c), ov.PSI_STAR_R2_XC_Y09_QC) < 1e-11
    assert rel(psi_star(spec3, 0.3, 0.9, QContext(0.5)), ov.PSI_STAR_R3_X03_Y09_Q05) < 1e-11


def test_psi_star_r1(ctx):
    a, b, x, y = 2.0, 0.3, 0.5, 1.2
    want = qpoch_inf(b / a, ctx) * theta(a * x * y, ctx)
    assert rel(psi_star(SeriesSpec([a], [b]), x, y, ctx), want) < 1e-10


def test_psi_star_limit_one(ctx, spec2):
    got = psi_star_limit_one(spec2, 0.8, ctx)
    want = qpoch_inf(spec2.ratio, ctx) / q_euler(ctx) * theta(1.6, ctx) * theta(2.4, ctx)
    assert rel(got, want) < 1e-9
    assert rel(psi_star_x1(spec2, 0.8, ctx), want) < 1e-14


def test_psi_star_quasi_periodicity(ctx, spec2):
    x, y = 0.4, 0.7
    lhs = psi_star(spec2, x, 0.5 * y, ctx) * spec2.a_prod * x * y**2
    assert rel(lhs, psi_star(spec2, x, y, ctx)) < 1e-9


def test_bilateral_shift_identity(ctx, spec2):
    rng = np.random.default_rng(11)
    (a1, a2), (b1, b2) = spec2.a, spec2.b
    q = ctx.q
    for _ in range(20):
        x = rng.uniform(0.1, 0.8) * cmath.exp(1j * rng.uniform(-3, 3))
        y = rng.uniform(0.6, 1.3) * cmath.exp(1j * rng.uniform(-3, 3))
        lhs = rhs = 0.0
        for n in range(-80, 220):
            t = psi_term(spec2, x, y, n, ctx)
            lhs += t * (1 - b1 * y * q ** (n - 1)) * (1 - b2 * y * q ** (n - 1))
            rhs += t * (1 - a1 * y * q**n) * (1 - a2 * y * q**n) * x
        assert rel(lhs, rhs) < 1e-10


def test_three_term_equation(ctx, spec2):
    rng = np.random.default_rng(5)
    (a1, a2), (b1, b2) = spec2.a, spec2.b
    q = ctx.q
    for _ in range(20):
        x = rng.uniform(0.2, 0.9) * cmath.exp(1j * rng.uniform(-3, 3))
        y = rng.uniform(0.6, 1.3) * cmath.exp(1j * rng.uniform(-3, 3))
        vals = [psi_eval(spec2, x * q**k, y, ctx) for k in range(3)]
        p0, p1, p2 = (psi_star(spec2, x * q**k, y, ctx) for k in range(3))
        terms = [
            (1 - b1 * b2 / (a1 * a2 * q * x)) * p0,
            y * ((a1 + a2) * x - (b1 + b2) / q) * p1,
            -a1 * a2 * x * y**2 * (1 - q * x) * p2,
        ]
        scale = max(abs(t) for t in terms)
        assert abs(sum(terms)) < 1e-9 * scale
        assert all(v.terms_used > 0 for v in vals)


def test_w_series_fixed_window(ctx):
    ws = WSpec([1.5, 1.7, 1.9, 2.1])
    brute = sum(w_term(ws, 0.9, n, ctx) for n in range(-40, 41))
    assert rel(w_series(ws, 0.9, ctx), brute) < 1e-10
    assert rel(w_series(ws, 0.9, ctx), ov.W6_Y09_Q05) < 1e-12
    assert rel(w_series(ws, 1 / 0.9, ctx), ov.W6_Y09INV_Q05) < 1e-12


def test_w_series_at_unit_y(ctx):
    ws = WSpec([1.5, 1.7, 1.9, 2.1])
    assert w_term(ws, 1.0, 0, ctx) == 0
    rest = sum(w_term(ws, 1.0, n, ctx) for n in range(-40, 41) if n != 0)
    v = w_series(ws, 1.0, ctx)
    assert np.isfinite(abs(v))
    assert abs(v - rest) < 1e-12 * w_eval(ws, 1.0, ctx).max_term


@pytest.mark.parametrize("a", [[2.5], [1.8, 2.2]])
def test_w3_w4_vanish(ctx, a):
    v = w_star_eval(WSpec(a), 0.8, ctx)
    assert abs(v.value) < 1e-10 * v.max_term


def test_w6_constancy(ctx):
    ws = WSpec([1.5, 1.7, 1.9, 2.1])
    g1 = w_star(ws, 0.8, ctx) / theta(0.64, ctx)
    g2 = w_star(ws, 1.3, ctx) / theta(1.69, ctx)
    assert rel(g1, g2) < 1e-9


@pytest.mark.parametrize("y", [0.9, 0.8 + 0.3j, 1.1 - 0.2j])
def test_w_reflection_and_quasi_periodicity(ctx, y):
    from qseries.factorize import w_star_any_y

    ws = WSpec([1.5, 1.7, 1.9, 2.1])
    w = w_star(ws, y, ctx)
    assert rel(w_star(ws, 1 / y, ctx), -w / y**2) < 1e-9
    q = ctx.q
    shifted = w_star_any_y(ws, q * y, ctx).value * ctx.sqrt_q ** (ws.r - 4) * y ** (ws.r - 2)
    assert rel(shifted, w) < 1e-9


def test_sqrt_q_reduction_and_w5(ctx):
    a = [1.6, 1.8, 2.0]
    sq = ctx.sqrt_q
    y = 0.9 + 0.1j
    six = w_star(WSpec(a + [sq]), y, ctx)
    five = w_star(WSpec(a), y, ctx)
    assert rel(six, theta(y * sq, ctx) / q_euler(ctx) * five) < 1e-9
    assert rel(five, w5_star_product(a, y, ctx)) < 1e-9


def test_outside_annulus(ctx, spec2):
    with pytest.raises(OutsideAnnulus):
        psi(spec2, 1.2, 0.7, ctx)
    with pytest.raises(OutsideAnnulus):
        w_series(WSpec([0.2, 0.3, 0.4, 0.5]), 0.9, ctx)
