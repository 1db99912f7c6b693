from __future__ import annotations

import pytest

from conftest import rel
from qseries.classical import (
    one_psi_one_rhs,
    psi_star_x1,
    q_gauss,
    six_psi_six,
    six_psi_six_scale,
    w6_star_product,
)
from qseries.errors import DomainError
from qseries.qcore import qpoch_inf, theta
from qseries.report import SuiteConfig
from qseries.sampling import Reject
from qseries.series import SeriesSpec, WSpec, psi, psi_eval, psi_star, w_series, w_star
from qseries.suites import poch_floor, run_suite


def test_q_gauss_euler_case(ctx):
    lhs, rhs = q_gauss(0, 0, 0.4, ctx)
    assert rel(rhs, 1 / qpoch_inf(0.4, ctx)) < 1e-14
    assert rel(lhs, rhs) < 1e-12


def test_q_gauss_trivial_and_generic(ctx):
    assert q_gauss(2.0, 0.7, 0, ctx) == (1, 1)
    lhs, rhs = q_gauss(2.0, 0.7, 0.4, ctx)
    assert rel(lhs, rhs) < 1e-11
    # 200-term fixed window, accumulated independently
    term, total = 1.0, 1.0
    for n in range(200):
        qn = 0.5**n
        term *= (1 - 2.0 * qn) * (1 - 0.7 * qn) / ((1 - 0.5 * qn) * (1 - 1.4 * 0.4 * qn)) * 0.4
        total += term
    assert rel(lhs, total) < 1e-13


def test_q_gauss_domain(ctx):
    with pytest.raises(DomainError):
        q_gauss(2.0, 0.7, 1.2, ctx)


def test_one_psi_one_q_binomial_case(ctx):
    # b = q with a x = 1 lands on theta(1) = 0
    v = psi_eval(SeriesSpec([2.0], [0.5]), 0.5, 1.0, ctx)
    assert one_psi_one_rhs(2.0, 0.5, 0.5, ctx) == 0
    assert abs(v.value) < 1e-12 * v.max_term
    want = qpoch_inf(0.25, ctx) * theta(1.2, ctx) / (
        qpoch_inf(0.6, ctx) * qpoch_inf(0.5 / 1.2, ctx) * qpoch_inf(0.5, ctx) * qpoch_inf(0.25, ctx))
    assert rel(one_psi_one_rhs(2.0, 0.5, 0.6, ctx), want) < 1e-14
    assert rel(psi(SeriesSpec([2.0], [0.5]), 0.6, 1.0, ctx), want) < 1e-10


def test_one_psi_one_matches_series_and_rescaling(ctx):
    for x in (0.6, 0.3 - 0.5j):
        direct = psi(SeriesSpec([2.0], [0.3]), x, 1.0, ctx)
        assert rel(direct, one_psi_one_rhs(2.0, 0.3, x, ctx)) < 1e-10
        t = 1.3
        assert rel(psi(SeriesSpec([2.0 * t], [0.3 * t]), x, 1 / t, ctx), direct) < 1e-10


def test_one_psi_one_domain(ctx):
    with pytest.raises(DomainError):
        one_psi_one_rhs(2.0, 0.3, 0.1, ctx)


def test_six_psi_six(ctx):
    a = [1.5, 1.7, 1.9, 2.1]
    lhs, rhs = six_psi_six(a, ctx.sqrt_q, ctx)
    assert abs(rhs) < 1e-15  # theta(q) = 0
    assert abs(lhs) < 1e-9 * six_psi_six_scale(a, ctx.sqrt_q, ctx)
    lhs, rhs = six_psi_six(a, 0.9, ctx)
    assert rel(lhs, rhs) < 1e-9
    assert rel(lhs, w_series(WSpec(a), 0.9, ctx)) < 1e-10
    assert rel(w_star(WSpec(a), 0.9, ctx), w6_star_product(a, 0.9, ctx)) < 1e-9


def test_six_psi_six_domain(ctx):
    with pytest.raises(DomainError):
        six_psi_six([0.5, 0.5, 0.5, 0.5], 0.9, ctx)


def test_psi_star_x1(ctx, spec2):
    assert psi_star_x1(spec2, 0.5, ctx) == 0
    s1 = SeriesSpec([2.0], [0.3])
    want = qpoch_inf(0.15, ctx) * theta(2.0 * 0.8, ctx)
    assert rel(psi_star_x1(s1, 0.8, ctx), want) < 1e-14
    # r = 1 is analytic up to x = 1 through the closed form
    assert rel(psi_star(s1, 0.999, 0.8, ctx), qpoch_inf(0.15, ctx) * theta(2.0 * 0.999 * 0.8, ctx)) < 1e-10


def test_pole_floor_predicate(ctx):
    with pytest.raises(Reject):
        poch_floor([2.0005], ctx)  # 1 - t q is about 2.5e-4
    with pytest.raises(Reject):
        poch_floor([1.0 + 5e-4], ctx)
    poch_floor([0.3 + 0.2j, 1.7], ctx)


def test_classical_samples_respect_floor():
    from qseries.qcore import QContext

    c = QContext(0.5)
    recs = run_suite(SuiteConfig("classical", 0.5, 3, samples=10))
    for r in recs:
        if r.identity_id != "q_gauss":
            continue
        a, b, x = (complex(r.inputs[k]) for k in ("a", "b", "x"))
        poch_floor([a * x, b * x, x, a * b * x, a, b], c)
