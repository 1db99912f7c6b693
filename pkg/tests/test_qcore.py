from __future__ import annotations

import cmath

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rel
from oracles import values as ov
from qseries.errors import DivisionByZero, DomainError, NotConverged
from qseries.qcore import QContext, q_euler, qpoch, qpoch_inf, qpoch_multi, theta, theta_prod

moduli = st.floats(0.2, 0.85)
phases = st.floats(-3.1, 3.1)


def test_qpoch_empty_and_negative(ctx):
    assert qpoch(0.3 + 0.2j, 0, ctx) == 1
    x = 0.3 + 0.2j
    assert rel(qpoch(x, -1, ctx), 1 / (1 - x / 0.5)) < 1e-15


def test_qpoch_reverse_order_oracle(ctx):
    want = 1.0
    for m in reversed(range(8)):
        want *= 1 - 0.25 * 0.5**m
    assert rel(qpoch(0.25, 8, ctx), want) < 1e-14
    assert rel(qpoch(0.25, 8, ctx), ov.QPOCH_8_025_Q05) < 1e-14


def test_qpoch_inf_values(ctx):
    assert qpoch_inf(0, ctx) == 1
    assert rel(qpoch_inf(0.25, ctx), ov.QPOCH_INF_025_Q05) < 1e-12
    x = 0.3 + 0.1j
    assert rel(qpoch_inf(x, ctx), (1 - x) * qpoch_inf(x * 0.5, ctx)) < ctx.eps
    assert rel(q_euler(ctx), ov.Q_EULER_Q05) < 1e-13


def test_qpoch_inf_log_space_oracle(ctx):
    s = sum(cmath.log(1 - 0.25 * 0.5**m) for m in range(64))
    assert rel(qpoch_inf(0.25, ctx), cmath.exp(s)) < 1e-12


def test_qpoch_multi(ctx):
    assert qpoch_multi([], 5, ctx) == 1
    assert qpoch_multi([0.2], 5, ctx) == qpoch(0.2, 5, ctx)
    assert rel(qpoch_multi([0.2, 0.3], 5, ctx), qpoch(0.2, 5, ctx) * qpoch(0.3, 5, ctx)) < 1e-14


def test_theta_values(ctx):
    assert theta(1, ctx) == 0
    x = 0.4 - 0.2j
    assert rel(theta(0.5 / x, ctx), theta(x, ctx)) < ctx.eps
    assert rel(theta(0.5 * 0.7, ctx), -theta(0.7, ctx) / 0.7) < ctx.eps
    assert rel(theta(0.7 - 0.2j, QContext(0.6)), ov.THETA_07M02I_Q06) < 1e-12
    assert rel(theta(0.4 - 0.2j, QContext(0.3 + 0.2j)), ov.THETA_04M02I_Q03P02I) < 1e-12


def test_theta_prod(ctx):
    xs = [0.3, 0.7 + 0.1j, -1.2j]
    want = theta(xs[0], ctx) * theta(xs[1], ctx) * theta(xs[2], ctx)
    assert rel(theta_prod(xs, ctx), want) < 1e-15


@settings(max_examples=40, deadline=None)
@given(r=moduli, t=phases, qr=st.floats(0.1, 0.85), qt=phases)
def test_theta_quasi_periodicity(r, t, qr, qt):
    c = QContext(qr * cmath.exp(1j * qt))
    x = r * cmath.exp(1j * t)
    q = c.q
    lhs = theta(q * x, c)
    rhs = -theta(x, c) / x
    # absolute floor: theta vanishes on the lattice q^Z
    assert abs(lhs - rhs) <= 1e-12 * (abs(lhs) + abs(rhs)) + 1e-14
    assert abs(theta(q / x, c) - theta(x, c)) <= 1e-12 * abs(theta(x, c)) + 1e-14


@settings(max_examples=40, deadline=None)
@given(r=st.floats(0.05, 3.0), t=phases, n=st.integers(-6, 6))
def test_qpoch_recursion(r, t, n):
    c = QContext(0.5)
    x = r * cmath.exp(1j * t)
    try:
        lhs = qpoch(x, n + 1, c)
        rhs = (1 - x * 0.5**n) * qpoch(x, n, c)
    except DivisionByZero:
        return
    assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs), 1e-300)


def test_context_validation(monkeypatch):
    for bad in (0.95, 1e-7, 1.0, 0.0):
        with pytest.raises(DomainError):
            QContext(bad)
    with pytest.raises(DomainError):
        QContext(0.5, eps=1e-2)
    with pytest.raises(DomainError):
        QContext(0.5, max_terms=10)
    monkeypatch.setenv("QS_MAX_TERMS", "70")
    assert QContext(0.5).max_terms == 70


def test_truncation_cap_reports_not_converged():
    c = QContext(0.9, max_terms=64)
    with pytest.raises(NotConverged):
        qpoch_inf(0.5, c)
