from __future__ import annotations

import pytest

from conftest import rel
from oracles import values as ov
from qseries.errors import GuardFailed
from qseries.qcore import QContext
from qseries.series import SeriesSpec
from qseries.thetaspaces import SampledFunction
from qseries.wronskian import (
    aa_relation_residual,
    bracket_residual,
    gustafson_ratio,
    gustafson_value,
    lambda_coeffs,
    psi_star_linear_relation_residual,
    qwronskian_step_check,
    recurrence_coeffs,
    solution_function,
    sqrt_q_remark_residual,
    swap_residual,
    weierstrass_residual,
    wronskian2,
    wronskian2_closed_form,
    wronskian_at_zero_residual,
)

Y, Z = 0.7 + 0.2j, -0.5 + 0.6j


def test_lambda_coeffs(spec2, spec3):
    for spec in (spec2, spec3, SeriesSpec([2.0], [0.3])):
        lam = lambda_coeffs(spec, 0.4, 0.5)
        assert abs(lam.values[0] - (0.4 - 1)) < 1e-15
    lam1 = lambda_coeffs(SeriesSpec([2.0], [0.3]), 0.4, 0.5).values
    assert abs(lam1[1] - (-2.0 * 0.4 + 0.3 / 0.5)) < 1e-15
    lam = lambda_coeffs(spec2, 0.4, 0.5)
    for y in (0.3, -1.2 + 0.4j, 2j, 0.8 - 0.8j):
        want = 0.4 * (1 - 2 * y) * (1 - 3 * y) - (1 - 0.1 * y / 0.5) * (1 - 0.15 * y / 0.5)
        assert abs(lam.polynomial(y) - want) < 1e-12 * max(1, abs(want))


def test_linear_relation(ctx, spec2, spec3):
    assert psi_star_linear_relation_residual(spec2, 0.4, 0.9, ctx) < 1e-9
    assert psi_star_linear_relation_residual(SeriesSpec([2.0], [0.3]), 0.6, 0.9, ctx) < 1e-10
    assert psi_star_linear_relation_residual(spec3, 0.3, 0.9, ctx) < 1e-8


def test_wronskian2(ctx, spec2):
    w = wronskian2(spec2, 0.4, Y, Z, ctx)
    assert rel(w, ov.WRONSKIAN2_X04_Q05) < 1e-10
    assert rel(w, wronskian2_closed_form(spec2, 0.4, Y, Z, ctx)) < 1e-9
    assert abs(wronskian2(spec2, 0.4, Y, Y, ctx)) < 1e-15
    assert swap_residual(spec2, 0.4, Y, Z, ctx) < 1e-10
    assert bracket_residual(spec2, 0.4, Y, Z, ctx) < 1e-9


def test_wronskian2_at_denominator_nodes(ctx, spec2):
    # y = q/b1, z = q/b2 is the choice that fixes the constant
    y, z = 0.5 / 0.1, 0.5 / 0.15
    x = 0.3 + 0.1j
    assert rel(wronskian2(spec2, x, y, z, ctx), wronskian2_closed_form(spec2, x, y, z, ctx)) < 1e-9


def test_zero_column_and_aa(ctx, spec2):
    x = 0.5 + 0.2j
    assert aa_relation_residual(spec2, x, ctx) < 1e-7
    assert wronskian_at_zero_residual(spec2, x, 0.9, ctx) < 1e-7
    assert weierstrass_residual(spec2, x, Y, Z, ctx) < 1e-9
    assert sqrt_q_remark_residual(spec2, 0.4, Y, ctx) < 1e-8


def test_gustafson(ctx, spec2, spec3):
    for spec, ys in ((spec2, [0.7 + 0.2j, -0.5 + 0.6j]), (spec3, [0.7 + 0.2j, -0.5 + 0.6j, 0.3 - 0.8j])):
        want = gustafson_value(spec, ctx)
        assert rel(gustafson_ratio(spec, 0.3, ys, ctx), want) < 1e-8
        assert rel(gustafson_ratio(spec, 0.25 + 0.1j, ys, ctx), want) < 1e-8
        assert rel(gustafson_ratio(spec, 0.3, [1.1 * y for y in ys][::-1], ctx), want) < 1e-8


def test_qwronskian_steps(ctx, spec2, spec3):
    s1 = SeriesSpec([2.0], [0.3])
    cases = [(s1, [0.9]), (spec2, [Y, Z]), (spec3, [Y, Z, 0.3 - 0.8j])]
    tols = [1e-10, 1e-9, 1e-8]
    for (spec, ys), tol in zip(cases, tols):
        fs = [solution_function(spec, y, ctx) for y in ys]
        assert qwronskian_step_check(fs, recurrence_coeffs(spec, ctx), 0.35, ctx) < tol


def test_qwronskian_guard(ctx, spec2):
    bad = SampledFunction(lambda x: x**2 + 1)
    good = solution_function(spec2, Y, ctx)
    with pytest.raises(GuardFailed):
        qwronskian_step_check([good, bad], recurrence_coeffs(spec2, ctx), 0.3, ctx)


def test_other_base():
    ctx = QContext(0.3 + 0.2j)
    spec = SeriesSpec([2.0, 3.0], [0.1, 0.15])
    assert rel(wronskian2(spec, 0.4, Y, Z, ctx), wronskian2_closed_form(spec, 0.4, Y, Z, ctx)) < 1e-9
