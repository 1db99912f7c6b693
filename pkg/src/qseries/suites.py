"""Seeded verification suites.

Each suite draws admissible points from a :class:`Sampler`, evaluates one or
more identities there and returns :class:`ReportRecord` values in draw order.
A suite is a pure function of ``(q, seed, samples, tolerance_scale, params)``.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

from . import classical, elliptic, factorize, thetaspaces, wronskian
from .qcore import QContext, qpoch_inf, theta
from .report import ReportRecord, SuiteConfig
from .sampling import NODE_GAP, POCH_FLOOR, Reject, Sampler, near_q_power, require
from .series import SeriesSpec, WSpec, psi, w_star_eval

DEFAULT_SAMPLES = {
    "classical": 50,
    "theorem1": 10,
    "theorem2": 10,
    "vwp": 20,
    "slater": 10,
    "wronskian": 50,
    "elliptic": 20,
    "thetaspaces": 10,
}

# largest tolerated ratio of term size to result in a cancelling sum
CANCELLATION_LIMIT = 1e4

STANDARD_A = (2.0, 3.0)
STANDARD_B = (0.1, 0.15)


# --------------------------------------------------------------------------
# admissibility helpers


def poch_floor(ts: Iterable[complex], ctx: QContext, floor: float = POCH_FLOOR) -> None:
    """Reject unless every factor ``1 - t q^m`` of every ``(t)_inf`` exceeds ``floor``."""
    q = ctx.q
    for t in ts:
        u = complex(t)
        while abs(u) > floor:
            require(abs(1.0 - u) >= floor, f"Pochhammer factor 1 - {u} below {floor}")
            u *= q
        require(abs(1.0 - u) >= floor, f"Pochhammer factor 1 - {u} below {floor}")


def theta_floor(ts: Iterable[complex], ctx: QContext, floor: float = POCH_FLOOR) -> None:
    q = ctx.q
    args = []
    for t in ts:
        t = complex(t)
        args += [t, q / t]
    poch_floor(args, ctx, floor)


def nodes_apart(nodes: list[complex], q: complex, gap: float = NODE_GAP) -> None:
    for i in range(len(nodes)):
        for j in range(i + 1, len(nodes)):
            require(not near_q_power(nodes[i] / nodes[j], q, gap), "nodes too close modulo q")


def well_conditioned(terms: Iterable[complex], total: complex, limit: float = CANCELLATION_LIMIT) -> None:
    """Reject when ``total`` is a sum of ``terms`` that cancels beyond ``limit``."""
    big = max(abs(t) for t in terms)
    require(abs(total) * limit >= big, f"cancellation ratio above {limit:g}")


def _record(out: list[ReportRecord], cfg: SuiteConfig, identity: str, inputs: dict, residual: float, tol: float) -> None:
    out.append(ReportRecord(identity, inputs, float(residual), tol * cfg.tolerance_scale))


def _spec_from_params(cfg: SuiteConfig, default_a, default_b) -> SeriesSpec:
    p = cfg.params or {}
    return SeriesSpec(p.get("a", default_a), p.get("b", default_b))


def _random_spec(s: Sampler, r: int) -> SeriesSpec:
    return SeriesSpec([s.a_param() for _ in range(r)], [s.b_param() for _ in range(r)])


def _x_in_annulus(s: Sampler, spec: SeriesSpec, ctx: QContext, lo: float = 0.2, hi: float = 0.85) -> complex:
    inner = abs(spec.ratio) * (1.0 + 10 * ctx.margin)
    return s.complex_annulus(max(lo, 2 * inner), hi)


def _fundamental(s: Sampler, ctx: QContext) -> complex:
    return s.complex_annulus(abs(ctx.q), 1.0)


# --------------------------------------------------------------------------
# classical


def suite_classical(cfg: SuiteConfig, ctx: QContext, n: int) -> list[ReportRecord]:
    s = Sampler(cfg.seed)
    out: list[ReportRecord] = []
    q = ctx.q
    for i in range(n):
        def gauss(s: Sampler):
            a = s.complex_annulus(0.2, 2.5)
            b = s.complex_annulus(0.2, 2.5)
            x = s.complex_annulus(0.05, 0.8)
            poch_floor([a * x, b * x, x, a * b * x, a, b, q], ctx)
            lhs, rhs = classical.q_gauss(a, b, x, ctx)
            return {"a": a, "b": b, "x": x}, abs(lhs - rhs) / abs(rhs)

        inputs, res = s.draw(gauss, "q-Gauss point")
        _record(out, cfg, "q_gauss", inputs, res, 1e-9)

        def one_psi_one(s: Sampler):
            a, b = s.a_param(), s.b_param()
            y = s.complex_annulus(0.7, 1.4)
            lo = abs(b / a) * 1.5
            x = s.complex_annulus(lo, 0.85)
            ay, by = a * y, b * y
            poch_floor([x, by / (ax := ay * x), by, q / ay, by / ay], ctx)
            theta_floor([ax], ctx)
            lhs = psi(SeriesSpec([a], [b]), x, y, ctx)
            rhs = classical.one_psi_one_rhs(ay, by, x, ctx)
            return {"a": a, "b": b, "x": x, "y": y}, abs(lhs - rhs) / abs(rhs)

        inputs, res = s.draw(one_psi_one, "1psi1 point")
        _record(out, cfg, "one_psi_one", inputs, res, 1e-9)

        def six_psi_six(s: Sampler):
            a = [s.a_param() for _ in range(4)]
            y = s.complex_annulus(0.6, 1.6)
            pairs = [q / (a[i] * a[j]) for i in range(4) for j in range(i + 1, 4)]
            poch_floor(pairs + [q / (v * y) for v in a] + [q * y / v for v in a] + [q / math.prod(a)], ctx)
            theta_floor([y * y], ctx)
            lhs, rhs = classical.six_psi_six(a, y, ctx)
            return {"a": a, "y": y}, abs(lhs - rhs) / abs(rhs)

        inputs, res = s.draw(six_psi_six, "6psi6 point")
        _record(out, cfg, "six_psi_six", inputs, res, 1e-8)

        def x1(s: Sampler):
            spec = _random_spec(s, 2)
            y = _fundamental(s, ctx)
            theta_floor([v * y for v in spec.a], ctx)
            poch_floor([spec.ratio], ctx)
            got = factorize.psi2_star_continued(spec, 1.0, y, ctx).value
            want = classical.psi_star_x1(spec, y, ctx)
            return {"a": list(spec.a), "b": list(spec.b), "y": y}, abs(got - want) / abs(want)

        inputs, res = s.draw(x1, "x = 1 point")
        _record(out, cfg, "x1_factorization", inputs, res, 1e-9)
    return out


# --------------------------------------------------------------------------
# general factorization (suite "theorem1")


def suite_theorem1(cfg: SuiteConfig, ctx: QContext, n: int) -> list[ReportRecord]:
    s = Sampler(cfg.seed)
    out: list[ReportRecord] = []
    q = ctx.q
    for r in (2, 3):
        for i in range(n):
            def point(s: Sampler):
                spec = _random_spec(s, r)
                x = _x_in_annulus(s, spec, ctx)
                poch_floor([x, spec.ratio / x] + [bj / ak for bj in spec.b for ak in spec.a], ctx)
                fr = factorize.factorize(spec, x, ctx, ys=[])
                ys = [_fundamental(s, ctx) for _ in range(20)]
                res = factorize.reconstruction_residual(spec, x, fr.A, fr.rhos, ys, ctx)
                return spec, x, fr, res

            spec, x, fr, res = s.draw(point, f"r = {r} factorization point")
            inputs = {"a": list(spec.a), "b": list(spec.b), "x": x}
            _record(out, cfg, f"reconstruction_r{r}", inputs, res, 1e-8)
            _record(out, cfg, f"rho_product_r{r}", dict(inputs, k=fr.exponent), fr.product_defect, 1e-8)

    for i in range(n):
        def r1(s: Sampler):
            a, b = s.a_param(), s.b_param()
            spec = SeriesSpec([a], [b])
            x = _x_in_annulus(s, spec, ctx)
            theta_floor([a * x], ctx)
            fr = factorize.factorize(spec, x, ctx)
            rho_def = factorize.q_exponent(fr.rhos[0].rep * a * x, q)[1]
            want = qpoch_inf(b / a, ctx)
            return spec, x, rho_def, abs(fr.A - want) / abs(want)

        spec, x, rho_def, a_def = s.draw(r1, "r = 1 point")
        inputs = {"a": list(spec.a), "b": list(spec.b), "x": x}
        _record(out, cfg, "rho_r1", inputs, rho_def, 1e-9)
        _record(out, cfg, "A_r1", inputs, a_def, 1e-9)
    return out


# --------------------------------------------------------------------------
# the 2psi2 series (suite "theorem2")

THEOREM2_TOL = {
    "A_rho_relation": 1e-7,
    "A_ratio_relations": 1e-7,
    "rho_functional_eq": 1e-7,
    "rho_fe_multiplicativity": 1e-7,
    "rho_integral_match": 1e-7,
    "bailey_symmetry": 1e-10,
}


def _theorem2_guards(spec2: SeriesSpec, x: complex, ctx: QContext) -> None:
    q = ctx.q
    (a1, a2), (b1, b2) = spec2.a, spec2.b
    require(abs(1.0 - q * x) >= 1e-3, "1 - qx too small")
    require(abs(b1 * b2 - a1 * a2 * q * q * x) >= 1e-3, "b1 b2 - a1 a2 q^2 x too small")
    for k in (-1, 0, 1, 2, 3):
        require(factorize.branch_point_margin(spec2, q**k * x, ctx) >= 1e-3, "too close to a branch point")


def suite_theorem2(cfg: SuiteConfig, ctx: QContext, n: int) -> list[ReportRecord]:
    s = Sampler(cfg.seed)
    out: list[ReportRecord] = []
    spec2 = _spec_from_params(cfg, STANDARD_A, STANDARD_B)
    for i in range(n):
        def point(s: Sampler):
            x = s.complex_annulus(0.3, 0.85)
            y = _fundamental(s, ctx)
            _theorem2_guards(spec2, x, ctx)
            return x, y, factorize.theorem2_residuals(spec2, x, y, ctx)

        x, y, res = s.draw(point, "2psi2 point")
        for key, tol in THEOREM2_TOL.items():
            inputs = {"a": list(spec2.a), "b": list(spec2.b), "x": x}
            if key == "bailey_symmetry":
                inputs["y"] = y
            _record(out, cfg, key, inputs, res[key], tol)
    for i in range(min(n, 5)):
        def zero_set(s: Sampler):
            x = s.complex_annulus(0.3, 0.85)
            _, x2 = factorize.bailey_substitution(spec2, x)
            require(abs(x2) < 0.9, "substituted point outside the direct region")
            return x, factorize.bailey_zero_set_residual(spec2, x, ctx)

        x, res = s.draw(zero_set, "Bailey substitution point")
        _record(out, cfg, "bailey_zero_set", {"a": list(spec2.a), "b": list(spec2.b), "x": x}, res, 1e-7)
    return out


# --------------------------------------------------------------------------
# very-well-poised series


def _w_guards(a: list[complex], ys: Iterable[complex], ctx: QContext) -> None:
    q = ctx.q
    for y in ys:
        poch_floor([q / (v * y) for v in a] + [q * y / v for v in a], ctx)
        theta_floor([y * y], ctx)


def suite_vwp(cfg: SuiteConfig, ctx: QContext, n: int) -> list[ReportRecord]:
    s = Sampler(cfg.seed)
    out: list[ReportRecord] = []
    sq = ctx.sqrt_q
    for i in range(n):
        for r in (3, 4):
            def zero(s: Sampler):
                a = [s.a_param() for _ in range(r - 2)]
                y = s.complex_annulus(0.6, 1.6)
                _w_guards(a, [y], ctx)
                v = w_star_eval(WSpec(a), y, ctx)
                return a, y, abs(v.value) / v.max_term

            a, y, res = s.draw(zero, f"_{r}W_{r} point")
            _record(out, cfg, f"w{r}_zero", {"a": a, "y": y}, res, 1e-10)

        def six(s: Sampler):
            a = [s.a_param() for _ in range(4)]
            y1 = s.complex_annulus(0.6, 1.6)
            y2 = s.complex_annulus(0.6, 1.6)
            _w_guards(a, [y1, y2], ctx)
            w = WSpec(a)
            for v in (w_star_eval(w, y1, ctx), w_star_eval(w, y2, ctx)):
                well_conditioned([v.max_term], v.value)
            g1 = w_star_eval(w, y1, ctx).value / theta(y1 * y1, ctx)
            g2 = w_star_eval(w, y2, ctx).value / theta(y2 * y2, ctx)
            prod = classical.w6_star_product(a, y1, ctx) / theta(y1 * y1, ctx)
            return a, y1, y2, abs(g1 - g2) / abs(g1), abs(g1 - prod) / abs(prod)

        a, y1, y2, c_res, p_res = s.draw(six, "_6W_6 point")
        _record(out, cfg, "w6_constancy", {"a": a, "y": [y1, y2]}, c_res, 1e-9)
        _record(out, cfg, "w6_product", {"a": a, "y": y1}, p_res, 1e-9)

        def five(s: Sampler):
            a = [s.a_param() for _ in range(3)]
            y = s.complex_annulus(0.6, 1.6)
            _w_guards(a + [sq], [y], ctx)
            theta_floor([y * sq, y, -y], ctx)
            v5 = w_star_eval(WSpec(a), y, ctx)
            well_conditioned([v5.max_term], v5.value)
            lhs, rhs = classical.sqrt_q_reduction(a, y, ctx)
            red = abs(lhs - rhs) / abs(rhs)
            w5 = v5.value
            p5 = classical.w5_star_product(a, y, ctx)
            return a, y, red, abs(w5 - p5) / abs(p5)

        a, y, red, p5 = s.draw(five, "_5W_5 point")
        _record(out, cfg, "sqrt_q_reduction_65", {"a": a, "y": y}, red, 1e-9)
        _record(out, cfg, "w5_product", {"a": a, "y": y}, p5, 1e-9)

        def eight(s: Sampler):
            a = [s.a_param() for _ in range(6)]
            ys = [s.complex_annulus(0.6, 1.6) for _ in range(3)]
            _w_guards(a, ys, ctx)
            fit = factorize.fit_w8(WSpec(a), ctx, ys)
            return a, ys, fit.residual

        a, ys, res = s.draw(eight, "_8W_8 point")
        _record(out, cfg, "w8_fit", {"a": a, "y": ys}, res, 1e-8)
    return out


# --------------------------------------------------------------------------
# Slater expansions


def suite_slater(cfg: SuiteConfig, ctx: QContext, n: int) -> list[ReportRecord]:
    s = Sampler(cfg.seed)
    out: list[ReportRecord] = []
    q = ctx.q
    for i in range(n):
        def general(s: Sampler):
            spec = _random_spec(s, 2)
            x = _x_in_annulus(s, spec, ctx)
            lo, hi = 0.5, 1.8
            y = s.complex_annulus(lo, hi)
            zs = [s.complex_annulus(lo, hi) for _ in range(2)]
            nodes_apart(zs, q)
            c = spec.a_prod * x
            theta_floor([c * zs[0] * zs[1]], ctx)
            for v in [y] + zs:
                poch_floor([q / (aj * v) for aj in spec.a] + [bj * v for bj in spec.b], ctx)
            res = thetaspaces.slater_general_check(spec, x, y, zs, ctx)
            return {"a": list(spec.a), "b": list(spec.b), "x": x, "y": y, "z": zs}, res

        inputs, res = s.draw(general, "Slater r = 2 point")
        _record(out, cfg, "slater_general_r2", inputs, res, 1e-9)

        for r, count in ((8, 2), (5, 1)):
            def vwp(s: Sampler):
                a = [s.a_param() for _ in range(r - 2)]
                y = s.complex_annulus(0.6, 1.6)
                zs = [s.complex_annulus(0.6, 1.6) for _ in range(count)]
                nodes_apart(zs + [1.0 / z for z in zs], q)
                _w_guards(a, [y] + zs, ctx)
                theta_floor([z * ctx.sqrt_q for z in [y] + zs] + [q * zs[0] * zs[-1]], ctx)
                return {"a": a, "y": y, "z": zs}, thetaspaces.slater_vwp_check(WSpec(a), y, zs, ctx)

            inputs, res = s.draw(vwp, f"Slater r = {r} point")
            _record(out, cfg, f"slater_vwp_r{r}", inputs, res, 1e-8)
    return out


# --------------------------------------------------------------------------
# Wronskians


def suite_wronskian(cfg: SuiteConfig, ctx: QContext, n: int) -> list[ReportRecord]:
    s = Sampler(cfg.seed)
    out: list[ReportRecord] = []
    q = ctx.q
    spec2 = _spec_from_params(cfg, STANDARD_A, STANDARD_B)
    spec3 = SeriesSpec([2.0, 3.0, 1.5], [0.1, 0.15, 0.2])
    base = {"a": list(spec2.a), "b": list(spec2.b)}
    for i in range(n):
        def triple(s: Sampler):
            x = s.complex_annulus(0.2, 0.85)
            y = _fundamental(s, ctx)
            z = _fundamental(s, ctx)
            nodes_apart([x, y, z], q)
            theta_floor([spec2.a_prod * x * y * z], ctx)
            t1, t2 = wronskian.wronskian2_terms(spec2, x, y, z, ctx)
            well_conditioned([t1, t2], t1 - t2)
            return x, y, z, (wronskian.wronskian2_residual(spec2, x, y, z, ctx),
                             wronskian.bracket_residual(spec2, x, y, z, ctx))

        x, y, z, (w_res, b_res) = s.draw(triple, "Wronskian triple")
        inputs = dict(base, x=x, y=y, z=z)
        _record(out, cfg, "wronskian2_closed_form", inputs, w_res, 1e-9)
        _record(out, cfg, "bracket_form", inputs, b_res, 1e-9)

    for i in range(min(n, 10)):
        for spec, tag in ((spec2, "r2"), (spec3, "r3")):
            def gus(s: Sampler):
                x = s.complex_annulus(0.3, 0.85)
                ys = [_fundamental(s, ctx) for _ in range(spec.r)]
                nodes_apart(ys, q)
                theta_floor([spec.a_prod * math.prod(ys) * x], ctx)
                cond = thetaspaces.det_condition(wronskian.gustafson_matrix(spec, x, ys, ctx))
                require(cond <= CANCELLATION_LIMIT, "Gustafson determinant cancels")
                got = wronskian.gustafson_ratio(spec, x, ys, ctx)
                want = wronskian.gustafson_value(spec, ctx)
                return x, ys, abs(got - want) / abs(want)

            x, ys, res = s.draw(gus, f"Gustafson {tag} point")
            _record(out, cfg, f"gustafson_{tag}", {"a": list(spec.a), "b": list(spec.b), "x": x, "y": ys}, res, 1e-8)

        for spec, tag in ((spec2, "n2"), (spec3, "n3")):
            def step(s: Sampler):
                x = s.complex_annulus(0.3, 0.8)
                ys = [_fundamental(s, ctx) for _ in range(spec.r)]
                nodes_apart(ys + [x], q)
                fs = [wronskian.solution_function(spec, v, ctx) for v in ys]
                for u in (x, q * x):
                    cond = thetaspaces.det_condition(wronskian.qwronskian_matrix(fs, u, ctx))
                    require(cond <= CANCELLATION_LIMIT, "q-Wronskian determinant cancels")
                res = wronskian.qwronskian_step_check(fs, wronskian.recurrence_coeffs(spec, ctx), x, ctx)
                return x, ys, res

            x, ys, res = s.draw(step, f"q-Wronskian {tag} point")
            _record(out, cfg, f"qwronskian_step_{tag}", {"a": list(spec.a), "b": list(spec.b), "x": x, "y": ys}, res, 1e-9)

        def rho_forms(s: Sampler):
            x = s.complex_annulus(0.3, 0.8)
            y = _fundamental(s, ctx)
            z = _fundamental(s, ctx)
            nodes_apart([y, z], q)
            t1, t2, _ = wronskian.weierstrass_terms(spec2, x, y, z, ctx)
            well_conditioned([t1, t2], t1 - t2)
            return x, y, z, (wronskian.weierstrass_residual(spec2, x, y, z, ctx),
                             wronskian.aa_relation_residual(spec2, x, ctx),
                             wronskian.sqrt_q_remark_residual(spec2, x, y, ctx))

        x, y, z, (w3, aa, sqr) = s.draw(rho_forms, "Wronskian rho point")
        _record(out, cfg, "weierstrass_three_term", dict(base, x=x, y=y, z=z), w3, 1e-9)
        _record(out, cfg, "A_A_product", dict(base, x=x), aa, 1e-7)
        _record(out, cfg, "sqrt_q_remark", dict(base, x=x, y=y), sqr, 1e-8)

        for spec, tag, tol in ((spec2, "r2", 1e-9), (spec3, "r3", 1e-8)):
            def lin(s: Sampler):
                x = s.complex_annulus(0.3, 0.8)
                y = _fundamental(s, ctx)
                return x, y, wronskian.psi_star_linear_relation_residual(spec, x, y, ctx)

            x, y, res = s.draw(lin, "linear relation point")
            _record(out, cfg, f"linear_relation_{tag}", {"a": list(spec.a), "b": list(spec.b), "x": x, "y": y}, res, tol)
    return out


# --------------------------------------------------------------------------
# elliptic


def suite_elliptic(cfg: SuiteConfig, ctx: QContext, n: int) -> list[ReportRecord]:
    s = Sampler(cfg.seed)
    out: list[ReportRecord] = []
    for i in range(n):
        def round_trip(s: Sampler):
            y = s.complex_annulus(1e-2, 1e2)
            x = elliptic.jacobi_inverse(y, ctx)
            back = elliptic.theta_quotient(x, ctx)
            return y, abs(back - y) / abs(y)

        y, res = s.draw(round_trip, "quotient value")
        _record(out, cfg, "jacobi_round_trip", {"y": y}, res, 1e-8)

        def ambiguity(s: Sampler):
            x0 = _fundamental(s, ctx)
            theta_floor([x0, -x0], ctx)
            y0 = elliptic.theta_quotient(x0, ctx)
            worst = 0.0
            for xs in elliptic.solution_set(x0, ctx):
                worst = max(worst, abs(elliptic.theta_quotient(xs, ctx) - y0) / abs(y0))
            return x0, worst

        x0, res = s.draw(ambiguity, "solution-set point")
        _record(out, cfg, "solution_set", {"x": x0}, res, 1e-9)
    return out


# --------------------------------------------------------------------------
# theta spaces


def suite_thetaspaces(cfg: SuiteConfig, ctx: QContext, n: int) -> list[ReportRecord]:
    s = Sampler(cfg.seed)
    out: list[ReportRecord] = []
    q = ctx.q
    spec2 = _spec_from_params(cfg, STANDARD_A, STANDARD_B)
    for i in range(n):
        def membership(s: Sampler):
            rho = s.complex_annulus(0.5, 1.8)
            x0 = s.complex_annulus(0.2, 0.85)
            xs = [s.complex_annulus(0.5, 1.8) for _ in range(10)]
            f1 = thetaspaces.SampledFunction(lambda x: theta(x / rho, ctx), "theta(x/rho)")
            r1 = thetaspaces.theta_space_residual(f1, thetaspaces.ThetaSpaceTag(1, 1.0 / rho), xs, ctx)
            f2 = thetaspaces.SampledFunction(lambda y: factorize.psi_star_any_y(spec2, x0, y, ctx).value, "psi_star")
            r2 = thetaspaces.theta_space_residual(f2, thetaspaces.ThetaSpaceTag(2, spec2.a_prod * x0), xs, ctx)
            return rho, x0, r1, r2

        rho, x0, r1, r2 = s.draw(membership, "membership point")
        _record(out, cfg, "theta_membership", {"rho": rho}, r1, 1e-10)
        _record(out, cfg, "psi_membership", {"x": x0}, r2, 1e-9)

        def theta2(s: Sampler):
            al = s.complex_annulus(0.5, 1.8)
            c = s.complex_annulus(0.5, 1.8)
            xs = [s.complex_annulus(0.5, 1.8) for _ in range(5)]
            f = thetaspaces.theta_product_function([al, c / al], ctx)
            return al, c, thetaspaces.reflection_residual(f, c, xs, ctx)

        al, c, res = s.draw(theta2, "Theta_2 reflection point")
        _record(out, cfg, "theta2_reflection", {"alpha": al, "c": c}, res, 1e-10)

        def omega(s: Sampler):
            c = s.complex_annulus(0.5, 1.8)
            cp = s.complex_annulus(0.5, 1.8)
            al = [s.complex_annulus(0.5, 1.8) for _ in range(2)]
            zs = [s.complex_annulus(0.5, 1.8) for _ in range(3)]
            nodes_apart(zs + [q / (c * z) for z in zs], q)
            x = s.complex_annulus(0.5, 1.8)
            g = thetaspaces.theta_product_function([al[0], cp / al[0]], ctx)
            f = thetaspaces.omega_product(g, c, ctx)
            return c, zs, thetaspaces.omega_expansion_residual(f, c, zs, x, ctx)

        c, zs, res = s.draw(omega, "Omega expansion point")
        _record(out, cfg, "omega_expansion", {"c": c, "z": zs}, res, 1e-9)

        def omega_psi(s: Sampler):
            x0 = s.complex_annulus(0.2, 0.85)
            c = spec2.a_prod * x0
            zs = [s.complex_annulus(0.5, 1.8) for _ in range(3)]
            nodes_apart(zs + [q / (c * z) for z in zs], q)
            y = s.complex_annulus(0.5, 1.8)
            g = thetaspaces.SampledFunction(lambda u: factorize.psi_star_any_y(spec2, x0, u, ctx).value, "psi_star")
            f = thetaspaces.omega_product(g, c, ctx)
            return x0, zs, thetaspaces.omega_expansion_residual(f, c, zs, y, ctx)

        x0, zs, res = s.draw(omega_psi, "psi Omega point")
        _record(out, cfg, "omega_psi_product_r2", {"x": x0, "z": zs}, res, 1e-8)

        def sign(s: Sampler):
            c = s.complex_annulus(0.5, 1.8)
            al = s.complex_annulus(0.5, 1.8)
            xs = [s.complex_annulus(0.5, 1.8) for _ in range(5)]
            g = thetaspaces.omega_product(thetaspaces.theta_product_function([al], ctx), c, ctx)
            f = thetaspaces.sign_lemma_function(g, c, ctx)
            return c, al, thetaspaces.reflection_residual(f, c, xs, ctx, sign=-1)

        c, al, res = s.draw(sign, "sign lemma point")
        _record(out, cfg, "omega_sign_lemma", {"c": c, "alpha": al}, res, 1e-10)

        for deg in (2, 3):
            def rank(s: Sampler):
                c = s.complex_annulus(0.5, 1.8)
                fs = []
                for _ in range(deg + 1):
                    al = [s.complex_annulus(0.5, 1.8) for _ in range(deg - 1)]
                    fs.append(thetaspaces.theta_product_function(al + [c / math.prod(al)], ctx))
                xs = [s.complex_annulus(0.5, 1.8) for _ in range(deg + 1)]
                nodes_apart(xs, q)
                over = thetaspaces.singular_value_ratio(fs, xs)
                square = thetaspaces.singular_value_ratio(fs[:deg], xs[:deg])
                require(square > 1e-6, "square sample matrix ill conditioned")
                return c, over

            c, over = s.draw(rank, f"Theta_{deg} rank point")
            _record(out, cfg, f"dimension_gap_n{deg}", {"c": c}, over, 1e-8)

        def det_ratio(s: Sampler):
            x0 = s.complex_annulus(0.3, 0.85)
            f1 = thetaspaces.SampledFunction(lambda y: factorize.psi_star_any_y(spec2, x0, y, ctx).value, "P(x,y)")
            f2 = thetaspaces.SampledFunction(lambda y: y * factorize.psi_star_any_y(spec2, q * x0, y, ctx).value, "yP(qx,y)")
            xss = [[_fundamental(s, ctx) for _ in range(2)] for _ in range(2)]
            for nodes in xss:
                nodes_apart(nodes, q)
                theta_floor([spec2.a_prod * x0 * nodes[0] * nodes[1]], ctx)
                cond = thetaspaces.det_condition([[f(v) for v in nodes] for f in (f1, f2)])
                require(cond <= CANCELLATION_LIMIT, "sample determinant cancels")
            return x0, thetaspaces.theta_det_ratio([f1, f2], xss, spec2.a_prod * x0, ctx)

        x0, res = s.draw(det_ratio, "determinant point")
        _record(out, cfg, "theta_det_ratio", {"x": x0}, res, 1e-8)
    return out


SUITE_FUNCS: dict[str, Callable[[SuiteConfig, QContext, int], list[ReportRecord]]] = {
    "classical": suite_classical,
    "theorem1": suite_theorem1,
    "theorem2": suite_theorem2,
    "vwp": suite_vwp,
    "slater": suite_slater,
    "wronskian": suite_wronskian,
    "elliptic": suite_elliptic,
    "thetaspaces": suite_thetaspaces,
}


def run_suite(cfg: SuiteConfig, ctx: QContext | None = None) -> list[ReportRecord]:
    """Records of ``cfg.suite`` (every suite in turn for ``all``)."""
    if ctx is None:
        ctx = QContext(cfg.q)
    names = list(SUITE_FUNCS) if cfg.suite == "all" else [cfg.suite]
    out: list[ReportRecord] = []
    for name in names:
        n = cfg.samples if cfg.samples is not None else DEFAULT_SAMPLES[name]
        out.extend(SUITE_FUNCS[name](cfg, ctx, n))
    return out


__all__ = [
    "CANCELLATION_LIMIT",
    "DEFAULT_SAMPLES",
    "Reject",
    "SUITE_FUNCS",
    "THEOREM2_TOL",
    "nodes_apart",
    "poch_floor",
    "run_suite",
    "theta_floor",
    "well_conditioned",
]
