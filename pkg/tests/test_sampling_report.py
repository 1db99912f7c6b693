from __future__ import annotations

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qseries.errors import SamplingError
from qseries.report import ReportRecord, SuiteConfig, format_complex, parse_complex, render, summary
from qseries.sampling import GENERATOR_ID, Reject, Sampler, near_q_power
from qseries.suites import run_suite


def test_sampler_determinism():
    a, b = Sampler(42), Sampler(42)
    assert [a.complex_annulus(0.5, 2) for _ in range(5)] == [b.complex_annulus(0.5, 2) for _ in range(5)]
    assert Sampler(43).uniform(0, 1) != Sampler(42).uniform(0, 1)


def test_sampler_bounds():
    s = Sampler(3)
    for _ in range(200):
        assert 1.5 <= abs(s.a_param()) <= 3.0
        assert 0.05 <= abs(s.b_param()) <= 0.25


def test_draw_gives_up():
    def never(s):
        raise Reject("no")

    with pytest.raises(SamplingError):
        Sampler(1).draw(never, "nothing", attempts=5)


def test_near_q_power():
    assert near_q_power(0.25 * 1.001, 0.5)
    assert not near_q_power(0.35, 0.5)


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6))
def test_complex_round_trip(re, im):
    z = complex(re, im)
    back = parse_complex(format_complex(z, digits=17))
    assert back == z or (re == 0 and im == 0)


def test_format_complex():
    assert format_complex(1 - 2j) == "1-2i"
    assert format_complex(complex(0.5, -0.0)) == "0.5+0i"
    assert parse_complex("2.5-1i") == 2.5 - 1j
    assert parse_complex("-i") == -1j
    with pytest.raises(ValueError):
        parse_complex("abc")


def test_config_validation():
    with pytest.raises(ValueError):
        SuiteConfig("nonsense", 0.5, 1)
    with pytest.raises(ValueError):
        SuiteConfig("classical", 0.5, 1, samples=0)
    with pytest.raises(ValueError):
        SuiteConfig("classical", 0.5, 1, tolerance_scale=1e3)
    SuiteConfig("thetaspaces", 0.5, 1, tolerance_scale=1e-4)


def test_record_and_render():
    rec = ReportRecord("x", {"a": 1 + 1j}, 1e-12, 1e-9)
    body = json.loads(rec.to_json())
    assert list(body) == ["identity_id", "inputs", "residual", "tolerance", "pass", "runtime_ms"]
    assert body["pass"] is True and body["inputs"]["a"] == "1+1i"
    assert not ReportRecord("x", {}, 1e-9, 1e-9).passed
    cfg = SuiteConfig("classical", 0.5, 7)
    text = render(cfg, [rec])
    head = json.loads(text.splitlines()[0])
    assert head["generator"] == GENERATOR_ID and head["seed"] == 7 and head["q"] == "0.5+0i"
    assert summary([rec]) == "PASS 1/1"
    assert summary([rec, ReportRecord("y", {}, 1.0, 1e-9)]) == "FAIL 1/2"


def test_suite_determinism():
    cfg = SuiteConfig("elliptic", 0.5, 5, samples=4)
    assert render(cfg, run_suite(cfg)) == render(cfg, run_suite(cfg))


def test_tolerance_scale_applies():
    recs = run_suite(SuiteConfig("classical", 0.5, 2, samples=3, tolerance_scale=10.0))
    base = run_suite(SuiteConfig("classical", 0.5, 2, samples=3))
    assert all(abs(r.tolerance - 10 * b.tolerance) < 1e-20 for r, b in zip(recs, base))
