from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from qseries.cli import main
from qseries.report import parse_complex


def run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_basic(capsys):
    code, out, _ = run(capsys, "eval", "theta", "1.0", "--q", "0.5")
    assert code == 0 and abs(parse_complex(out)) < 1e-15
    code, out, _ = run(capsys, "eval", "qpoch", "0.25", "0", "--q", "0.5")
    assert code == 0 and out.strip() == "1+0i"


def test_eval_psi_star_r1_matches_closed_form(capsys):
    _, star, _ = run(capsys, "eval", "psi_star", "2", "0.3", "0.6", "0.8", "--q", "0.5")
    _, poch, _ = run(capsys, "eval", "qpoch_inf", "0.15", "--q", "0.5")
    _, th, _ = run(capsys, "eval", "theta", "0.96", "--q", "0.5")
    want = parse_complex(poch) * parse_complex(th)
    assert abs(parse_complex(star) - want) < 1e-12 * abs(want)


def test_eval_negative_literals(capsys):
    code, out, _ = run(capsys, "eval", "theta", "-0.7-0.2i", "--q", "0.3+0.2i")
    assert code == 0
    assert parse_complex(out) != 0


def test_eval_usage_errors(capsys):
    assert run(capsys, "eval", "nope", "1", "--q", "0.5")[0] == 2
    assert run(capsys, "eval", "theta", "1", "2", "--q", "0.5")[0] == 2
    assert run(capsys, "eval", "theta", "1x", "--q", "0.5")[0] == 2
    assert run(capsys, "eval", "psi", "1", "2", "3", "--q", "0.5")[0] == 2


def test_eval_domain_error(capsys):
    code, _, err = run(capsys, "eval", "psi", "2", "0.3", "0.01", "1", "--q", "0.5")
    assert code == 3 and "OutsideAnnulus" in err


def test_verify_classical(capsys, tmp_path):
    out = tmp_path / "r.jsonl"
    code, so, _ = run(capsys, "verify", "--suite", "classical", "--q", "0.5", "--seed", "7",
                      "--samples", "50", "--out", str(out))
    assert code == 0 and so.startswith("PASS")
    lines = out.read_text(encoding="utf-8").splitlines()
    assert json.loads(lines[0])["seed"] == 7
    assert all(json.loads(line)["pass"] for line in lines[1:])


def test_verify_theorem2_ids_and_determinism(capsys, tmp_path):
    paths = [tmp_path / "a.jsonl", tmp_path / "b.jsonl"]
    for p in paths:
        code, _, _ = run(capsys, "verify", "--suite", "theorem2", "--q", "0.5", "--seed", "7",
                         "--samples", "10", "--out", str(p))
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()
    ids = {json.loads(line)["identity_id"] for line in paths[0].read_text().splitlines()[1:]}
    assert {"A_rho_relation", "rho_functional_eq", "rho_integral_match", "bailey_symmetry"} <= ids


def test_verify_forced_failure(capsys):
    code, out, err = run(capsys, "verify", "--suite", "classical", "--q", "0.5", "--seed", "7",
                         "--samples", "5", "--tolerance-scale", "0.0001")
    assert code == 1 and err.startswith("FAIL")
    assert out.splitlines()[0].startswith("{")


def test_verify_bad_config(capsys):
    assert run(capsys, "verify", "--suite", "classical", "--q", "0.5", "--seed", "7", "--samples", "0")[0] == 2
    assert run(capsys, "verify", "--suite", "nope", "--q", "0.5", "--seed", "7")[0] == 2


def test_factorize_r1(capsys):
    code, out, _ = run(capsys, "factorize", "--r", "1", "--a", "2", "--b", "0.3", "--x", "0.5", "--q", "0.5")
    assert code == 0
    fields = dict(line.split(" = ") for line in out.splitlines())
    assert abs(parse_complex(fields["rho[0]"]) - 1.0) < 1e-9
    from qseries.qcore import QContext, qpoch_inf

    want = qpoch_inf(0.15, QContext(0.5))
    assert abs(parse_complex(fields["A"]) - want) < 1e-9 * abs(want)
    assert float(fields["residual"]) < 1e-8


def test_factorize_x1(capsys):
    code, out, _ = run(capsys, "factorize", "--a", "2,3", "--b", "0.1,0.15", "--x", "1", "--q", "0.5")
    assert code == 0
    fields = dict(line.split(" = ") for line in out.splitlines())
    reps = [parse_complex(fields[f"rho[{j}]"]) for j in range(2)]
    from qseries.factorize import same_class

    for t in (0.5, 1 / 3):
        assert any(same_class(r, t, 0.5, 1e-9) for r in reps)
    assert float(fields["residual"]) < 1e-8


def test_factorize_usage(capsys):
    assert run(capsys, "factorize", "--r", "2", "--a", "2", "--b", "0.3", "--x", "0.5", "--q", "0.5")[0] == 2


@pytest.mark.skipif(shutil.which("qs") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["qs", "eval", "q_euler", "--q", "0.5"], capture_output=True, text=True)
    assert res.returncode == 0
    assert abs(parse_complex(res.stdout) - 0.288788095086602) < 1e-14
