"""Command-line front end: ``qs eval``, ``qs verify`` and ``qs factorize``.

Exit codes: 0 success, 1 a verification failed, 2 usage error (unknown
operation, wrong arity, malformed literal), 3 domain or sampling error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

from . import __version__, classical, elliptic, factorize, qcore, series
from .errors import QSeriesError
from .qcore import QContext
from .report import SUITES, SuiteConfig, format_complex, parse_complex, render, summary
from .suites import run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


class UsageError(Exception):
    """Unknown operation, wrong arity or an unparsable argument."""


@dataclass(frozen=True)
class Operation:
    """A function reachable from ``qs eval``.

    ``arity`` is an exact count, or ``None`` with ``check`` validating a
    variable-length argument list.
    """

    func: Callable[[list[complex], QContext], complex]
    arity: int | None
    usage: str
    check: Callable[[int], bool] | None = None


def _as_int(v: complex, what: str) -> int:
    if v.imag != 0 or v.real != int(v.real):
        raise UsageError(f"{what} must be an integer, got {format_complex(v)}")
    return int(v.real)


def _spec_args(args: list[complex]) -> tuple[series.SeriesSpec, complex, complex]:
    r = (len(args) - 2) // 2
    return series.SeriesSpec(args[:r], args[r:2 * r]), args[-2], args[-1]


def _wspec_args(args: list[complex]) -> tuple[series.WSpec, complex]:
    return series.WSpec(args[:-1]), args[-1]


def _psi_arity(n: int) -> bool:
    return n >= 4 and n % 2 == 0


def _w_arity(n: int) -> bool:
    return n >= 2


OPERATIONS: dict[str, Operation] = {
    "theta": Operation(lambda a, c: qcore.theta(a[0], c), 1, "theta X"),
    "qpoch": Operation(lambda a, c: qcore.qpoch(a[0], _as_int(a[1], "n"), c), 2, "qpoch X N"),
    "qpoch_inf": Operation(lambda a, c: qcore.qpoch_inf(a[0], c), 1, "qpoch_inf X"),
    "q_euler": Operation(lambda a, c: qcore.q_euler(c), 0, "q_euler"),
    "psi": Operation(lambda a, c: series.psi(*_spec_args(a), c), None,
                     "psi A1..Ar B1..Br X Y", _psi_arity),
    "psi_star": Operation(lambda a, c: factorize.psi_star_general(*_spec_args(a), c).value, None,
                          "psi_star A1..Ar B1..Br X Y", _psi_arity),
    "w_series": Operation(lambda a, c: series.w_series(*_wspec_args(a), c), None,
                          "w_series A1..A(r-2) Y", _w_arity),
    "w_star": Operation(lambda a, c: factorize.w_star_any_y(*_wspec_args(a), c).value, None,
                        "w_star A1..A(r-2) Y", _w_arity),
    "one_psi_one_rhs": Operation(lambda a, c: classical.one_psi_one_rhs(a[0], a[1], a[2], c), 3,
                                 "one_psi_one_rhs A B X"),
    "six_psi_six_rhs": Operation(lambda a, c: classical.six_psi_six_rhs(a[:4], a[4], c), 5,
                                 "six_psi_six_rhs A1 A2 A3 A4 Y"),
    "theta_quotient": Operation(lambda a, c: elliptic.theta_quotient(a[0], c), 1, "theta_quotient X"),
    "jacobi_inverse": Operation(lambda a, c: elliptic.jacobi_inverse(a[0], c), 1, "jacobi_inverse Y"),
}


def _parse_complex(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError:
        raise UsageError(f"cannot parse complex literal {text!r} (expected a+bi)") from None


def _parse_list(text: str) -> list[complex]:
    return [_parse_complex(t) for t in text.split(",") if t.strip()]


def _context(text: str) -> QContext:
    return QContext(_parse_complex(text))


def cmd_eval(ns: argparse.Namespace) -> int:
    op = OPERATIONS.get(ns.name)
    if op is None:
        raise UsageError(f"unknown operation {ns.name!r}; known: {', '.join(sorted(OPERATIONS))}")
    args = [_parse_complex(t) for t in ns.args]
    ok = op.check(len(args)) if op.arity is None else len(args) == op.arity
    if not ok:
        raise UsageError(f"wrong number of arguments ({len(args)}); usage: {op.usage}")
    ctx = _context(ns.q)
    print(format_complex(op.func(args, ctx)))
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace) -> int:
    params = None
    if ns.a is not None or ns.b is not None:
        if ns.a is None or ns.b is None:
            raise UsageError("--a and --b must be given together")
        params = {"a": _parse_list(ns.a), "b": _parse_list(ns.b)}
    if not 0 <= ns.seed < 2**64:
        raise UsageError("seed must be a 64-bit unsigned integer")
    try:
        config = SuiteConfig(ns.suite, _parse_complex(ns.q), ns.seed, ns.samples, ns.tolerance_scale, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ctx = QContext(config.q)
    records = run_suite(config, ctx)
    text = render(config, records)
    line = summary(records)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(line)
    else:
        sys.stdout.write(text)
        print(line, file=sys.stderr)
    return EXIT_OK if all(r.passed for r in records) else EXIT_FAIL


def cmd_factorize(ns: argparse.Namespace) -> int:
    a = _parse_list(ns.a)
    b = _parse_list(ns.b)
    if ns.r is not None and not len(a) == len(b) == ns.r:
        raise UsageError(f"--r {ns.r} needs {ns.r} values in --a and --b")
    spec = series.SeriesSpec(a, b)
    ctx = _context(ns.q)
    res = factorize.factorize(spec, _parse_complex(ns.x), ctx)
    print(f"A = {format_complex(res.A)}")
    for j, c in enumerate(res.rhos):
        print(f"rho[{j}] = {format_complex(c.rep)}")
    print(f"residual = {res.residual:.3e}")
    print(f"exponent = {res.exponent}")
    print(f"product_defect = {res.product_defect:.3e}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # noqa: D102
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qs", description="Evaluate q-series and verify identities numerically.")
    p.add_argument("--version", action="version", version=f"qs {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate a registered operation")
    e.add_argument("name")
    e.add_argument("args", nargs="*")
    e.add_argument("--q", required=True)
    e.set_defaults(run=cmd_eval)

    v = sub.add_parser("verify", help="run a seeded verification suite")
    v.add_argument("--suite", required=True, choices=SUITES + ("all",))
    v.add_argument("--q", required=True)
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--samples", type=int, default=None)
    v.add_argument("--tolerance-scale", type=float, default=1.0)
    v.add_argument("--a", default=None, help="comma-separated numerator parameters")
    v.add_argument("--b", default=None, help="comma-separated denominator parameters")
    v.add_argument("--out", default=None)
    v.set_defaults(run=cmd_verify)

    f = sub.add_parser("factorize", help="factorize psi_star(x, .) into theta functions")
    f.add_argument("--r", type=int, default=None)
    f.add_argument("--a", required=True)
    f.add_argument("--b", required=True)
    f.add_argument("--x", required=True)
    f.add_argument("--q", required=True)
    f.set_defaults(run=cmd_factorize)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(_protect_negatives(list(sys.argv[1:] if argv is None else argv)))
        return ns.run(ns)
    except UsageError as exc:
        print(f"qs: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QSeriesError as exc:
        print(f"qs: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def _protect_negatives(argv: list[str]) -> list[str]:
    """Join ``--opt value`` pairs and put ``--`` before the operands of ``eval``,
    so argparse does not mistake negative literals for flags."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok == "--":
            out.extend(argv[i:])
            break
        if tok.startswith("--") and "=" not in tok and tok not in _FLAGS and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    if out and out[0] == "eval" and "--" not in out:
        flags = [t for t in out[1:] if t.startswith("--") or t == "-h"]
        rest = [t for t in out[1:] if not (t.startswith("--") or t == "-h")]
        out = ["eval"] + flags + ["--"] + rest
    return out


_FLAGS = ("--help", "--version")


if __name__ == "__main__":
    sys.exit(main())
