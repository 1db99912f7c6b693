"""Compare the compiled and pure-Python kernels.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each kernel is
timed on the same inputs under both backends; the last column is the speedup
of the compiled one.  The two results are also compared so a silent
divergence shows up here as well as in the test suite.
"""

from __future__ import annotations

import argparse
import timeit

from qseries import _pykernels

try:
    from qseries import _ckernels
except ImportError:  # extension not built
    _ckernels = None

EPS = 1e-15
MAX_TERMS = 4000
CONSEC = 3

CASES = {
    "qpoch_inf": (0.3 + 0.4j, 0.5, EPS, MAX_TERMS, CONSEC),
    "theta": (0.7 - 0.2j, 0.6, EPS, MAX_TERMS, CONSEC),
    "psi_sum": ((2.0, 3.0), (0.1, 0.15), 0.4 + 0.3j, 0.8 - 0.1j, 0.5, EPS, MAX_TERMS, CONSEC),
    "w_sum": ((2.0, 1.7j, -2.4, 1.9 + 0.3j), 0.9 + 0.2j, 0.5 / (2.0 * 1.7j * -2.4 * (1.9 + 0.3j)), 0.5,
              EPS, MAX_TERMS, CONSEC),
}


def bench(repeat: int) -> list[tuple[str, float, float | None, float]]:
    rows = []
    for name, args in CASES.items():
        py = getattr(_pykernels, name)
        t_py = min(timeit.repeat(lambda: py(*args), number=200, repeat=repeat)) / 200
        t_c = None
        diff = 0.0
        if _ckernels is not None:
            c = getattr(_ckernels, name)
            t_c = min(timeit.repeat(lambda: c(*args), number=200, repeat=repeat)) / 200
            diff = abs(complex(py(*args)[0]) - complex(c(*args)[0]))
        rows.append((name, t_py, t_c, diff))
    return rows


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    ns = p.parse_args()
    print(f"{'kernel':<10} {'python us':>11} {'cython us':>11} {'speedup':>8} {'|diff|':>9}")
    for name, t_py, t_c, diff in bench(ns.repeat):
        if t_c is None:
            print(f"{name:<10} {t_py * 1e6:11.2f} {'n/a':>11} {'n/a':>8} {'n/a':>9}")
        else:
            print(f"{name:<10} {t_py * 1e6:11.2f} {t_c * 1e6:11.2f} {t_py / t_c:8.1f} {diff:9.1e}")


if __name__ == "__main__":
    main()
