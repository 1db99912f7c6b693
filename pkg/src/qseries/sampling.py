"""Seeded draws of admissible parameters and evaluation points."""

from __future__ import annotations

import cmath
import math
from typing import Callable, TypeVar

import numpy as np

from .errors import QSeriesError, SamplingError

GENERATOR_ID = "numpy.random.PCG64"
A_MODULI = (1.5, 3.0)
B_MODULI = (0.05, 0.25)
POCH_FLOOR = 1e-3
NODE_GAP = 1e-2
MAX_ATTEMPTS = 200

T = TypeVar("T")


class Sampler:
    """Wraps ``numpy.random.Generator(PCG64(seed))``.

    Every draw goes through this object, so a suite run is a pure function
    of its seed.
    """

    def __init__(self, seed: int):
        self.seed = int(seed)
        self.rng = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, lo: float, hi: float) -> float:
        return float(self.rng.uniform(lo, hi))

    def phase(self) -> complex:
        return cmath.exp(1j * self.uniform(-math.pi, math.pi))

    def log_modulus(self, lo: float, hi: float) -> float:
        return math.exp(self.uniform(math.log(lo), math.log(hi)))

    def complex_annulus(self, lo: float, hi: float) -> complex:
        """Log-uniform modulus in ``[lo, hi]``, uniform argument."""
        return self.log_modulus(lo, hi) * self.phase()

    def a_param(self) -> complex:
        return self.complex_annulus(*A_MODULI)

    def b_param(self) -> complex:
        return self.complex_annulus(*B_MODULI)

    def draw(self, make: Callable[["Sampler"], T], what: str, attempts: int = MAX_ATTEMPTS) -> T:
        """Call ``make`` until it returns without raising.

        ``make`` signals rejection with :class:`Reject` or any library error;
        after ``attempts`` failures SamplingError is raised.
        """
        last = None
        for _ in range(attempts):
            try:
                return make(self)
            except (Reject, QSeriesError, ZeroDivisionError) as exc:
                last = exc
        raise SamplingError(f"no admissible {what} in {attempts} draws (last rejection: {last})")


class Reject(Exception):
    """Raised by a sampling callback to discard the current draw."""


def require(cond: bool, why: str) -> None:
    if not cond:
        raise Reject(why)


def near_q_power(t: complex, q: complex, gap: float = NODE_GAP) -> bool:
    """True if ``t`` is within log-distance ``gap`` of some ``q^k``."""
    t = complex(t)
    if t == 0:
        return True
    k = round(math.log(abs(t)) / math.log(abs(q)))
    return abs(cmath.log(t / q**k)) < gap


__all__ = [
    "A_MODULI",
    "B_MODULI",
    "GENERATOR_ID",
    "MAX_ATTEMPTS",
    "NODE_GAP",
    "POCH_FLOOR",
    "Reject",
    "Sampler",
    "near_q_power",
    "require",
]
