"""Report records and their newline-delimited JSON form."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from . import __version__
from .sampling import GENERATOR_ID

SUITES = ("classical", "theorem1", "theorem2", "vwp", "slater", "wronskian", "elliptic", "thetaspaces")


def format_complex(z: complex, digits: int = 15) -> str:
    """``re+imi`` (or ``re-imi``) with ``digits`` significant digits."""
    z = complex(z)
    re = _fmt(z.real, digits)
    im = _fmt(abs(z.imag), digits) if not math.isnan(z.imag) else "nan"
    sign = "-" if z.imag < 0 else "+"
    return f"{re}{sign}{im}i"


def _fmt(v: float, digits: int) -> str:
    if v == 0:
        return "0"
    return f"{v:.{digits}g}"


def parse_complex(text: str) -> complex:
    """Parse ``a``, ``bi``, ``a+bi`` or ``a-bi`` (``j`` is accepted for ``i``)."""
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty complex literal")
    s = s.replace("I", "i").replace("j", "i").replace("J", "i")
    if s.endswith("i"):
        s = s[:-1] + "j"
        if s in ("j", "+j", "-j"):
            s = s.replace("j", "1j")
    return complex(s)


def _serialize(v: Any) -> Any:
    if isinstance(v, complex):
        return format_complex(v)
    if isinstance(v, (list, tuple)):
        return [_serialize(u) for u in v]
    if isinstance(v, dict):
        return {k: _serialize(u) for k, u in v.items()}
    return v


@dataclass(frozen=True)
class SuiteConfig:
    """One ``verify`` run."""

    suite: str
    q: complex
    seed: int
    samples: int | None = None
    tolerance_scale: float = 1.0
    params: dict | None = None

    def __post_init__(self) -> None:
        if self.suite not in SUITES + ("all",):
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.samples is not None and self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not 1e-4 <= self.tolerance_scale <= 100.0:
            raise ValueError("tolerance_scale must lie in [1e-4, 100]")


@dataclass(frozen=True)
class ReportRecord:
    """One identity evaluated at one sample; ``pass`` is ``residual < tolerance``."""

    identity_id: str
    inputs: dict = field(default_factory=dict)
    residual: float = 0.0
    tolerance: float = 0.0
    runtime_ms: float | None = None

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tolerance)

    def to_json(self) -> str:
        body = {
            "identity_id": self.identity_id,
            "inputs": _serialize(self.inputs),
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "runtime_ms": self.runtime_ms,
        }
        return json.dumps(body, ensure_ascii=False)


def header(config: SuiteConfig) -> str:
    body = {
        "version": __version__,
        "suite": config.suite,
        "q": format_complex(config.q),
        "seed": config.seed,
        "samples": config.samples,
        "tolerance_scale": config.tolerance_scale,
        "generator": GENERATOR_ID,
    }
    return json.dumps(body, ensure_ascii=False)


def render(config: SuiteConfig, records: Iterable[ReportRecord]) -> str:
    lines = [header(config)] + [r.to_json() for r in records]
    return "\n".join(lines) + "\n"


def summary(records: Sequence[ReportRecord]) -> str:
    total = len(records)
    good = sum(r.passed for r in records)
    word = "PASS" if good == total else "FAIL"
    return f"{word} {good}/{total}"


__all__ = [
    "ReportRecord",
    "SUITES",
    "SuiteConfig",
    "format_complex",
    "header",
    "parse_complex",
    "render",
    "summary",
]
