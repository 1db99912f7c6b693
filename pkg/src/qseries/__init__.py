"""Numerical factorization of bilateral basic hypergeometric series."""

from __future__ import annotations

__version__ = "0.1.0"
