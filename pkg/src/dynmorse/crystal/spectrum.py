"""Critical-value spectra and the normalized log-counts cri(I)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

NEG_INF = float("-inf")


@dataclass(frozen=True)
class SpectrumHistogram:
    """Sorted (value, multiplicity) pairs of critical values on an n-site window."""

    entries: tuple[tuple[float, int], ...]
    n: int

    def __post_init__(self):
        if any(m <= 0 for _, m in self.entries):
            raise ValueError("multiplicities must be positive")

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    def count(self, interval: tuple[float, float], distinct_values: bool = False) -> int:
        a, b = interval
        inside = [m for v, m in self.entries if a < v < b]
        return len(inside) if distinct_values else sum(inside)


def spectrum(points: Sequence, n: int, value_tol: float = 1e-9) -> SpectrumHistogram:
    """Group critical points (anything with a ``value``) by value up to ``value_tol``."""
    values = sorted(float(getattr(p, "value", p)) for p in points)
    entries: list[list] = []
    for v in values:
        if entries and v - entries[-1][2] <= value_tol:
            entries[-1][1] += 1
            entries[-1][2] = v
        else:
            entries.append([v, 1, v])
    return SpectrumHistogram(tuple((v, m) for v, m, _ in entries), n)


def cri(hist: SpectrumHistogram, interval: tuple[float, float], distinct_values: bool = False) -> float:
    """(1/n) ln #(I): critical points (or distinct values) strictly inside I; -inf if none."""
    a, b = interval
    if not a < b:
        raise ValueError(f"interval ({a}, {b}) is empty or reversed")
    k = hist.count(interval, distinct_values)
    return math.log(k) / hist.n if k else NEG_INF
