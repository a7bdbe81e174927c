"""Exact and log-space counts of monomial classes in the product model.

A monomial on n sites assigns one basis class to every site; its degree is the
sum of the class degrees and its level the mean of the class levels.  Counting
is done per *composition*: how many sites carry each distinct (degree, level)
type.  The multinomial weight of a composition is the number of monomials it
stands for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.special import gammaln, logsumexp

from .spec import MoleculeSpec, as_fraction

NEG_INF = float("-inf")
MAX_COMPOSITIONS = 6_000_000


@lru_cache(maxsize=512)
def binomial_row(N: int) -> tuple[int, ...]:
    """C(N, k) for k = 0..N by the multiplicative recurrence."""
    row = [1]
    for k in range(N):
        row.append(row[-1] * (N - k) // (k + 1))
    return tuple(row)


def _multinomial_weight(n: int, parts, mults) -> int:
    w, rest = 1, n
    for pos, (kt, mult) in enumerate(zip(parts, mults)):
        if pos < len(parts) - 1:
            w *= binomial_row(rest)[kt]
        if mult != 1:
            w *= mult ** kt
        rest -= kt
    return w


def n_compositions(n: int, k: int) -> int:
    return math.comb(n + k - 1, k - 1)


@lru_cache(maxsize=64)
def compositions(n: int, k: int) -> np.ndarray:
    """All k-part weak compositions of n as an (N, k) array, lexicographic."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if n_compositions(n, k) > MAX_COMPOSITIONS:
        raise ValueError(
            f"{n_compositions(n, k)} compositions of n={n} into {k} parts exceeds the "
            f"enumeration cap {MAX_COMPOSITIONS}")
    # grow the first k-1 columns (any tuple with sum <= n); the last part is the remainder
    head = np.zeros((1, 0), dtype=np.int64)
    sums = np.zeros(1, dtype=np.int64)
    for _ in range(k - 1):
        reps = n - sums + 1
        rows = np.repeat(np.arange(len(head)), reps)
        starts = np.cumsum(reps) - reps
        part = np.arange(len(rows)) - np.repeat(starts, reps)
        head = np.hstack([head[rows], part[:, None]])
        sums = sums[rows] + part
    out = np.hstack([head, (n - sums)[:, None]])
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class CompositionTable:
    """Compositions of n over the distinct types of a spec, with their (D, L) and weights."""

    n: int
    types: tuple[tuple[int, int, int], ...]
    parts: np.ndarray
    D: np.ndarray
    L: np.ndarray
    logw: np.ndarray

    def exact_weight(self, row: int) -> int:
        return _multinomial_weight(self.n, self.parts[row].tolist(), [t[2] for t in self.types])


@lru_cache(maxsize=32)
def _table(types: tuple[tuple[int, int, int], ...], n: int) -> CompositionTable:
    parts = compositions(n, len(types))
    deg = np.array([t[0] for t in types], dtype=np.int64)
    lev = np.array([t[1] for t in types], dtype=np.int64)
    mult = np.array([t[2] for t in types], dtype=float)
    logw = gammaln(n + 1) - gammaln(parts + 1).sum(axis=1) + parts @ np.log(mult)
    return CompositionTable(n, types, parts, parts @ deg, parts @ lev, logw)


def composition_table(spec: MoleculeSpec, n: int) -> CompositionTable:
    if n < 1:
        raise ValueError("window size n must be >= 1")
    return _table(tuple(spec.types()), n)


def open_integer_range(lo: Fraction, hi: Fraction) -> tuple[int, int]:
    """Integers strictly between lo and hi, as an inclusive (first, last) pair."""
    return math.floor(lo) + 1, math.ceil(hi) - 1


def window_ranges(spec: MoleculeSpec, n: int, ell, nu, c, delta) -> tuple[tuple[int, int], tuple[int, int]]:
    """Admissible total degree and scaled total level for the open windows.

    (ell - nu) n < D < (ell + nu) n  and  (c - delta) q n < L < (c + delta) q n,
    where L is the level sum scaled by the common level denominator q.
    """
    ell, nu, c, delta = map(as_fraction, (ell, nu, c, delta))
    if nu <= 0 or delta <= 0:
        raise ValueError("nu and delta must be positive")
    q = spec.level_denominator
    d_range = open_integer_range((ell - nu) * n, (ell + nu) * n)
    l_range = open_integer_range((c - delta) * q * n, (c + delta) * q * n)
    return d_range, l_range


@dataclass(frozen=True)
class MeasureCount:
    count: int
    log: float


def homological_measure_exact(spec: MoleculeSpec, n: int, ell, nu, c, delta) -> MeasureCount:
    """Number of monomials on n sites with degree and mean level in the open windows.

    Returns the exact integer together with its natural log (-inf for zero).
    """
    (dlo, dhi), (llo, lhi) = window_ranges(spec, n, ell, nu, c, delta)
    tab = composition_table(spec, n)
    rows = np.flatnonzero((tab.D >= dlo) & (tab.D <= dhi) & (tab.L >= llo) & (tab.L <= lhi))
    total = sum(tab.exact_weight(int(r)) for r in rows)
    return MeasureCount(total, math.log(total) if total else NEG_INF)


def log_measure(spec: MoleculeSpec, n: int, ell, nu, c, delta) -> float:
    """Natural log of the same count, evaluated in log space (no big integers)."""
    (dlo, dhi), (llo, lhi) = window_ranges(spec, n, ell, nu, c, delta)
    tab = composition_table(spec, n)
    mask = (tab.D >= dlo) & (tab.D <= dhi) & (tab.L >= llo) & (tab.L <= lhi)
    if not mask.any():
        return NEG_INF
    return float(logsumexp(tab.logw[mask]))


# -- (degree, level) histograms ------------------------------------------------

@dataclass(frozen=True)
class LogHistogram:
    """Log-counts of monomials indexed by total degree D and scaled level sum L.

    ``method`` is 'enumerate' (exact up to float rounding of the logs) or 'fft'
    (log of a discrete distribution computed spectrally; cells whose share of
    the total falls below ``floor`` are reported as -inf).
    """

    n: int
    q: int
    log_counts: np.ndarray
    method: str
    floor: float = 0.0

    @property
    def shape(self) -> tuple[int, int]:
        return self.log_counts.shape

    def log_total(self) -> float:
        return float(logsumexp(self.log_counts))

    def log_box(self, dlo: int, dhi: int, llo: int, lhi: int) -> float:
        nd, nl = self.shape
        dlo, llo = max(dlo, 0), max(llo, 0)
        dhi, lhi = min(dhi, nd - 1), min(lhi, nl - 1)
        if dlo > dhi or llo > lhi:
            return NEG_INF
        block = self.log_counts[dlo:dhi + 1, llo:lhi + 1]
        if not np.isfinite(block).any():
            return NEG_INF
        return float(logsumexp(block))


def _histogram_enumerate(spec: MoleculeSpec, n: int) -> LogHistogram:
    tab = composition_table(spec, n)
    q = spec.level_denominator
    shape = (spec.m * n + 1, q * n + 1)
    flat = tab.D * shape[1] + tab.L
    peak = np.full(shape[0] * shape[1], NEG_INF)
    np.maximum.at(peak, flat, tab.logw)
    acc = np.zeros_like(peak)
    np.add.at(acc, flat, np.exp(tab.logw - peak[flat]))
    with np.errstate(divide="ignore"):
        out = np.where(acc > 0, peak + np.log(acc), NEG_INF)
    return LogHistogram(n, q, out.reshape(shape), "enumerate")


def _histogram_fft(spec: MoleculeSpec, n: int, floor: float) -> LogHistogram:
    # distribution of (D, L) for uniformly random classes is the n-fold
    # convolution of the one-site law; the grid holds the full support, so the
    # circular convolution never wraps
    q = spec.level_denominator
    nd, nl = spec.m * n + 1, q * n + 1
    u = np.arange(nd)[:, None]
    v = np.arange(nl // 2 + 1)[None, :]
    char = np.zeros((nd, nl // 2 + 1), dtype=complex)
    for d, w, mult in spec.types():
        char += (mult / spec.B) * np.exp(-2j * np.pi * d * u / nd) * np.exp(-2j * np.pi * w * v / nl)
    prob = np.fft.irfft2(char ** n, s=(nd, nl))
    del char
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(prob > floor, np.log(np.where(prob > floor, prob, 1.0)) + n * math.log(spec.B), NEG_INF)
    return LogHistogram(n, q, out, "fft", floor)


def log_histogram(spec: MoleculeSpec, n: int, method: str = "auto", floor: float = 1e-12) -> LogHistogram:
    """Histogram of monomial log-counts over (D, L).

    'auto' enumerates compositions when their number is below the cap and falls
    back to the spectral method otherwise.
    """
    if n < 1:
        raise ValueError("window size n must be >= 1")
    if method == "auto":
        method = "enumerate" if n_compositions(n, len(spec.types())) <= MAX_COMPOSITIONS else "fft"
    if method == "enumerate":
        return _histogram_enumerate(spec, n)
    if method == "fft":
        return _histogram_fft(spec, n, floor)
    raise ValueError(f"unknown histogram method {method!r}")


# -- degree-only counts ---------------------------------------------------------

@lru_cache(maxsize=32)
def _degree_table(groups: tuple[tuple[int, int], ...], n: int):
    parts = compositions(n, len(groups))
    deg = np.array([g[0] for g in groups], dtype=np.int64)
    mult = np.array([g[1] for g in groups], dtype=float)
    logw = gammaln(n + 1) - gammaln(parts + 1).sum(axis=1) + parts @ np.log(mult)
    return parts, parts @ deg, logw


def degree_log_counts(spec: MoleculeSpec, n: int) -> np.ndarray:
    """log rk A^d for d = 0..m n (the number of degree-d monomials on n sites)."""
    parts, D, logw = _degree_table(tuple(spec.degree_groups()), n)
    out = np.full(spec.m * n + 1, NEG_INF)
    for d in np.unique(D):
        out[d] = logsumexp(logw[D == d])
    return out


def degree_counts(spec: MoleculeSpec, n: int) -> list[int]:
    """Exact rk A^d for d = 0..m n."""
    groups = tuple(spec.degree_groups())
    parts, D, _ = _degree_table(groups, n)
    mults = [g[1] for g in groups]
    out = [0] * (spec.m * n + 1)
    for row, d in zip(parts.tolist(), D.tolist()):
        out[d] += _multinomial_weight(n, row, mults)
    return out


def level_count_exact(spec: MoleculeSpec, n: int, lo, hi) -> int:
    """Monomials on n sites of any degree whose mean level lies strictly in (lo, hi)."""
    lo, hi = as_fraction(lo), as_fraction(hi)
    if lo >= hi:
        return 0
    q = spec.level_denominator
    llo, lhi = open_integer_range(lo * q * n, hi * q * n)
    tab = composition_table(spec, n)
    rows = np.flatnonzero((tab.L >= llo) & (tab.L <= lhi))
    return sum(tab.exact_weight(int(r)) for r in rows)
