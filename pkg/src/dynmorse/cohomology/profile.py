"""Sampled entropy profiles (l, c) -> b and the pigeonhole lower bound."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import logsumexp

from .counting import NEG_INF, composition_table, log_histogram, window_ranges
from .maxent import entropy_asymptotic
from .spec import MoleculeSpec

MODES = ("exact", "asymptotic")


def fmt_float(x: float) -> str:
    """CSV float: shortest round-trip repr, with the -inf sentinel spelled out."""
    x = float(x)
    if x == NEG_INF:
        return "-inf"
    return repr(x)


@dataclass
class EntropyProfile:
    """b-values on the grid ells x cs; ``values[i, j]`` belongs to (ells[i], cs[j])."""

    spec: MoleculeSpec
    ells: np.ndarray
    cs: np.ndarray
    values: np.ndarray
    mode: str
    n: int | None = None
    nu: float | None = None
    delta: float | None = None
    meta: dict = field(default_factory=dict)

    def evaluate(self, ell: float, c: float) -> float:
        """Off-grid evaluation with the same mode and parameters."""
        if self.mode == "asymptotic":
            return entropy_asymptotic(self.spec, ell, c)
        return exact_rate(self.spec, self.n, ell, self.nu, c, self.delta)

    def finite_mask(self) -> np.ndarray:
        return np.isfinite(self.values)

    def argmax(self) -> tuple[float, float, float]:
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return float(self.ells[i]), float(self.cs[j]), float(self.values[i, j])

    def rows(self):
        for i, ell in enumerate(self.ells):
            for j, c in enumerate(self.cs):
                yield float(ell), float(c), float(self.values[i, j])

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["ell", "c", "value", "mode", "n"])
            n = "" if self.n is None else self.n
            for ell, c, v in self.rows():
                w.writerow([fmt_float(ell), fmt_float(c), fmt_float(v), self.mode, n])


def exact_rate(spec: MoleculeSpec, n: int, ell, nu, c, delta) -> float:
    """(1/n) ln of the exact count in the open windows; -inf if the count is zero."""
    hist = log_histogram(spec, n, method="enumerate")
    (dlo, dhi), (llo, lhi) = window_ranges(spec, n, ell, nu, c, delta)
    val = hist.log_box(dlo, dhi, llo, lhi)
    return val / n if val != NEG_INF else NEG_INF


def entropy_profile(spec: MoleculeSpec, resolution: int, mode: str = "asymptotic",
                    n: int | None = None, nu: float = 0.05, delta: float = 0.05) -> EntropyProfile:
    """Sample b on a resolution x resolution grid over [0, m] x [0, 1]."""
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    ells = np.linspace(0.0, float(max(spec.m, 1)), resolution)
    cs = np.linspace(0.0, 1.0, resolution)
    values = np.full((resolution, resolution), NEG_INF)
    if mode == "asymptotic":
        for i, ell in enumerate(ells):
            for j, c in enumerate(cs):
                values[i, j] = entropy_asymptotic(spec, ell, c)
        return EntropyProfile(spec, ells, cs, values, mode)
    if n is None or n < 1:
        raise ValueError("exact mode needs a window size n >= 1")
    hist = log_histogram(spec, n, method="enumerate")
    for i, ell in enumerate(ells):
        for j, c in enumerate(cs):
            (dlo, dhi), (llo, lhi) = window_ranges(spec, n, float(ell), nu, float(c), delta)
            val = hist.log_box(dlo, dhi, llo, lhi)
            values[i, j] = val / n if val != NEG_INF else NEG_INF
    return EntropyProfile(spec, ells, cs, values, mode, n, nu, delta)


# -- pigeonhole -------------------------------------------------------------

@dataclass(frozen=True)
class PigeonholeResult:
    ell: float
    c: float
    bound: float
    log_count: float
    count: int | None
    n_cells: int
    method: str


def pigeonhole_lower_bound(spec: MoleculeSpec, n: int, k: int, r: int, omega_o: int = 1,
                           exact: bool = False) -> PigeonholeResult:
    """Richest (degree, level) cell and the certified growth rate it carries.

    Normalized degree D/n in [0, m omega_o] is cut into r m omega_o cells of
    width 1/r and the mean level into k cells of width 1/k.  The fullest cell
    holds at least a 1/(k r m omega_o) share of all classes, so
    bound = (ln count - ln(k r m omega_o)) / n.  Returns the cell midpoint.
    """
    if k < 1 or r < 1 or omega_o < 1 or n < 1:
        raise ValueError("k, r, omega_o and n must be >= 1")
    hist = log_histogram(spec, n)
    q = spec.level_denominator
    n_deg = r * max(spec.m, 1) * omega_o
    D = np.arange(hist.shape[0])
    L = np.arange(hist.shape[1])
    s_idx = np.minimum(D * r // n, n_deg - 1)
    j_idx = np.minimum(L * k // (q * n), k - 1)
    cells = np.full((n_deg, k), NEG_INF)
    for s in np.unique(s_idx):
        rows = hist.log_counts[s_idx == s]
        for j in np.unique(j_idx):
            block = rows[:, j_idx == j]
            if np.isfinite(block).any():
                cells[s, j] = logsumexp(block)
    s, j = np.unravel_index(int(np.argmax(cells)), cells.shape)
    log_count = float(cells[s, j])
    count = None
    if exact and hist.method == "enumerate":
        tab = composition_table(spec, n)
        sel = np.flatnonzero((np.minimum(tab.D * r // n, n_deg - 1) == s)
                             & (np.minimum(tab.L * k // (q * n), k - 1) == j))
        count = sum(tab.exact_weight(int(x)) for x in sel)
        log_count = math.log(count)
    bound = (log_count - math.log(k * n_deg)) / n
    return PigeonholeResult((s + 0.5) / r, (j + 0.5) / k, bound, log_count, count,
                            n_deg * k, hist.method)
