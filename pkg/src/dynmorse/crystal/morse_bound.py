"""Critical-point counts of crystal energies against the cohomological lower bound."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..cohomology.counting import composition_table, level_count_exact
from ..cohomology.spec import MoleculeSpec, as_fraction
from ..lattice import CubeSequence, LatticeWindow
from .energy import build_energy, chain
from .potential import PairPotential
from .solver import SolverConfig, find_critical_points
from .spectrum import NEG_INF, cri, spectrum


@dataclass
class MarginRow:
    n: int
    crit_count: int
    coh_count: int
    cri: float
    b_A: float
    margin: float
    violation: bool
    euler_sum: int
    complete: bool


@dataclass
class LevelCheck:
    n: int
    level: Fraction
    interval: tuple[float, float]
    found: int
    lower_bound: int

    @property
    def ok(self) -> bool:
        return self.found >= self.lower_bound


@dataclass
class MorseBoundReport:
    interval: tuple[float, float]
    K: float
    rows: list[MarginRow]
    level_checks: list[LevelCheck] = field(default_factory=list)

    @property
    def violations(self) -> list[MarginRow]:
        return [r for r in self.rows if r.violation]

    @property
    def level_failures(self) -> list[LevelCheck]:
        return [c for c in self.level_checks if not c.ok]

    @property
    def passed(self) -> bool:
        return not self.violations and not self.level_failures

    @property
    def status(self) -> str:
        if self.passed:
            return "ok"
        # for K = 0 the enumeration is complete, so a shortfall contradicts the bound;
        # for K > 0 it means the solver missed critical points
        return "bound_violated" if self.K == 0 else "solver_incomplete"


def _energy_to_level(potential: PairPotential, e: float) -> Fraction:
    lo, hi = as_fraction(potential.v_min), as_fraction(potential.v_max)
    return (as_fraction(e) - lo) / (hi - lo)


def coupling_shift(potential: PairPotential, n_edges: int, n: int) -> float:
    """Largest normalized energy the coupling can add: 2 K |E| / n."""
    return 2 * potential.K * n_edges / n


def cohomology_count(spec: MoleculeSpec, potential: PairPotential, n: int, n_edges: int,
                     interval: tuple[float, float]) -> int:
    """Monomials whose level, mapped to energy units, lies in (a, b - shift)."""
    a, b = interval
    shift = as_fraction(coupling_shift(potential, n_edges, n))
    lo = _energy_to_level(potential, a)
    hi = _energy_to_level(potential, b) - shift / (as_fraction(potential.v_max) - as_fraction(potential.v_min))
    return level_count_exact(spec, n, lo, hi)


def _level_classes(spec: MoleculeSpec, n: int) -> dict[Fraction, int]:
    """Exact number of monomials at each attainable mean level."""
    tab = composition_table(spec, n)
    q = spec.level_denominator
    out: dict[Fraction, int] = {}
    for row in range(len(tab.L)):
        lev = Fraction(int(tab.L[row]), q * n)
        out[lev] = out.get(lev, 0) + tab.exact_weight(row)
    return dict(sorted(out.items()))


def morse_bound_check(spec: MoleculeSpec, potential: PairPotential, seq: CubeSequence | None,
                      interval: tuple[float, float], i_max: int = 1, i_min: int = 1,
                      sizes: Sequence[int] | None = None, config: SolverConfig | None = None,
                      distinct_values: bool = False, level_eta: float = 1e-9) -> MorseBoundReport:
    """Compare cri_n(I) with b_{A,n}(I) on each window.

    Windows are the cubes ``seq.window(i)`` for i_min <= i <= i_max, or chains
    of the given ``sizes``.  Margins are decided on exact integers: a row is a
    violation when fewer critical points than cohomology classes are found.
    For K > 0 each monomial level c is additionally checked on
    (e(c) - eta, e(c) + shift + eta), where e maps levels onto [V_min, V_max].
    """
    a, b = interval
    if not a < b:
        raise ValueError(f"interval ({a}, {b}) is empty or reversed")
    if sizes is not None:
        windows: list[LatticeWindow] = [chain(n) for n in sizes]
    else:
        if seq is None:
            raise ValueError("need a cube sequence or explicit chain sizes")
        windows = [seq.window(i) for i in range(i_min, i_max + 1)]

    rows, checks = [], []
    for w in windows:
        energy = build_energy(w, potential)
        pts = find_critical_points(energy, config)
        row, level = window_bound(spec, energy, pts, interval, distinct_values, level_eta)
        rows.append(row)
        checks.extend(level)
    return MorseBoundReport((a, b), potential.K, rows, checks)


def window_bound(spec: MoleculeSpec, energy, points, interval: tuple[float, float],
                 distinct_values: bool = False, level_eta: float = 1e-9) -> tuple[MarginRow, list[LevelCheck]]:
    """Margin row and per-level checks for one window with already enumerated points."""
    potential = energy.potential
    n, n_edges = energy.n, len(energy.edges)
    hist = spectrum(points, n)
    found = hist.count(interval, distinct_values)
    coh = cohomology_count(spec, potential, n, n_edges, interval)
    c_val = cri(hist, interval, distinct_values)
    b_val = math.log(coh) / n if coh else NEG_INF
    if coh == 0:
        margin = math.inf
    elif found == coh:
        margin = 0.0
    else:
        margin = c_val - b_val
    euler = sum((-1) ** p.morse_index for p in points)
    complete = euler == 0 and len(points) >= spec.B ** n
    row = MarginRow(n, found, coh, c_val, b_val, margin, found < coh, euler, complete)
    checks = []
    if potential.K > 0:
        span = potential.v_max - potential.v_min
        shift = coupling_shift(potential, n_edges, n)
        for lev, count in _level_classes(spec, n).items():
            e = potential.v_min + float(lev) * span
            J = (e - level_eta, e + shift + level_eta)
            checks.append(LevelCheck(n, lev, J, hist.count(J), count))
    return row, checks
