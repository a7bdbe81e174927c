"""Measured decay of delta_Omega, the boundary sensitivity of window averages.

The per-site density is f_o(x) = V(x_0) + (K/2) sum_e (1 - cos(x_0 - x_e)) over
the 2d lattice neighbours e of the origin (R = 1), or V(x_0) alone (R = 0), so
that f_Omega = (1/|Omega|) sum_{g in Omega} f_o(shift_g x).  Two configurations
agreeing on Omega can only differ through the couplings that cross the
window's edge.  For a fixed interior configuration the exterior sites enter
separably, so the adversarial exterior pair is computed exactly per site; the
interior is sampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..lattice import CubeSequence, LatticeWindow, boundary_size
from .potential import PairPotential


@dataclass(frozen=True)
class DecayRow:
    i: int
    n: int
    delta: float
    boundary_ratio: float
    crossing_edges: int


def _crossing(window: LatticeWindow) -> dict[tuple[int, ...], list[int]]:
    """Exterior neighbours of the window mapped to the interior sites they touch."""
    index = {p: k for k, p in enumerate(window.points)}
    out: dict[tuple[int, ...], list[int]] = {}
    for p, k in index.items():
        for axis in range(window.dim):
            for step in (-1, 1):
                q = list(p)
                q[axis] += step
                q = tuple(q)
                if q not in index:
                    out.setdefault(q, []).append(k)
    return out


def window_delta(potential: PairPotential, window: LatticeWindow, radius: int,
                 samples: int = 32, seed: int = 0) -> tuple[float, int]:
    """4 sup |f_Omega(x) - f_Omega(y)| over pairs agreeing on Omega, and the crossing-edge count."""
    if radius not in (0, 1):
        raise ValueError("only radius 0 (on-site) and 1 (nearest neighbour) densities are supported")
    crossing = _crossing(window)
    n_cross = sum(len(v) for v in crossing.values())
    if radius == 0 or potential.K == 0 or not crossing:
        return 0.0, n_cross
    rng = np.random.default_rng(seed)
    n = len(window)
    interiors = [np.zeros(n)] + [rng.uniform(0, 2 * math.pi, n) for _ in range(samples)]
    best = 0.0
    for x in interiors:
        # exterior site s contributes (K/2) sum_k (1 - cos(x_k - t)); its range over t
        # is K |sum_k exp(i x_k)|
        total = 0.0
        for sites in crossing.values():
            total += potential.K * abs(np.exp(1j * x[sites]).sum())
        best = max(best, total / n)
    return 4 * best, n_cross


def locality_decay(potential: PairPotential, seq: CubeSequence, i_values, radius: int = 1,
                   samples: int = 32, seed: int = 0) -> list[DecayRow]:
    """delta_{Omega_i} along the cube sequence next to |boundary_1 Omega_i| / |Omega_i|."""
    rows = []
    for i in i_values:
        w = seq.window(i)
        delta, n_cross = window_delta(potential, w, radius, samples, seed)
        rows.append(DecayRow(i, len(w), float(delta), boundary_size(w, 1) / len(w), n_cross))
    return rows
