"""Windowed crystal energy F = sum over edges of the coupling + sum over sites of V."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..lattice import LatticeWindow
from .potential import PairPotential


def window_edges(window: LatticeWindow) -> np.ndarray:
    """Nearest-neighbour pairs (i, j), i < j, of sites inside the window; lexicographic."""
    index = {p: k for k, p in enumerate(window.points)}
    edges = []
    for k, p in enumerate(window.points):
        for axis in range(window.dim):
            q = list(p)
            q[axis] += 1
            j = index.get(tuple(q))
            if j is not None:
                edges.append((k, j))
    return np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)


@dataclass(frozen=True)
class WindowEnergy:
    window: LatticeWindow
    potential: PairPotential
    edges: np.ndarray

    @property
    def n(self) -> int:
        return len(self.window)

    def value(self, x) -> float:
        x = np.asarray(x, dtype=float)
        i, j = self.edges.T
        return float(self.potential.V(x).sum() + self.potential.coupling(x[i], x[j]).sum())

    def normalized(self, x) -> float:
        """F' = F / |window|."""
        return self.value(x) / self.n

    def grad(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        g = self.potential.dV(x)
        if len(self.edges):
            i, j = self.edges.T
            s = self.potential.K * np.sin(x[i] - x[j])
            np.add.at(g, i, s)
            np.add.at(g, j, -s)
        return g

    def hessian(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        H = np.diag(self.potential.d2V(x))
        if len(self.edges):
            i, j = self.edges.T
            c = self.potential.K * np.cos(x[i] - x[j])
            np.add.at(H, (i, i), c)
            np.add.at(H, (j, j), c)
            np.add.at(H, (i, j), -c)
            np.add.at(H, (j, i), -c)
        return H

    def hvp(self, x, v) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        out = self.potential.d2V(x) * v
        if len(self.edges):
            i, j = self.edges.T
            c = self.potential.K * np.cos(x[i] - x[j]) * (v[i] - v[j])
            np.add.at(out, i, c)
            np.add.at(out, j, -c)
        return out

    def normalized_range(self) -> tuple[float, float]:
        """Bounds [f-, f+] for F' from the on-site extremes and the coupling range [0, 2K]."""
        pot = self.potential
        return pot.v_min, pot.v_max + 2 * pot.K * len(self.edges) / self.n


def build_energy(window: LatticeWindow, potential: PairPotential) -> WindowEnergy:
    if window.is_empty:
        raise ValueError("window must be non-empty")
    if window.dim not in (1, 2):
        raise ValueError(f"crystal energies support d in {{1, 2}}, got d={window.dim}")
    return WindowEnergy(window, potential, window_edges(window))


def chain(n: int) -> LatticeWindow:
    return LatticeWindow.interval(0, n - 1)


def grid(rows: int, cols: int) -> LatticeWindow:
    return LatticeWindow.box([0, 0], [rows - 1, cols - 1])
