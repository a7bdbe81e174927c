"""On-site cosine potentials and nearest-neighbour coupling on circle-valued sites."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.optimize import brentq

DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class PairPotential:
    """V(t) = a0 + a1 cos t + b1 sin t + a2 cos 2t with coupling K (1 - cos(t - t')).

    The defaults give the pendulum V = (1 - cos t)/2 with minimum 0 at t = 0
    and maximum 1 at t = pi.  Construction checks that V is a Morse function
    unless ``check=False`` (used for deliberately constant potentials).
    """

    a0: float = 0.5
    a1: float = -0.5
    b1: float = 0.0
    a2: float = 0.0
    K: float = 0.0
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.K < 0:
            raise ValueError("coupling strength K must be nonnegative")
        if self.check:
            self.critical_points()

    @classmethod
    def pendulum(cls, K: float = 0.0) -> "PairPotential":
        return cls(0.5, -0.5, 0.0, 0.0, K)

    @classmethod
    def constant(cls, value: float = 0.0) -> "PairPotential":
        return cls(value, 0.0, 0.0, 0.0, 0.0, check=False)

    def with_coupling(self, K: float) -> "PairPotential":
        return PairPotential(self.a0, self.a1, self.b1, self.a2, K, self.check)

    def V(self, t):
        t = np.asarray(t, dtype=float)
        return self.a0 + self.a1 * np.cos(t) + self.b1 * np.sin(t) + self.a2 * np.cos(2 * t)

    def dV(self, t):
        t = np.asarray(t, dtype=float)
        return -self.a1 * np.sin(t) + self.b1 * np.cos(t) - 2 * self.a2 * np.sin(2 * t)

    def d2V(self, t):
        t = np.asarray(t, dtype=float)
        return -self.a1 * np.cos(t) - self.b1 * np.sin(t) - 4 * self.a2 * np.cos(2 * t)

    def critical_points(self, samples: int = 4096) -> np.ndarray:
        """Roots of V' in [0, 2 pi), located by sign changes and refined by Brent.

        Raises ValueError if V is constant or has a degenerate critical point.
        """
        if self.a1 == 0 and self.b1 == 0 and self.a2 == 0:
            raise ValueError("constant on-site potential has degenerate critical points")
        grid = np.linspace(0.0, 2 * math.pi, samples + 1)
        g = self.dV(grid)
        roots = []
        for k in range(samples):
            lo, hi = grid[k], grid[k + 1]
            if g[k] == 0:
                roots.append(lo)
            elif g[k] * g[k + 1] < 0:
                roots.append(brentq(lambda t: float(self.dV(t)), lo, hi, xtol=1e-15))
        roots = np.sort(np.mod(np.array(roots), 2 * math.pi))
        if roots.size:
            roots = roots[np.concatenate([[True], np.diff(roots) > 1e-9])]
        if roots.size > 1 and 2 * math.pi - roots[-1] + roots[0] < 1e-9:
            roots = roots[:-1]
        curv = np.abs(self.d2V(roots))
        if roots.size == 0 or np.any(curv < DEGENERACY_TOL):
            raise ValueError("on-site potential is not Morse (degenerate critical point)")
        return roots

    @cached_property
    def v_min(self) -> float:
        if not self.check:
            return float(self.V(np.linspace(0, 2 * math.pi, 4097)).min())
        return float(self.V(self.critical_points()).min())

    @cached_property
    def v_max(self) -> float:
        if not self.check:
            return float(self.V(np.linspace(0, 2 * math.pi, 4097)).max())
        return float(self.V(self.critical_points()).max())

    def coupling(self, t, s):
        return self.K * (1 - np.cos(np.asarray(t) - np.asarray(s)))
