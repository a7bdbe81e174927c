"""Independent reference computations used by the tests.

Nothing here calls into the counting, entropy or solver code of the package;
each oracle recomputes its quantity from the definitions by brute force or a
closed form.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq, minimize, root


def frac(x) -> Fraction:
    return Fraction(repr(x)) if isinstance(x, float) else Fraction(x)


def binary_entropy(c: float) -> float:
    if c in (0.0, 1.0):
        return 0.0
    return -c * math.log(c) - (1 - c) * math.log(1 - c)


# -- lattice -------------------------------------------------------------------

def boundary_brute(points: set, dim: int, N: int) -> set:
    """Points within distance N of the set and of its complement, by scanning."""
    if not points or N == 0:
        return set()
    arr = np.array(sorted(points))
    lo, hi = arr.min(axis=0) - N - 1, arr.max(axis=0) + N + 1
    offsets = list(itertools.product(range(-N, N + 1), repeat=dim))
    out = set()
    for g in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        near_in = any(tuple(x + o for x, o in zip(g, off)) in points for off in offsets)
        near_out = any(tuple(x + o for x, o in zip(g, off)) not in points for off in offsets)
        if near_in and near_out:
            out.add(g)
    return out


# -- monomial counts -------------------------------------------------------------

def s1_subset_count(n: int, ell, nu, c, delta) -> int:
    """S^1 on n sites: subsets W' (sites carrying the fundamental class) with
    (l - nu) n < |W'| < (l + nu) n and (c - delta) < (n - |W'|)/n < (c + delta)."""
    ell, nu, c, delta = map(frac, (ell, nu, c, delta))
    sizes = np.array([bin(s).count("1") for s in range(1 << n)])
    total = 0
    for k in range(n + 1):
        lev = Fraction(n - k, n)
        if (ell - nu) * n < k < (ell + nu) * n and c - delta < lev < c + delta:
            total += int((sizes == k).sum())
    return total


def monomial_brute(pairs, n: int, ell, nu, c, delta) -> int:
    """Enumerate every assignment of classes (degree, level) to n sites."""
    ell, nu, c, delta = map(frac, (ell, nu, c, delta))
    total = 0
    for combo in itertools.product(pairs, repeat=n):
        D = sum(d for d, _ in combo)
        L = sum(Fraction(v) for _, v in combo) / n
        if (ell - nu) * n < D < (ell + nu) * n and c - delta < L < c + delta:
            total += 1
    return total


def degree_counts_brute(degrees, n: int) -> list[int]:
    out = [0] * (max(degrees) * n + 1)
    for combo in itertools.product(degrees, repeat=n):
        out[sum(combo)] += 1
    return out


# -- max-entropy ---------------------------------------------------------------

def level_only_entropy(levels, c: float) -> float:
    """max H(p) subject only to sum p_j v_j = c, via the one-multiplier Gibbs family."""
    v = np.array([float(x) for x in levels])
    if c < v.min() - 1e-12 or c > v.max() + 1e-12:
        return -math.inf
    if abs(c - v.min()) < 1e-12:
        return math.log(int((np.abs(v - v.min()) < 1e-12).sum()))
    if abs(c - v.max()) < 1e-12:
        return math.log(int((np.abs(v - v.max()) < 1e-12).sum()))

    def mean(lam):
        w = np.exp(lam * (v - v.max()))
        return float((w * v).sum() / w.sum()) - c

    lam = brentq(mean, -200, 200, xtol=1e-14)
    z = lam * v
    p = np.exp(z - z.max())
    p /= p.sum()
    return float(-(p[p > 0] * np.log(p[p > 0])).sum())


def primal_maxent(points, ell: float, c: float) -> float:
    """Direct SLSQP on the primal problem (for interior targets)."""
    X = np.asarray(points, dtype=float)
    B = len(X)

    def negent(p):
        p = np.clip(p, 1e-300, None)
        return float((p * np.log(p)).sum())

    cons = [{"type": "eq", "fun": lambda p: p.sum() - 1},
            {"type": "eq", "fun": lambda p: p @ X[:, 0] - ell},
            {"type": "eq", "fun": lambda p: p @ X[:, 1] - c}]
    res = minimize(negent, np.full(B, 1 / B), method="SLSQP", bounds=[(0, 1)] * B,
                   constraints=cons, options={"ftol": 1e-14, "maxiter": 500})
    return -res.fun


# -- crystal -------------------------------------------------------------------

def chain_grad(x: np.ndarray, K: float, a1: float = -0.5) -> np.ndarray:
    """Gradient of sum_k (a0 + a1 cos x_k) + K sum_k (1 - cos(x_k - x_{k+1})) along axis 0."""
    g = -a1 * np.sin(x)
    if len(x) > 1:
        s = K * np.sin(x[:-1] - x[1:])
        g[:-1] += s
        g[1:] -= s
    return g


def grid_scan_critical(n: int, K: float, m: int, a1: float = -0.5) -> list[np.ndarray]:
    """Critical points of the pendulum chain by sign-change scan on an m^n torus grid.

    Cells whose corners show a sign change in every gradient component are
    refined with a root solver; roots are deduplicated modulo 2 pi.
    """
    axes = np.linspace(0, 2 * math.pi, m, endpoint=False)
    mesh = np.stack(np.meshgrid(*([axes] * n), indexing="ij"))
    G = chain_grad(mesh, K, a1)
    cand = np.ones(G.shape[1:], dtype=bool)
    for comp in range(n):
        lo = G[comp].copy()
        hi = G[comp].copy()
        for corner in itertools.product((0, 1), repeat=n):
            shifted = G[comp]
            for ax, s in enumerate(corner):
                if s:
                    shifted = np.roll(shifted, -1, axis=ax)
            lo = np.minimum(lo, shifted)
            hi = np.maximum(hi, shifted)
        cand &= (lo <= 0) & (hi >= 0)
    h = axes[1] - axes[0]
    roots: list[np.ndarray] = []
    for idx in np.argwhere(cand):
        x0 = axes[idx] + h / 2
        sol = root(lambda x: chain_grad(x, K, a1), x0, method="hybr", tol=1e-13)
        # judge by the residual; hybr reports "no further improvement" at exact roots
        if np.abs(chain_grad(sol.x, K, a1)).max() > 1e-9:
            continue
        x = np.mod(sol.x, 2 * math.pi)
        if any(np.abs(np.mod(x - r + math.pi, 2 * math.pi) - math.pi).max() < 1e-6 for r in roots):
            continue
        roots.append(x)
    return roots
