"""Multi-start damped Newton enumeration of critical points on the torus (S^1)^n."""

from __future__ import annotations

import itertools
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .energy import WindowEnergy

TWO_PI = 2 * math.pi
WORKERS_ENV = "MORSE_ENTROPY_WORKERS"


@dataclass(frozen=True)
class SolverConfig:
    starts: int = 64
    tol: float = 1e-10
    max_iter: int = 100
    dedup_eps: float = 1e-5
    seed: int = 0
    max_sites: int = 12
    warm_starts: bool = True
    max_halvings: int = 40


@dataclass(frozen=True)
class CriticalPoint:
    angles: tuple[float, ...]
    value: float
    grad_norm: float
    morse_index: int
    min_abs_eig: float
    id: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.angles)


class CriticalSet(list):
    """Sorted critical points plus bookkeeping about the search."""

    def __init__(self, points, n_starts: int, dropped: int):
        super().__init__(points)
        self.n_starts = n_starts
        self.dropped = dropped

    @property
    def euler_sum(self) -> int:
        return sum((-1) ** p.morse_index for p in self)


def wrapped_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """l-infinity distance on the torus between rows of a and the vector b."""
    d = np.abs(np.mod(a - b + math.pi, TWO_PI) - math.pi)
    return d.max(axis=-1)


def newton(energy: WindowEnergy, x0: np.ndarray, cfg: SolverConfig) -> np.ndarray | None:
    """Damped Newton on grad F with backtracking on the gradient norm; None if it stalls."""
    x = np.mod(np.asarray(x0, dtype=float), TWO_PI)
    g = energy.grad(x)
    gn = float(np.linalg.norm(g, np.inf))
    for _ in range(cfg.max_iter):
        if gn <= cfg.tol:
            return np.mod(x, TWO_PI)
        H = energy.hessian(x)
        try:
            step = np.linalg.solve(H, -g)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, -g, rcond=None)[0]
        alpha = 1.0
        for _ in range(cfg.max_halvings + 1):
            trial = x + alpha * step
            gt = energy.grad(trial)
            gtn = float(np.linalg.norm(gt, np.inf))
            if gtn < gn:
                break
            alpha *= 0.5
        else:
            return None
        x, g, gn = trial, gt, gtn
    return np.mod(x, TWO_PI) if gn <= cfg.tol else None


def _solve_batch(energy: WindowEnergy, starts: np.ndarray, cfg: SolverConfig) -> list:
    return [newton(energy, s, cfg) for s in starts]


def start_points(energy: WindowEnergy, cfg: SolverConfig) -> np.ndarray:
    """Warm starts at products of on-site critical points, then scrambled Sobol points."""
    n = energy.n
    blocks = []
    if cfg.warm_starts:
        per_site = energy.potential.critical_points()
        if len(per_site) ** n <= 1 << 16:
            blocks.append(np.array(list(itertools.product(per_site, repeat=n)), dtype=float))
    if cfg.starts > 0:
        sob = qmc.Sobol(d=n, scramble=True, seed=cfg.seed)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            blocks.append(sob.random(cfg.starts) * TWO_PI)
    if not blocks:
        return np.zeros((0, n))
    return np.vstack(blocks)


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def find_critical_points(energy: WindowEnergy, config: SolverConfig | None = None,
                         workers: int | None = None) -> CriticalSet:
    """Converged, deduplicated critical points sorted by (value, angles).

    Representatives are chosen in start order, so the output does not depend
    on the number of workers.
    """
    cfg = config or SolverConfig()
    if energy.n > cfg.max_sites:
        raise ValueError(f"window has {energy.n} sites; the solver cap is {cfg.max_sites}")
    starts = start_points(energy, cfg)
    workers = workers or _workers()
    if workers > 1 and len(starts) > 1:
        chunks = np.array_split(starts, workers)
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_solve_batch, [energy] * len(chunks), chunks, [cfg] * len(chunks))
            sols = [s for part in parts for s in part]
    else:
        sols = _solve_batch(energy, starts, cfg)

    kept: list[np.ndarray] = []
    dropped = 0
    for x in sols:
        if x is None:
            dropped += 1
            continue
        if kept and wrapped_distance(np.array(kept), x).min() < cfg.dedup_eps:
            continue
        kept.append(x)

    points = []
    for x in kept:
        eig = np.linalg.eigvalsh(energy.hessian(x))
        points.append(CriticalPoint(
            angles=tuple(float(a) for a in x),
            value=energy.normalized(x),
            grad_norm=float(np.linalg.norm(energy.grad(x), np.inf)),
            morse_index=int((eig < 0).sum()),
            min_abs_eig=float(np.abs(eig).min()),
            id=tuple(int(v) for v in np.mod(np.round(x / cfg.dedup_eps), round(TWO_PI / cfg.dedup_eps))),
        ))
    points.sort(key=lambda p: (p.value, p.angles))
    return CriticalSet(points, len(starts), dropped)
