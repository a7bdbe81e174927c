"""Disjoint epsilon-quasi-tilings by cubes and the superadditive Ornstein-Weiss estimator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .lattice import CubeSequence, LatticeWindow

TOL = 1e-9


@dataclass(frozen=True)
class TilePlacement:
    tile_index: int
    center: tuple[int, ...]


@dataclass
class TilingResult:
    placements: list[TilePlacement]
    covered: int
    total: int
    eps: float
    failed: bool

    @property
    def coverage_ratio(self) -> float:
        return self.covered / self.total if self.total else 0.0

    def pieces(self, tiles: Sequence[LatticeWindow]) -> list[LatticeWindow]:
        return [tiles[p.tile_index].translate(p.center) for p in self.placements]


def _cube_edge(tile: LatticeWindow) -> int:
    if tile.is_empty:
        raise ValueError("empty tile")
    ext = tile.extents()
    edge = int(ext[0])
    if not np.all(ext == edge) or len(tile) != edge ** tile.dim:
        raise ValueError(f"tile {tile!r} is not an axis-aligned cube")
    return edge


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def quasi_tile(window: LatticeWindow, tiles: Sequence[LatticeWindow], eps: float) -> TilingResult:
    """Disjointly tile ``window`` by translates of cube ``tiles``.

    The largest tile is laid on a grid anchored at the window's lower corner
    with period equal to its edge; the remaining tiles then fill what is left
    greedily in lexicographic order.  ``failed`` is set when the covered
    fraction is below ``1 - eps``.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if not tiles:
        raise ValueError("need at least one tile")
    if window.is_empty:
        raise ValueError("cannot tile an empty window")
    d = window.dim
    edges = []
    for t in tiles:
        if t.dim != d:
            raise ValueError("tile dimension mismatch")
        edges.append(_cube_edge(t))
    lo, hi = window.bounds()
    extents = hi - lo + 1
    for j, e in enumerate(edges):
        if np.any(e > extents):
            raise ValueError(f"tile {j} (edge {e}) is larger than the window along some axis")

    inside = np.zeros(tuple(extents.tolist()), dtype=bool)
    inside[tuple((window.as_array() - lo).T)] = True
    free = inside.copy()
    placements: list[TilePlacement] = []

    def place(j: int, pos: tuple[int, ...]) -> bool:
        sl = tuple(slice(p, p + edges[j]) for p in pos)
        block = free[sl]
        if block.shape != (edges[j],) * d or not block.all():
            return False
        free[sl] = False
        tile_lo = tiles[j].bounds()[0]
        center = tuple(int(x) for x in (np.asarray(pos) + lo - tile_lo))
        placements.append(TilePlacement(j, center))
        return True

    order = sorted(range(len(tiles)), key=lambda j: (-edges[j], j))
    big = order[0]
    for pos in np.ndindex(*[int(x) // edges[big] for x in extents]):
        place(big, tuple(int(p) * edges[big] for p in pos))
    for j in order[1:]:
        e = edges[j]
        limit = extents - e + 1
        for pos in np.argwhere(free[tuple(slice(0, int(m)) for m in limit)]):
            place(j, tuple(int(p) for p in pos))

    placements.sort(key=lambda p: (p.center, p.tile_index))
    covered = int(inside.sum() - free.sum())
    total = len(window)
    failed = Fraction(covered, total) < 1 - _as_fraction(eps)
    return TilingResult(placements, covered, total, float(eps), failed)


def check_tiling(window: LatticeWindow, tiles: Sequence[LatticeWindow], result: TilingResult) -> list[str]:
    """Return the violated tiling conditions (containment, disjointness, coverage)."""
    problems = []
    seen: set = set()
    covered = 0
    for piece in result.pieces(tiles):
        if not piece.issubset(window):
            problems.append(f"piece {piece!r} not contained in window")
        pts = set(piece.points)
        if not seen.isdisjoint(pts):
            problems.append(f"piece {piece!r} overlaps an earlier piece")
        seen |= pts
        covered += len(piece)
    if covered != result.covered:
        problems.append(f"covered count {result.covered} != {covered}")
    if not result.failed and Fraction(covered, len(window)) < 1 - _as_fraction(result.eps):
        problems.append("coverage below 1 - eps but not flagged")
    return problems


def grid_coverage(edge: int, tile_edge: int, d: int) -> float:
    """Coverage of an edge-E cube by the grid sweep of edge-t cubes."""
    return ((edge // tile_edge) * tile_edge / edge) ** d


def tiling_threshold(tiles: Sequence[LatticeWindow], eps: float, edge_max: int) -> int | None:
    """Smallest cube edge E0 such that every cube of edge E0..edge_max is eps-tiled.

    Measured by running :func:`quasi_tile`; ``None`` if even ``edge_max`` fails.
    """
    d = tiles[0].dim
    min_edge = max(_cube_edge(t) for t in tiles)
    threshold = None
    for E in range(edge_max, min_edge - 1, -1):
        w = LatticeWindow.box([0] * d, [E - 1] * d)
        if quasi_tile(w, tiles, eps).failed:
            break
        threshold = E
    return threshold


# -- set functions ------------------------------------------------------------

@dataclass
class SetFunction:
    """A real function on finite windows with declared structural properties."""

    evaluator: Callable[[LatticeWindow], float]
    claims_superadditive: bool = True
    claims_invariant: bool = True
    name: str = "h"

    def __call__(self, window: LatticeWindow) -> float:
        return float(self.evaluator(window))


@dataclass
class OWEstimate:
    indices: list[int]
    sizes: list[int]
    values: list[float]
    estimates: list[float]
    certificates: list[float]
    liminf_bound: float
    h_plus: float
    tile_index: int | None
    eps: float | None
    tiling: TilingResult | None = field(default=None, repr=False)


def _worst_tail_coverage(i: int, js: np.ndarray, d: int) -> np.ndarray:
    # inf over i' >= i of the grid coverage of [-i', i'-1]^d by edge-2j cubes;
    # within the block q*j <= i' < (q+1)*j the worst case is i' = (q+1)*j - 1
    q = i // js
    return (q * js / ((q + 1) * js - 1)) ** d


def ow_superadditive_limit(h: SetFunction, seq: CubeSequence, i_max: int,
                           i_min: int | None = None) -> OWEstimate:
    """Normalized values h(W_i)/|W_i| along the cube sequence and a liminf certificate.

    For every index i and every earlier cube W_j, tiling by translates of W_j
    certifies ``liminf >= (h_plus - eps)(1 - eps)`` with
    ``eps = max(h_plus - h_j, 1 - kappa)``, where ``kappa`` is the worst grid
    coverage of any later cube by W_j and ``h_plus`` the running maximum of the
    normalized values.  The reported bound is the best certificate so far, so it
    is nondecreasing in ``i_max``.
    """
    start = seq.start if i_min is None else i_min
    if i_max < start + 1:
        raise ValueError("need at least two cubes (i_max >= i_min + 1)")
    indices = list(range(start, i_max + 1))
    sizes, values = [], []
    for i in indices:
        v = h(seq.window(i))
        if v < 0 or math.isnan(v):
            raise ValueError(f"{h.name} is negative ({v}) on cube {i}; it must be nonnegative")
        sizes.append(seq.size(i))
        values.append(v)
    est = np.array(values) / np.array(sizes, dtype=float)
    idx = np.array(indices)

    certs: list[float] = []
    best, best_j, best_eps = 0.0, None, None
    h_plus = -math.inf
    for pos, i in enumerate(indices):
        h_plus = max(h_plus, est[pos])
        if pos > 0:
            js = idx[:pos]
            kappa = _worst_tail_coverage(i, js, seq.dim)
            eps = np.maximum(h_plus - est[:pos], 1 - kappa)
            cert = (h_plus - eps) * (1 - eps)
            k = int(np.argmax(cert))
            if cert[k] > best:
                best, best_j, best_eps = float(cert[k]), int(js[k]), float(eps[k])
        certs.append(best)

    tiling = None
    if best_j is not None:
        tile = seq.window(best_j)
        tiling = quasi_tile(seq.window(i_max), [tile], max(min(best_eps, 0.999), 1e-6))
    return OWEstimate(indices, sizes, values, est.tolist(), certs, best, float(h_plus),
                      best_j, best_eps, tiling)


@dataclass
class SuperadditivityReport:
    trials: int
    failures: list[tuple[LatticeWindow, LatticeWindow, float, float]]
    invariance_failures: list[tuple[LatticeWindow, tuple[int, ...], float, float]]

    @property
    def passed(self) -> bool:
        return not self.failures and not self.invariance_failures


def _random_window(rng: np.random.Generator, dim: int, span: int) -> LatticeWindow:
    if rng.random() < 0.5:
        lo = rng.integers(-span, span, size=dim)
        ext = rng.integers(1, max(2, span // 2), size=dim)
        return LatticeWindow.box(lo.tolist(), (lo + ext - 1).tolist())
    k = int(rng.integers(1, 2 * span))
    pts = rng.integers(-span, span, size=(k, dim))
    return LatticeWindow.from_array(pts)


def verify_superadditive(h: SetFunction, trials: int = 200, rng_seed: int = 0,
                         dim: int = 1, span: int = 8) -> SuperadditivityReport:
    """Sample disjoint window pairs and check h(A u B) >= h(A) + h(B) - 1e-9."""
    rng = np.random.default_rng(rng_seed)
    failures, inv_failures = [], []
    for _ in range(trials):
        a = _random_window(rng, dim, span)
        b = _random_window(rng, dim, span).difference(a)
        if b.is_empty:
            b = a.translate([2 * span + 3] + [0] * (dim - 1))
        lhs, rhs = h(a.union(b)), h(a) + h(b)
        if lhs < rhs - TOL:
            failures.append((a, b, lhs, rhs))
        if h.claims_invariant:
            shift = tuple(int(x) for x in rng.integers(-50, 50, size=dim))
            ha, hs = h(a), h(a.translate(shift))
            if abs(ha - hs) > TOL:
                inv_failures.append((a, shift, ha, hs))
    return SuperadditivityReport(trials, failures, inv_failures)
