"""Finite windows in Z^d with the Chebyshev metric.

Windows are immutable sets of integer points.  Boundaries and interiors are
computed with morphological dilation/erosion on a padded bounding box, which
is exact for the l-infinity metric because its balls are cubes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy import ndimage

Point = tuple[int, ...]


@dataclass(frozen=True)
class LatticeWindow:
    """A finite subset of Z^d, stored as a sorted tuple of points."""

    dim: int
    points: tuple[Point, ...] = field(default=())

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        pts = set()
        for p in self.points:
            p = tuple(int(x) for x in p)
            if len(p) != self.dim:
                raise ValueError(f"point {p} does not have dimension {self.dim}")
            pts.add(p)
        object.__setattr__(self, "points", tuple(sorted(pts)))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "LatticeWindow":
        arr = np.asarray(arr, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr[:, None]
        return cls(arr.shape[1], tuple(map(tuple, arr.tolist())))

    @classmethod
    def box(cls, lower: Sequence[int], upper: Sequence[int]) -> "LatticeWindow":
        """The integer box prod [lower_k, upper_k] (inclusive)."""
        axes = [np.arange(lo, hi + 1) for lo, hi in zip(lower, upper)]
        if any(len(a) == 0 for a in axes):
            return cls(len(axes))
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
        return cls.from_array(grid)

    @classmethod
    def interval(cls, lo: int, hi: int) -> "LatticeWindow":
        return cls.box([lo], [hi])

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Point]:
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return tuple(p) in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cached_set")
        if s is None:
            s = frozenset(self.points)
            object.__setattr__(self, "_cached_set", s)
        return s

    @property
    def is_empty(self) -> bool:
        return not self.points

    def as_array(self) -> np.ndarray:
        if not self.points:
            return np.zeros((0, self.dim), dtype=np.int64)
        return np.array(self.points, dtype=np.int64)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        arr = self.as_array()
        if arr.size == 0:
            raise ValueError("empty window has no bounds")
        return arr.min(axis=0), arr.max(axis=0)

    def extents(self) -> np.ndarray:
        lo, hi = self.bounds()
        return hi - lo + 1

    def translate(self, shift: Sequence[int]) -> "LatticeWindow":
        shift = np.asarray(shift, dtype=np.int64).reshape(-1)
        if shift.size != self.dim:
            raise ValueError("shift dimension mismatch")
        return LatticeWindow.from_array(self.as_array() + shift) if self.points else self

    def union(self, other: "LatticeWindow") -> "LatticeWindow":
        _check_dims(self, other)
        return LatticeWindow(self.dim, self.points + other.points)

    def difference(self, other: "LatticeWindow") -> "LatticeWindow":
        _check_dims(self, other)
        return LatticeWindow(self.dim, tuple(p for p in self.points if p not in other._set))

    def intersection(self, other: "LatticeWindow") -> "LatticeWindow":
        _check_dims(self, other)
        return LatticeWindow(self.dim, tuple(p for p in self.points if p in other._set))

    def isdisjoint(self, other: "LatticeWindow") -> bool:
        return self._set.isdisjoint(other._set)

    def issubset(self, other: "LatticeWindow") -> bool:
        return self._set <= other._set

    def __eq__(self, other) -> bool:
        if not isinstance(other, LatticeWindow):
            return NotImplemented
        return self.dim == other.dim and self.points == other.points

    def __hash__(self) -> int:
        return hash((self.dim, self.points))

    def __repr__(self) -> str:
        if len(self.points) <= 6:
            return f"LatticeWindow(dim={self.dim}, points={list(self.points)})"
        return f"LatticeWindow(dim={self.dim}, size={len(self.points)})"


def _check_dims(a: LatticeWindow, b: LatticeWindow) -> None:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")


def chebyshev(p: Sequence[int], q: Sequence[int]) -> int:
    """l-infinity distance between two lattice points."""
    return max(abs(int(a) - int(b)) for a, b in zip(p, q))


def set_distance(a: LatticeWindow, b: LatticeWindow) -> float:
    """inf over pairs of the point distance; +inf if either set is empty.

    Not a metric on sets (the triangle inequality fails), but d(A, B) > 0
    exactly when A and B are disjoint.
    """
    _check_dims(a, b)
    if a.is_empty or b.is_empty:
        return math.inf
    x, y = a.as_array(), b.as_array()
    best = math.inf
    for chunk in range(0, len(x), 2048):
        d = np.abs(x[chunk:chunk + 2048, None, :] - y[None, :, :]).max(axis=2)
        best = min(best, int(d.min()))
    return best


def diameter(window: LatticeWindow) -> int:
    if window.is_empty:
        raise ValueError("diameter of an empty window")
    lo, hi = window.bounds()
    return int((hi - lo).max())


def _indicator(window: LatticeWindow, pad: int) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = window.bounds()
    origin = lo - pad
    shape = tuple((hi - lo + 1 + 2 * pad).tolist())
    mask = np.zeros(shape, dtype=bool)
    idx = window.as_array() - origin
    mask[tuple(idx.T)] = True
    return mask, origin


def _from_mask(mask: np.ndarray, origin: np.ndarray) -> LatticeWindow:
    idx = np.argwhere(mask)
    if idx.size == 0:
        return LatticeWindow(len(origin))
    return LatticeWindow.from_array(idx + origin)


def boundary(window: LatticeWindow, N: float) -> LatticeWindow:
    """N-boundary: points within distance N of both the window and its complement.

    The result generally contains points outside the window (the exterior collar).
    """
    if N < 0:
        raise ValueError("N must be nonnegative")
    if window.is_empty:
        return window
    r = int(math.floor(N))
    if r == 0:
        return LatticeWindow(window.dim)
    mask, origin = _indicator(window, r + 1)
    size = 2 * r + 1
    dilated = ndimage.maximum_filter(mask, size=size, mode="constant", cval=False)
    eroded = ndimage.minimum_filter(mask, size=size, mode="constant", cval=False)
    return _from_mask(dilated & ~eroded, origin)


def interior(window: LatticeWindow, N: float) -> LatticeWindow:
    """N-interior: the window minus its N-boundary; always a subset of the window."""
    return window.difference(boundary(window, N))


def boundary_size(window: LatticeWindow, N: float) -> int:
    return len(boundary(window, N))


def amenability_ratio(window: LatticeWindow, reference: LatticeWindow) -> float:
    """|boundary(window, diam(reference))| / |window|."""
    if window.is_empty:
        raise ValueError("amenability ratio of an empty window")
    if reference.is_empty:
        raise ValueError("reference window must be non-empty")
    return boundary_size(window, diameter(reference)) / len(window)


def minkowski_sum(a: LatticeWindow, b: LatticeWindow) -> LatticeWindow:
    """The product set a.b = {x + y} in additive notation."""
    _check_dims(a, b)
    if a.is_empty or b.is_empty:
        return LatticeWindow(a.dim)
    x, y = a.as_array(), b.as_array()
    return LatticeWindow.from_array((x[:, None, :] + y[None, :, :]).reshape(-1, a.dim))


def cube_window(d: int, i: int) -> LatticeWindow:
    """The concentric cube [-i, i-1]^d of edge 2i."""
    if i < 1:
        raise ValueError("cube index must be >= 1")
    return LatticeWindow.box([-i] * d, [i - 1] * d)


def cube_of_edge(d: int, edge: int, corner: Sequence[int] | None = None) -> LatticeWindow:
    if edge < 1:
        raise ValueError("cube edge must be >= 1")
    corner = [0] * d if corner is None else list(corner)
    return LatticeWindow.box(corner, [c + edge - 1 for c in corner])


@dataclass(frozen=True)
class CubeSequence:
    """The amenable sequence of cubes [-i, i-1]^d for i = start, start+1, ..."""

    dim: int = 1
    start: int = 1

    def window(self, i: int) -> LatticeWindow:
        return cube_window(self.dim, i)

    def size(self, i: int) -> int:
        return (2 * i) ** self.dim

    def edge(self, i: int) -> int:
        return 2 * i

    def indices(self, i_max: int) -> range:
        return range(self.start, i_max + 1)

    def windows(self, i_max: int) -> Iterator[tuple[int, LatticeWindow]]:
        for i in self.indices(i_max):
            yield i, self.window(i)

    def boundary_ratios(self, N: float, i_max: int) -> list[float]:
        return [boundary_size(w, N) / len(w) for _, w in self.windows(i_max)]


# -- text format ------------------------------------------------------------

def format_window(window: LatticeWindow) -> str:
    lines = [f"d={window.dim}"]
    lines.extend(",".join(str(x) for x in p) for p in window.points)
    return "\n".join(lines) + "\n"


def parse_window(text: str) -> LatticeWindow:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("d="):
        raise ValueError("window file must start with a 'd=<dim>' line")
    dim = int(lines[0][2:])
    points = []
    for ln in lines[1:]:
        p = tuple(int(x) for x in ln.split(","))
        if len(p) != dim:
            raise ValueError(f"bad point line {ln!r} for dimension {dim}")
        points.append(p)
    return LatticeWindow(dim, tuple(points))


def read_window(path: str | Path) -> LatticeWindow:
    return parse_window(Path(path).read_text())


def write_window(window: LatticeWindow, path: str | Path) -> None:
    Path(path).write_text(format_window(window))


def windows_from(points: Iterable[Sequence[int]], dim: int) -> LatticeWindow:
    return LatticeWindow(dim, tuple(tuple(p) for p in points))
