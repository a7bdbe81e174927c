"""Molecule cohomology specs: basis classes with a degree and a support level."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from pathlib import Path
from typing import Sequence


def as_fraction(x) -> Fraction:
    """Exact rational from int/Fraction/str; floats are read through their decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x}")
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class BasisClass:
    degree: int
    level: Fraction


@dataclass(frozen=True)
class MoleculeSpec:
    """Basis of H*(M; F) with per-class degree and support level in [0, 1].

    The identity class (degree 0, level 1) must appear exactly once.  ``m`` is
    the dimension of M.
    """

    m: int
    classes: tuple[BasisClass, ...]
    name: str = ""

    def __post_init__(self):
        classes = tuple(BasisClass(int(c.degree), as_fraction(c.level)) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        if self.m < 0:
            raise ValueError("m must be nonnegative")
        if not classes:
            raise ValueError("spec needs at least the identity class")
        for c in classes:
            if not 0 <= c.degree <= self.m:
                raise ValueError(f"degree {c.degree} outside [0, {self.m}]")
            if not 0 <= c.level <= 1:
                raise ValueError(f"level {c.level} outside [0, 1]")
        n_identity = sum(1 for c in classes if c.degree == 0 and c.level == 1)
        if n_identity != 1:
            raise ValueError(f"expected exactly one identity class (d=0, v=1), found {n_identity}")

    @classmethod
    def from_pairs(cls, m: int, pairs: Sequence[tuple[int, object]], name: str = "") -> "MoleculeSpec":
        return cls(m, tuple(BasisClass(d, as_fraction(v)) for d, v in pairs), name)

    @property
    def B(self) -> int:
        return len(self.classes)

    @property
    def degrees(self) -> list[int]:
        return [c.degree for c in self.classes]

    @property
    def levels(self) -> list[Fraction]:
        return [c.level for c in self.classes]

    @property
    def level_denominator(self) -> int:
        return reduce(math.lcm, (c.level.denominator for c in self.classes), 1)

    @property
    def has_fundamental_class(self) -> bool:
        return any(c.degree == self.m for c in self.classes)

    def scaled_levels(self) -> list[int]:
        q = self.level_denominator
        return [int(c.level * q) for c in self.classes]

    def types(self) -> list[tuple[int, int, int]]:
        """Distinct (degree, scaled level) pairs with multiplicities, in first-seen order."""
        seen: dict[tuple[int, int], int] = {}
        for d, w in zip(self.degrees, self.scaled_levels()):
            seen[(d, w)] = seen.get((d, w), 0) + 1
        return [(d, w, mult) for (d, w), mult in seen.items()]

    def degree_groups(self) -> list[tuple[int, int]]:
        """Distinct degrees with the number of classes of that degree."""
        seen: dict[int, int] = {}
        for d in self.degrees:
            seen[d] = seen.get(d, 0) + 1
        return sorted(seen.items())

    def morse_spectrum(self):
        """Critical data of a perfect Morse function realizing this spec.

        Each class of degree k sits at its support level with Morse index m - k.
        """
        from .morse import MorseSpectrumSpec, SpectrumPoint

        betti = [0] * (self.m + 1)
        for c in self.classes:
            betti[c.degree] += 1
        pts = tuple(SpectrumPoint(float(c.level), self.m - c.degree, True) for c in self.classes)
        return MorseSpectrumSpec(pts, tuple(betti))


def circle_spec() -> MoleculeSpec:
    """S^1 with a height function: identity at the maximum, fundamental class at the minimum."""
    return MoleculeSpec.from_pairs(1, [(0, 1), (1, 0)], name="S1")


def torus_spec() -> MoleculeSpec:
    """T^2 with a perfect Morse function whose saddles sit at levels 1/3 and 2/3."""
    return MoleculeSpec.from_pairs(
        2, [(0, 1), (1, Fraction(2, 3)), (1, Fraction(1, 3)), (2, 0)], name="T2")


def point_spec() -> MoleculeSpec:
    """Degenerate one-class spec (identity only)."""
    return MoleculeSpec.from_pairs(0, [(0, 1)], name="point")


BUILTIN_SPECS = {"s1": circle_spec, "torus": torus_spec, "point": point_spec}


# -- text format ------------------------------------------------------------

_HEADER = re.compile(r"^m=(\d+)\s+B=(\d+)$")
_CLASS = re.compile(r"^d=(-?\d+)\s+v=([0-9/.\-]+)$")


def parse_spec(text: str, name: str = "") -> MoleculeSpec:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty spec file")
    head = _HEADER.match(lines[0])
    if not head:
        raise ValueError(f"bad header {lines[0]!r}; expected 'm=<dim> B=<rank>'")
    m, B = int(head.group(1)), int(head.group(2))
    pairs = []
    for ln in lines[1:]:
        mt = _CLASS.match(ln)
        if not mt:
            raise ValueError(f"bad class line {ln!r}; expected 'd=<int> v=<p/q>'")
        pairs.append((int(mt.group(1)), Fraction(mt.group(2))))
    if len(pairs) != B:
        raise ValueError(f"header declares B={B} but {len(pairs)} classes follow")
    return MoleculeSpec.from_pairs(m, pairs, name=name)


def format_spec(spec: MoleculeSpec) -> str:
    lines = [f"m={spec.m} B={spec.B}"]
    lines += [f"d={c.degree} v={c.level.numerator}/{c.level.denominator}" for c in spec.classes]
    return "\n".join(lines) + "\n"


def read_spec(path: str | Path) -> MoleculeSpec:
    p = Path(path)
    return parse_spec(p.read_text(), name=p.stem)


def load_spec(ref: str) -> MoleculeSpec:
    """A builtin spec name ('s1', 'torus', 'point') or a spec file path."""
    if ref.lower() in BUILTIN_SPECS:
        return BUILTIN_SPECS[ref.lower()]()
    return read_spec(ref)
