"""Morse inequalities for a single Morse function on the molecule."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field


@dataclass(frozen=True)
class SpectrumPoint:
    level: float
    index: int
    contributes: bool = True


@dataclass(frozen=True)
class MorseSpectrumSpec:
    """Critical points of one Morse function with the Betti numbers of the manifold.

    ``betti`` may be empty, in which case SB is taken as the number of
    contributing points (the perfect case).
    """

    points: tuple[SpectrumPoint, ...]
    betti: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "betti", tuple(int(b) for b in self.betti))
        for p in self.points:
            if p.level != p.level or p.level in (float("inf"), float("-inf")):
                raise ValueError(f"non-finite critical level {p.level}")

    @property
    def SB(self) -> int:
        if self.betti:
            return sum(self.betti)
        return sum(p.contributes for p in self.points)


@dataclass
class MorseReport:
    b: dict[float, int]
    crit: dict[float, int]
    SB: int
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def total(self) -> int:
        return sum(self.b.values())


def morse_check_single(spec: MorseSpectrumSpec) -> MorseReport:
    """Check sum_c b(c) = SB and b(c) <= Crit_c(f) level by level."""
    crit = Counter(p.level for p in spec.points)
    b = Counter(p.level for p in spec.points if p.contributes)
    b = {c: b.get(c, 0) for c in sorted(crit)}
    violations = []
    total = sum(b.values())
    if total != spec.SB:
        violations.append(f"sum of b(c) is {total}, SB is {spec.SB}")
    for c in sorted(crit):
        if b[c] > crit[c]:
            violations.append(f"b({c}) = {b[c]} exceeds Crit_c = {crit[c]}")
    if spec.betti:
        per_index = Counter(p.index for p in spec.points if p.contributes)
        m = len(spec.betti) - 1
        # a class of degree k is detected by a critical point of index m - k
        for k, bk in enumerate(spec.betti):
            if per_index.get(m - k, 0) != bk:
                violations.append(
                    f"{per_index.get(m - k, 0)} contributing points of index {m - k}, b_{k} = {bk}")
    return MorseReport(b, dict(sorted(crit.items())), spec.SB, violations)
