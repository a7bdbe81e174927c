"""Experiments across modules: limits along cube sequences, concavity and usc scans."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .cohomology.counting import NEG_INF, homological_measure_exact, log_measure
from .cohomology.maxent import class_points, entropy_asymptotic, maxent
from .cohomology.profile import EntropyProfile
from .cohomology.spec import MoleculeSpec
from .lattice import CubeSequence, LatticeWindow
from .tiling import SetFunction, ow_superadditive_limit

DEFAULT_SCHEDULE = (0.2, 0.1, 0.05, 0.02)


# -- configuration -------------------------------------------------------------

@dataclass
class ExperimentConfig:
    """Parameters for the ``analyze`` command, read from ``key = value`` lines.

    Keys: spec, dim, i_min, i_max, ell, c, nu_schedule, delta_schedule,
    resolution, segments, seed, output_dir, studies, dyadic_n.  Schedules and
    studies are comma-separated lists.
    """

    spec: str = "s1"
    dim: int = 1
    i_min: int = 1
    i_max: int = 12
    ell: float = 0.5
    c: float = 0.5
    nu_schedule: tuple[float, ...] = DEFAULT_SCHEDULE
    delta_schedule: tuple[float, ...] = DEFAULT_SCHEDULE
    resolution: int = 21
    segments: int = 200
    seed: int = 0
    output_dir: str = "analysis_out"
    studies: tuple[str, ...] = ("limit", "concavity", "usc")
    dyadic_n: int = 12

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.i_min < 1 or self.i_max < self.i_min:
            raise ValueError(f"empty index range [{self.i_min}, {self.i_max}]")
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        for name in ("nu_schedule", "delta_schedule"):
            sched = getattr(self, name)
            if not sched or any(x <= 0 for x in sched):
                raise ValueError(f"{name} must be a nonempty list of positive values")
            if any(b >= a for a, b in zip(sched, sched[1:])):
                raise ValueError(f"{name} must be strictly decreasing")
        if len(self.nu_schedule) != len(self.delta_schedule):
            raise ValueError("nu_schedule and delta_schedule must have the same length")
        if self.resolution < 2:
            raise ValueError("resolution must be >= 2")
        unknown = set(self.studies) - {"limit", "concavity", "usc"}
        if unknown:
            raise ValueError(f"unknown studies {sorted(unknown)}")

    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        types = {f.name: f.type for f in fields(cls)}
        kwargs = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"line {lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            if key not in types:
                raise ValueError(f"line {lineno}: unknown key {key!r}")
            kind = types[key]
            if "tuple[float" in kind:
                kwargs[key] = tuple(float(v) for v in value.split(",") if v.strip())
            elif "tuple[str" in kind:
                kwargs[key] = tuple(v.strip() for v in value.split(",") if v.strip())
            elif kind == "int":
                kwargs[key] = int(value)
            elif kind == "float":
                kwargs[key] = float(value)
            else:
                kwargs[key] = value
        return cls(**kwargs)

    @classmethod
    def read(cls, path: str | Path) -> "ExperimentConfig":
        return cls.parse(Path(path).read_text())


# -- limits along the cube sequence ----------------------------------------------

@dataclass
class LimitRow:
    i: int
    n: int
    log_count: float
    rate: float
    certificate: float
    target: float


def _count_function(spec: MoleculeSpec, ell, nu, c, delta) -> SetFunction:
    # counts depend on the window only through its size
    def h(w: LatticeWindow) -> float:
        return log_measure(spec, len(w), ell, nu, c, delta)
    return SetFunction(h, name="ln count")


def entropy_limit_study(spec: MoleculeSpec, seq: CubeSequence, ell, nu, c, delta,
                        i_max: int, i_min: int = 1) -> list[LimitRow]:
    """Per-window rates (1/|W_i|) ln count, the OW certificate and the asymptotic target."""
    target = entropy_asymptotic(spec, float(ell), float(c))
    h = _count_function(spec, ell, nu, c, delta)
    logs = [h(seq.window(i)) for i in range(i_min, i_max + 1)]
    certs = [math.nan] * len(logs)
    # the certificate needs h >= 0 on every window, i.e. nonzero counts throughout
    if all(v >= 0 for v in logs) and i_max > i_min:
        est = ow_superadditive_limit(h, seq, i_max, i_min=i_min)
        certs = est.certificates
    rows = []
    for k, i in enumerate(range(i_min, i_max + 1)):
        n = seq.size(i)
        rate = logs[k] / n if logs[k] != NEG_INF else NEG_INF
        rows.append(LimitRow(i, n, logs[k], rate, certs[k], target))
    return rows


def subsequence_agreement(spec: MoleculeSpec, seq: CubeSequence, ell, nu, c, delta,
                          i_tail: int) -> float:
    """|rate along i - rate along 2i| at the tail index i_tail."""
    a = log_measure(spec, seq.size(i_tail), ell, nu, c, delta) / seq.size(i_tail)
    b = log_measure(spec, seq.size(2 * i_tail), ell, nu, c, delta) / seq.size(2 * i_tail)
    return abs(a - b)


# -- concavity -----------------------------------------------------------------

@dataclass
class ConcavityFailure:
    start: tuple[float, float]
    end: tuple[float, float]
    midpoint: tuple[float, float]
    values: tuple[float, float, float]


@dataclass
class ConcavityReport:
    checked: int
    failures: list[ConcavityFailure]
    dyadic_checked: int = 0
    dyadic_failures: list[tuple] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and not self.dyadic_failures


def concavity_scan(profile: EntropyProfile, segments: int = 200, seed: int = 0, tol: float = 1e-8,
                   dyadic: int = 0, dyadic_n: int = 12, dyadic_nu: float = 0.1,
                   dyadic_delta: float = 0.1) -> ConcavityReport:
    """Midpoint concavity on grid segments whose midpoint is again a grid point.

    Endpoints are drawn from the feasible (finite) cells.  With ``dyadic > 0``
    the doubling step count_{2n}(midpoint) >= count_n(P) count_n(P') is also
    checked on exact integers for that many sampled pairs.
    """
    rng = np.random.default_rng(seed)
    finite = np.argwhere(profile.finite_mask())
    failures: list[ConcavityFailure] = []
    checked = 0
    if len(finite) >= 2:
        parity = finite % 2
        for _ in range(segments):
            p = finite[rng.integers(len(finite))]
            same = np.flatnonzero((parity == p % 2).all(axis=1) & (finite != p).any(axis=1))
            if same.size == 0:
                continue
            q = finite[same[rng.integers(same.size)]]
            m = (p + q) // 2
            vp, vq, vm = (float(profile.values[tuple(x)]) for x in (p, q, m))
            checked += 1
            if not vm >= 0.5 * (vp + vq) - tol:
                loc = lambda x: (float(profile.ells[x[0]]), float(profile.cs[x[1]]))
                failures.append(ConcavityFailure(loc(p), loc(q), loc(m), (vp, vq, vm)))

    dyadic_failures = []
    for _ in range(dyadic):
        if len(finite) == 0:
            break
        p, q = finite[rng.integers(len(finite))], finite[rng.integers(len(finite))]
        (l1, c1), (l2, c2) = ((float(profile.ells[x[0]]), float(profile.cs[x[1]])) for x in (p, q))
        a = homological_measure_exact(profile.spec, dyadic_n, l1, dyadic_nu, c1, dyadic_delta).count
        b = homological_measure_exact(profile.spec, dyadic_n, l2, dyadic_nu, c2, dyadic_delta).count
        mid = homological_measure_exact(profile.spec, 2 * dyadic_n, (l1 + l2) / 2, dyadic_nu,
                                        (c1 + c2) / 2, dyadic_delta).count
        if mid < a * b:
            dyadic_failures.append(((l1, c1), (l2, c2), mid, a * b))
    return ConcavityReport(checked, failures, dyadic, dyadic_failures)


# -- upper semicontinuity ------------------------------------------------------------

@dataclass
class UscReport:
    point: tuple[float, float]
    value: float
    radii: list[float]
    sup_by_radius: list[float]
    limsup: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.limsup <= self.value + self.tol or self.limsup == NEG_INF


DEFAULT_RADII = tuple(10.0 ** -k for k in range(1, 13))


def usc_probe(profile: EntropyProfile, point: tuple[float, float], radii=DEFAULT_RADII,
              samples: int = 32, seed: int = 0, tol: float = 1e-8) -> UscReport:
    """Sup of b over samples within each radius; the smallest radius estimates the limsup.

    Samples come from the box around the point (mostly infeasible off the hull)
    and from moment points of class distributions mixed toward the maximizer at
    the point, which stay on the feasible set.
    """
    rng = np.random.default_rng(seed)
    ell, c = map(float, point)
    value = profile.evaluate(ell, c)
    X = class_points(profile.spec)
    best = maxent(profile.spec, ell, c) if value != NEG_INF else None
    sups = []
    for r in radii:
        sup = NEG_INF
        for _ in range(samples):
            d = rng.uniform(-r, r, size=2)
            sup = max(sup, profile.evaluate(ell + d[0], c + d[1]))
            if best is not None and best.p is not None:
                w = rng.dirichlet(np.ones(len(X)))
                t = r / max(1.0, float(np.abs(X).max()))
                mix = (1 - t) * best.p + t * w
                y = mix @ X
                sup = max(sup, profile.evaluate(float(y[0]), float(y[1])))
        sups.append(sup)
    return UscReport((ell, c), value, list(radii), sups, sups[-1], tol)
