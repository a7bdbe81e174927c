import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dynmorse.lattice import CubeSequence, LatticeWindow, boundary_size, cube_of_edge
from dynmorse.tiling import (
    SetFunction, check_tiling, grid_coverage, ow_superadditive_limit, quasi_tile,
    tiling_threshold, verify_superadditive,
)

LN2 = math.log(2)


def test_quasi_tile_examples():
    r = quasi_tile(LatticeWindow.interval(0, 99), [cube_of_edge(1, 10)], 0.05)
    assert len(r.placements) == 10 and r.coverage_ratio == 1.0 and not r.failed

    w = LatticeWindow.interval(0, 9)
    r = quasi_tile(w, [cube_of_edge(1, 3)], 0.1)
    assert len(r.placements) == 3 and r.coverage_ratio == pytest.approx(0.9)
    # 9/10 = 1 - 0.1 exactly: boundary case is not a failure
    assert not r.failed
    assert check_tiling(w, [cube_of_edge(1, 3)], r) == []

    sq = LatticeWindow.box([0, 0], [99, 99])
    r = quasi_tile(sq, [cube_of_edge(2, 10)], 0.01)
    assert len(r.placements) == 100 and r.coverage_ratio == 1.0


def test_failure_is_flagged():
    w = LatticeWindow.interval(0, 9)
    r = quasi_tile(w, [cube_of_edge(1, 4)], 0.1)
    assert r.covered == 8 and r.failed
    assert check_tiling(w, [cube_of_edge(1, 4)], r) == []


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2), st.integers(2, 7), st.integers(1, 40),
       st.sampled_from([0.01, 0.05, 0.1, 0.25]))
def test_tiling_invariants(d, t, extra, eps):
    E = t + extra if d == 1 else t + extra % 12
    w = LatticeWindow.box([0] * d, [E - 1] * d)
    tiles = [cube_of_edge(d, t)]
    r = quasi_tile(w, tiles, eps)
    assert check_tiling(w, tiles, r) == []
    assert r.covered == (E // t * t) ** d
    assert r.failed == (Fraction(r.covered, r.total) < 1 - Fraction(repr(eps)))
    assert r.coverage_ratio == pytest.approx(grid_coverage(E, t, d))


def test_smaller_tiles_fill_strips():
    w = LatticeWindow.box([0, 0], [12, 12])
    tiles = [cube_of_edge(2, 6), cube_of_edge(2, 3), cube_of_edge(2, 1)]
    r = quasi_tile(w, tiles, 0.01)
    assert check_tiling(w, tiles, r) == []
    assert r.covered == 169


def test_non_cube_tile_rejected():
    with pytest.raises(ValueError):
        quasi_tile(LatticeWindow.interval(0, 9), [LatticeWindow(1, ((0,), (2,)))], 0.1)


def test_tiling_threshold():
    # edge-4 tiles in 1-D with eps = 0.25: E fails only when E mod 4 > E/4
    E0 = tiling_threshold([cube_of_edge(1, 4)], 0.25, 40)
    assert E0 is not None
    for E in range(E0, 41):
        assert (E // 4 * 4) / E >= 0.75
    assert (E0 - 1) // 4 * 4 / (E0 - 1) < 0.75


def size_fn(w):
    return float(len(w))


def test_ow_additive():
    seq = CubeSequence(dim=1)
    est = ow_superadditive_limit(SetFunction(lambda w: len(w) * LN2), seq, 32)
    assert all(e == pytest.approx(LN2) for e in est.estimates)
    assert est.liminf_bound <= LN2 + 1e-12
    assert est.liminf_bound > 0.6


def test_ow_zero():
    est = ow_superadditive_limit(SetFunction(lambda w: 0.0), CubeSequence(dim=2), 8)
    assert est.estimates == [0.0] * 8 and est.liminf_bound == 0.0


def test_ow_boundary_corrected():
    h = SetFunction(lambda w: len(w) * LN2 - boundary_size(w, 1))
    est = ow_superadditive_limit(h, CubeSequence(dim=1), 128, i_min=3)
    for i, e in zip(est.indices, est.estimates):
        assert e == pytest.approx(LN2 - 2 / i)
    assert all(b > a for a, b in zip(est.estimates, est.estimates[1:]))
    assert all(b >= a for a, b in zip(est.certificates, est.certificates[1:]))
    assert est.liminf_bound <= LN2


def test_ow_rejects_negative():
    h = SetFunction(lambda w: len(w) * LN2 - boundary_size(w, 1))
    with pytest.raises(ValueError):
        ow_superadditive_limit(h, CubeSequence(dim=1), 10)
    with pytest.raises(ValueError):
        ow_superadditive_limit(SetFunction(size_fn), CubeSequence(dim=1), 1)


def test_verify_superadditive_examples():
    assert verify_superadditive(SetFunction(size_fn), trials=200, rng_seed=1).passed
    assert verify_superadditive(SetFunction(lambda w: len(w) ** 2), trials=200, rng_seed=2, dim=2).passed
    rep = verify_superadditive(SetFunction(lambda w: math.sqrt(len(w))), trials=50, rng_seed=3)
    assert not rep.passed and rep.failures
    a, b, lhs, rhs = rep.failures[0]
    assert a.isdisjoint(b) and lhs < rhs


def test_verify_detects_non_invariance():
    h = SetFunction(lambda w: float(len(w)) + 1e-3 * min(p[0] for p in w.points) ** 2)
    rep = verify_superadditive(h, trials=20)
    assert rep.invariance_failures
