import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dynmorse.cohomology import circle_spec
from dynmorse.crystal import (
    PairPotential, SolverConfig, build_energy, chain, cri, find_critical_points, grid,
    locality_decay, morse_bound_check, spectrum, window_edges,
)
from dynmorse.crystal.morse_bound import cohomology_count
from dynmorse.lattice import CubeSequence, LatticeWindow
from oracles import grid_scan_critical

PEND = PairPotential.pendulum()
S1 = circle_spec()


def random_energy(rng):
    pot = PairPotential(*rng.uniform(-1, 1, 4), K=float(rng.uniform(0, 1)), check=False)
    w = chain(int(rng.integers(1, 6))) if rng.random() < 0.5 else grid(*rng.integers(1, 4, 2))
    return build_energy(w, pot)


def test_derivatives_by_finite_differences():
    rng = np.random.default_rng(0)
    h = 1e-5
    for _ in range(120):
        E = random_energy(rng)
        x = rng.uniform(0, 2 * math.pi, E.n)
        eye = np.eye(E.n)
        g_fd = np.array([(E.value(x + h * e) - E.value(x - h * e)) / (2 * h) for e in eye])
        H_fd = np.array([(E.grad(x + h * e) - E.grad(x - h * e)) / (2 * h) for e in eye])
        assert np.abs(E.grad(x) - g_fd).max() < 1e-6
        assert np.abs(E.hessian(x) - H_fd).max() < 1e-6
        v = rng.normal(size=E.n)
        assert np.allclose(E.hvp(x, v), E.hessian(x) @ v, atol=1e-12)


def test_energy_examples():
    E = build_energy(chain(1), PairPotential.pendulum(3.0))
    assert len(E.edges) == 0 and E.value([1.2]) == pytest.approx(PEND.V(1.2))
    E3 = build_energy(chain(3), PEND)
    x = np.array([0.3, 2.0, -1.0])
    assert E3.normalized(x) == pytest.approx(PEND.V(x).sum() / 3)
    assert len(window_edges(grid(2, 2))) == 4
    assert len(window_edges(grid(3, 4))) == 17


def test_energy_validation():
    with pytest.raises(ValueError):
        build_energy(LatticeWindow(1), PEND)
    with pytest.raises(ValueError):
        build_energy(LatticeWindow.box([0, 0, 0], [1, 1, 1]), PEND)
    with pytest.raises(ValueError):
        PairPotential(K=-1)
    with pytest.raises(ValueError):
        PairPotential(0, 0, 0, 0)  # constant V is not Morse


@settings(max_examples=30, deadline=None)
@given(st.integers(-30, 30), st.integers(-30, 30), st.floats(0, 1))
def test_translation_invariance(sx, sy, K):
    pot = PairPotential.pendulum(K)
    w = grid(2, 3)
    E, Es = build_energy(w, pot), build_energy(w.translate([sx, sy]), pot)
    x = np.linspace(0, 5, 6)
    assert E.value(x) == pytest.approx(Es.value(x))
    assert np.array_equal(E.edges, Es.edges)


def test_potential_critical_points():
    assert np.allclose(PEND.critical_points(), [0, math.pi])
    assert (PEND.v_min, PEND.v_max) == pytest.approx((0, 1))
    two_well = PairPotential(0, 0, 0, 1)
    assert len(two_well.critical_points()) == 4


def test_single_pendulum():
    pts = find_critical_points(build_energy(chain(1), PEND))
    assert len(pts) == 2
    assert pts[0].value == pytest.approx(0) and pts[0].morse_index == 0
    assert pts[1].value == pytest.approx(1) and pts[1].morse_index == 1
    assert pts[1].angles[0] == pytest.approx(math.pi)


def test_uncoupled_chain():
    pts = find_critical_points(build_energy(chain(3), PEND))
    assert len(pts) == 8 and pts.euler_sum == 0
    vals = np.round([p.value * 3 for p in pts]).astype(int)
    assert np.bincount(vals).tolist() == [1, 3, 3, 1]
    assert max(p.grad_norm for p in pts) <= 1e-10


@pytest.mark.parametrize("n", [2, 3])
def test_coupled_matches_grid_scan(n):
    pot = PairPotential.pendulum(0.05)
    pts = find_critical_points(build_energy(chain(n), pot))
    scan = grid_scan_critical(n, 0.05, 721 if n == 2 else 121)
    assert len(pts) == len(scan) == 2 ** n
    for r in scan:
        d = [np.abs(np.mod(np.array(p.angles) - r + math.pi, 2 * math.pi) - math.pi).max() for p in pts]
        assert min(d) < 1e-6


def test_solver_cap_and_determinism(monkeypatch):
    E = build_energy(chain(4), PairPotential.pendulum(0.3))
    cfg = SolverConfig(starts=32, seed=5)
    a = find_critical_points(E, cfg, workers=1)
    b = find_critical_points(E, cfg, workers=3)
    assert [p.angles for p in a] == [p.angles for p in b]
    with pytest.raises(ValueError):
        find_critical_points(build_energy(chain(13), PEND))


def test_spectrum_and_cri():
    pts = find_critical_points(build_energy(chain(3), PEND))
    hist = spectrum(pts, 3)
    assert hist.count((0.25, 0.42)) == 3
    assert cri(hist, (0.25, 0.42)) == pytest.approx(math.log(3) / 3)
    assert cri(hist, (-1, 2)) == pytest.approx(math.log(2))
    assert cri(hist, (0.4, 0.45)) == -math.inf
    assert hist.count((-1, 2), distinct_values=True) == 4
    with pytest.raises(ValueError):
        cri(hist, (0.5, 0.5))


@settings(max_examples=40, deadline=None)
@given(st.floats(-0.5, 1.5), st.floats(0.01, 1), st.floats(0, 0.5))
def test_cri_monotone_in_interval(a, w, extra):
    hist = spectrum(find_critical_points(build_energy(chain(3), PEND)), 3)
    assert cri(hist, (a - extra, a + w + extra)) >= cri(hist, (a, a + w))


def test_morse_bound_uncoupled():
    rep = morse_bound_check(S1, PEND, None, (0.45, 0.55), sizes=range(4, 11))
    assert rep.passed and rep.status == "ok"
    for row in rep.rows:
        assert row.margin >= 0 and row.complete
        if row.n % 2 == 0:
            assert row.crit_count == row.coh_count == math.comb(row.n, row.n // 2)
    tail = morse_bound_check(S1, PEND, None, (0.0, 0.05), sizes=[4, 6])
    assert tail.passed
    one = morse_bound_check(S1, PEND, CubeSequence(1), (-0.5, 0.5), i_max=1)
    assert one.passed


def test_morse_bound_coupled_levels():
    pot = PairPotential.pendulum(0.05)
    rep = morse_bound_check(S1, pot, None, (0.4, 0.7), sizes=[2, 3, 4])
    assert rep.level_checks and not rep.level_failures
    assert rep.passed


def test_cohomology_count_shrinks_with_coupling():
    # n = 6 chain: levels (6 - k)/6 for k fundamental classes
    assert cohomology_count(S1, PEND, 6, 5, (0.3, 0.7)) == 15 + 20 + 15
    # K = 0.1 shrinks the top end by 2 K |E| / n = 1/6
    assert cohomology_count(S1, PairPotential.pendulum(0.1), 6, 5, (0.3, 0.7)) == 15 + 20


def test_locality_decay():
    seq = CubeSequence(1)
    rows = locality_decay(PairPotential.pendulum(0.1), seq, [2, 4, 8, 16, 32])
    for r in rows:
        assert r.delta == pytest.approx(0.4 / r.i)
        assert r.crossing_edges == 2
    assert all(r.delta == 0 for r in locality_decay(PairPotential.pendulum(0.1), seq, [2, 8], radius=0))
    assert all(r.delta == 0 for r in locality_decay(PairPotential.constant(1.0), seq, [2, 8]))
    rows2 = locality_decay(PairPotential.pendulum(0.1), CubeSequence(2), [1, 2, 4], samples=4)
    assert rows2[0].delta > rows2[1].delta > rows2[2].delta
    with pytest.raises(ValueError):
        locality_decay(PEND, seq, [2], radius=2)
