import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dynmorse.cohomology import (
    MorseSpectrumSpec, SpectrumPoint, circle_spec, morse_check_single,
    poincare_limit, poincare_polynomial, point_spec, torus_spec,
)
from oracles import degree_counts_brute

S1 = circle_spec()
T2 = torus_spec()


def test_circle_height_function():
    rep = morse_check_single(S1.morse_spectrum())
    assert rep.passed and rep.total == 2 == rep.SB
    assert rep.b == {0.0: 1, 1.0: 1}


def test_torus_perfect():
    rep = morse_check_single(T2.morse_spectrum())
    assert rep.passed and rep.total == 4
    assert all(v == 1 for v in rep.b.values())


def test_equal_levels():
    spec = MorseSpectrumSpec((SpectrumPoint(0.5, 0), SpectrumPoint(0.5, 1)), (1, 1))
    rep = morse_check_single(spec)
    assert rep.passed and rep.b[0.5] == 2 == rep.crit[0.5]


def test_violations_reported():
    # a cancelling pair on S^1: extra points that do not contribute are fine
    ok = MorseSpectrumSpec((SpectrumPoint(0, 1), SpectrumPoint(1, 0), SpectrumPoint(0.4, 0, False),
                            SpectrumPoint(0.6, 1, False)), (1, 1))
    assert morse_check_single(ok).passed
    bad = MorseSpectrumSpec((SpectrumPoint(0, 1), SpectrumPoint(1, 1)), (1, 1))
    rep = morse_check_single(bad)
    assert not rep.passed and any("index" in v for v in rep.violations)
    short = MorseSpectrumSpec((SpectrumPoint(0, 1),), (1, 1))
    assert any("SB" in v for v in morse_check_single(short).violations)
    with pytest.raises(ValueError):
        MorseSpectrumSpec((SpectrumPoint(float("nan"), 0),))


def test_poincare_examples():
    p = poincare_polynomial(S1, 3, 1, exact=True)
    assert p.value == pytest.approx(7) and p.exact == 7
    for spec in (S1, T2, point_spec()):
        assert poincare_polynomial(spec, 4, 0).value == 0.0
    assert poincare_polynomial(S1, 2000, 1).per_site_log == pytest.approx(math.log(2), abs=1e-12)
    assert poincare_limit(T2, 1) == pytest.approx(math.log(4))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.fractions(0, 3, max_denominator=7))
def test_closed_form(n, t):
    for spec in (S1, T2):
        counts = degree_counts_brute(spec.degrees, n)
        expected = sum(t ** d * c for d, c in enumerate(counts) if d >= 1)
        G = sum(t ** d for d in spec.degrees)
        assert poincare_polynomial(spec, n, t, exact=True).exact == expected == G ** n - 1
        full = poincare_polynomial(spec, n, t, exact=True, include_constant=True)
        assert full.exact == G ** n
        assert full.value == pytest.approx(float(G ** n), rel=1e-10)


def test_constant_term_at_zero():
    assert poincare_polynomial(T2, 5, 0, include_constant=True).value == pytest.approx(1.0)


def test_d_ge_1_sum_not_submultiplicative():
    # p_1(1) = 1 for S^1 but p_2(1) = 3
    assert poincare_polynomial(S1, 2, 1).value > poincare_polynomial(S1, 1, 1).value ** 2


def test_poincare_validation():
    with pytest.raises(ValueError):
        poincare_polynomial(S1, 0, 1)
    with pytest.raises(ValueError):
        poincare_polynomial(S1, 3, -1)
    with pytest.raises(ValueError):
        poincare_limit(S1, -0.5)


def test_exact_with_float_t():
    assert poincare_polynomial(S1, 2, 0.5, exact=True).exact == Fraction(3, 2) ** 2 - 1
