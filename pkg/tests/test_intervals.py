from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mingap.errors import ParameterError
from mingap.intervals import IntervalUnion, build_S, intersect, measure, union_all
from mingap.numtheory import totient

dyadic_psi = st.integers(0, 2**12 - 1).map(lambda n: Fraction(n, 2**13))


def test_build_S_examples():
    assert measure(build_S(4, 0.1)) == 2 * Fraction(0.1)
    assert float(measure(build_S(4, 0.1, coprime_only=True))) == pytest.approx(0.1)
    assert measure(build_S(1, 0.4)) == 2 * Fraction(0.4)
    assert measure(build_S(1, 0.6)) == 1


def test_build_S_endpoints_clip_not_wrap():
    u = build_S(4, Fraction(1, 8))
    assert u.intervals[0] == (0, Fraction(1, 32))
    assert u.intervals[-1] == (Fraction(31, 32), 1)


@given(st.integers(1, 300), dyadic_psi)
def test_measure_identities(k, psi):
    assert measure(build_S(k, psi)) == min(2 * psi, 1)
    if k >= 2:
        assert measure(build_S(k, psi, coprime_only=True)) == 2 * psi * totient(k) / k


def test_grid_oracle_for_intersection():
    u = intersect(build_S(4, 0.1), build_S(6, 0.1))
    x = (np.arange(10**6) + 0.5) / 10**6
    assert abs(np.count_nonzero(u.contains(x)) / 10**6 - float(measure(u))) < 1e-5


unions = st.lists(st.tuples(st.integers(0, 64), st.integers(1, 16)), max_size=8).map(
    lambda ps: IntervalUnion.from_intervals([(Fraction(a, 64), Fraction(a + w, 64)) for a, w in ps]))


@given(unions, unions)
def test_lattice_properties(u, v):
    assert intersect(u, u) == u
    assert measure(intersect(u, v)) <= min(measure(u), measure(v))
    assert measure(u.union(v)) == measure(u) + measure(v) - measure(intersect(u, v))
    assert union_all([u, v]) == u.union(v)
    lo = [a for a, _ in u.intervals]
    hi = [b for _, b in u.intervals]
    assert all(a < b for a, b in zip(lo, hi))
    assert all(b < a for b, a in zip(hi, lo[1:]))


def test_touching_intervals_merge_and_clip():
    u = IntervalUnion.from_intervals([(Fraction(-1, 2), Fraction(1, 4)), (Fraction(1, 4), Fraction(1, 2))])
    assert u.intervals == [(0, Fraction(1, 2))]
    assert len(IntervalUnion.empty()) == 0 and measure(IntervalUnion.empty()) == 0


def test_errors():
    with pytest.raises(ParameterError):
        build_S(0, 0.1)
    with pytest.raises(ParameterError):
        build_S(3, -0.1)
