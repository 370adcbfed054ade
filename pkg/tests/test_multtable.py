import pytest
from hypothesis import given
from hypothesis import strategies as st

import mingap.multtable as mt
from mingap.diffstats import diff_stats
from mingap.errors import CapacityError, ParameterError
from mingap.multtable import (HQuery, H_count, ford_ratio, multtable_csv, multtable_rows,
                              square_diff_count, table_count)
from mingap.sequences import make_sequence


def h_brute(x, y, z):
    return sum(1 for n in range(1, x + 1) if any(n % d == 0 for d in range(y + 1, z + 1)))


def test_H_examples():
    assert H_count(HQuery(20, 2, 4)) == 10
    assert H_count(HQuery(10, 1, 2)) == 5
    assert H_count(HQuery(50, 7, 7)) == 0
    with pytest.raises(ParameterError):
        HQuery(10, 0, 1)
    with pytest.raises(CapacityError):
        H_count(HQuery(100, 2, 4), capacity=50)


@given(st.integers(0, 300), st.integers(1, 40), st.integers(0, 40))
def test_H_matches_divisor_scan_and_is_monotone(x, y, dz):
    q = HQuery(x, y, y + dz)
    h = H_count(q)
    assert h == h_brute(x, y, y + dz)
    assert h <= x
    assert H_count(HQuery(x + 1, y, y + dz)) >= h
    assert H_count(HQuery(x, y, y + dz + 1)) >= h


def test_ford_window():
    assert HQuery(100, 5, 10).in_ford_window
    assert not HQuery(100, 5, 9).in_ford_window
    assert not HQuery(100, 11, 30).in_ford_window


@pytest.mark.parametrize("n", [1, 2, 3, 7, 40, 123])
def test_table_count_matches_set_build(n):
    assert table_count(n) == len({a * b for a in range(1, n + 1) for b in range(1, n + 1)})


def test_table_count_known_values():
    assert table_count(3) == 6
    assert table_count(1000) == 248083


def test_square_diff_examples():
    assert square_diff_count(1) == 0
    assert square_diff_count(2) == 1
    assert square_diff_count(4) == 6


def test_square_diff_matches_diffstats_to_1000():
    sq = make_sequence("squares")
    for n in list(range(2, 60)) + [257, 1000]:
        assert square_diff_count(n) == diff_stats(sq.prefix(n)).c_plus


def test_segmented_sweep_matches_single_segment(monkeypatch):
    expect = (table_count(300), square_diff_count(300))
    monkeypatch.setattr(mt, "SEGMENT", 997)
    assert (mt.table_count(300), mt.square_diff_count(300)) == expect


def test_capacity():
    with pytest.raises(CapacityError):
        table_count(100, capacity=9999)


def test_csv():
    text = multtable_csv(multtable_rows([1, 3]))
    assert text.splitlines()[0] == "N,count,ford_ratio"
    assert text.endswith("\r\n")
    assert text.splitlines()[2].startswith("3,6,")
    assert ford_ratio(3, 6) == pytest.approx(6 * 1.0986122886681098**0.0860713320559343 / 9)
