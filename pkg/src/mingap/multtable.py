"""Multiplication-table and divisor-in-interval counts.

The counts are taken from boolean "bitsets" over value ranges.  Large ranges
are swept in segments so memory stays bounded by ``SEGMENT`` bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ParameterError
from .io import csv_text, fmt_float, write_text
from .metricda import MULT_TABLE_C, clog

BITSET_CAPACITY = 1 << 31
#: Value range for segmented sweeps (``table_count``, ``square_diff_count``).
SWEEP_CAPACITY = 1 << 34
SEGMENT = 1 << 25


@dataclass(frozen=True)
class HQuery:
    """Count integers ``n <= x`` having a divisor in ``(y, z]``."""

    x: int
    y: int
    z: int

    def __post_init__(self):
        if self.x < 0 or self.y < 1 or self.z < self.y:
            raise ParameterError("need x >= 0, y >= 1 and z >= y")

    @property
    def in_ford_window(self) -> bool:
        """``y <= sqrt(x)`` and ``2y <= z <= y^2``: where the order of magnitude is known."""
        return self.y * self.y <= self.x and 2 * self.y <= self.z <= self.y * self.y


def H_count(q: HQuery, capacity: int = BITSET_CAPACITY) -> int:
    if q.x > capacity:
        raise CapacityError(f"x = {q.x} exceeds bitset capacity {capacity}")
    if q.z == q.y or q.x == 0:
        return 0
    flags = np.zeros(q.x + 1, dtype=bool)
    for d in range(q.y + 1, min(q.z, q.x) + 1):
        flags[d::d] = True
    return int(np.count_nonzero(flags))


def _sweep(top: int, progressions, capacity: int) -> int:
    """Count distinct values in ``[1, top]`` covered by arithmetic progressions.

    ``progressions(lo, hi)`` yields ``(first, last, step)`` triples restricted to
    the half-open segment ``[lo, hi)``.
    """
    if top > capacity:
        raise CapacityError(f"value range {top} exceeds sweep capacity {capacity}")
    total = 0
    seg = np.empty(min(SEGMENT, top + 1), dtype=bool)
    for lo in range(0, top + 1, SEGMENT):
        hi = min(lo + SEGMENT, top + 1)
        s = seg[: hi - lo]
        s[:] = False
        for first, last, step in progressions(lo, hi):
            s[first - lo : last - lo + 1 : step] = True
        total += int(np.count_nonzero(s))
    return total


def table_count(N: int, capacity: int = SWEEP_CAPACITY) -> int:
    """``#{a b : 1 <= a, b <= N}``."""
    if N < 1:
        raise ParameterError("N must be >= 1")

    def rows(lo, hi):
        for a in range(1, min(N, math.isqrt(hi - 1)) + 1):
            b0 = max(a, -(-lo // a))
            b1 = min(N, (hi - 1) // a)
            if b0 <= b1:
                yield a * b0, a * b1, a

    return _sweep(N * N, rows, capacity)


def square_diff_count(N: int, capacity: int = SWEEP_CAPACITY) -> int:
    """``#{m^2 - n^2 : 1 <= n < m <= N}``.

    Uses ``m^2 - n^2 = a b`` with ``a = m + n > b = m - n >= 1`` of the same
    parity, so the values are ``b a`` for ``a = b + 2, b + 4, ..., 2N - b``.
    """
    if N < 1:
        raise ParameterError("N must be >= 1")
    if N == 1:
        return 0

    def rows(lo, hi):
        for b in range(1, N):
            first, last = b * (b + 2), b * (2 * N - b)
            if first >= hi:
                break
            if last < lo:
                continue
            if first < lo:
                first += -(-(lo - first) // (2 * b)) * 2 * b
            last -= max(0, -(-(last - (hi - 1)) // (2 * b))) * 2 * b
            if first <= last:
                yield first, last, 2 * b

    return _sweep(N * N, rows, capacity)


def ford_ratio(N: int, count: int) -> float:
    """``count (log N)^c (log_2 N)^{3/2} / N^2`` with clamped logarithms."""
    return count * clog(N) ** MULT_TABLE_C * clog(N, 2) ** 1.5 / (N * N)


def multtable_rows(ns) -> list[dict]:
    out = []
    for n in ns:
        count = table_count(int(n))
        out.append({"N": int(n), "count": count, "ford_ratio": ford_ratio(int(n), count)})
    return out


def multtable_csv(rows) -> str:
    return csv_text(["N", "count", "ford_ratio"],
                    [{"N": r["N"], "count": r["count"], "ford_ratio": fmt_float(r["ford_ratio"])} for r in rows])


def write_multtable_csv(path, rows) -> None:
    write_text(path, multtable_csv(rows))
