"""Finite unions of open subintervals of [0, 1] with exact rational endpoints.

A union stores integer endpoints over one common denominator, so merging,
intersection and measure are integer operations; ``measure()`` returns a
``Fraction``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import ParameterError


def as_fraction(x) -> Fraction:
    """Exact rational value of ``x`` (floats are taken at their binary value)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    return Fraction(x)


class IntervalUnion:
    """Sorted, disjoint open intervals ``(lo_i / den, hi_i / den)`` inside [0, 1]."""

    __slots__ = ("den", "lo", "hi")

    def __init__(self, den: int, pairs: Iterable[tuple[int, int]] = ()):
        """Build from integer endpoint pairs sorted by left endpoint.

        Pairs are clipped to ``[0, den]``, empty ones dropped and overlapping or
        touching ones merged.
        """
        if den < 1:
            raise ParameterError("denominator must be positive")
        lo: list[int] = []
        hi: list[int] = []
        for a, b in pairs:
            a = max(a, 0)
            b = min(b, den)
            if a >= b:
                continue
            if lo and a < lo[-1]:
                raise ParameterError("pairs must be sorted by left endpoint")
            if hi and a <= hi[-1]:
                if b > hi[-1]:
                    hi[-1] = b
                continue
            lo.append(a)
            hi.append(b)
        self.den = den
        self.lo = lo
        self.hi = hi

    @classmethod
    def from_intervals(cls, intervals: Iterable[tuple]) -> "IntervalUnion":
        """Union of arbitrary rational intervals ``(lo, hi)``, clipped to [0, 1]."""
        fr = [(as_fraction(a), as_fraction(b)) for a, b in intervals]
        den = math.lcm(1, *(x.denominator for pair in fr for x in pair))
        pairs = sorted((int(a * den), int(b * den)) for a, b in fr)
        return cls(den, pairs)

    @classmethod
    def empty(cls) -> "IntervalUnion":
        return cls(1)

    def __len__(self) -> int:
        return len(self.lo)

    def __repr__(self):
        parts = ", ".join(f"({a}, {b})" for a, b in self.intervals[:4])
        more = ", ..." if len(self) > 4 else ""
        return f"IntervalUnion([{parts}{more}])"

    @property
    def intervals(self) -> list[tuple[Fraction, Fraction]]:
        return [(Fraction(a, self.den), Fraction(b, self.den)) for a, b in zip(self.lo, self.hi)]

    def measure(self) -> Fraction:
        return Fraction(sum(self.hi) - sum(self.lo), self.den)

    def rescaled(self, den: int) -> "IntervalUnion":
        if den % self.den:
            raise ParameterError("new denominator must be a multiple of the old one")
        f = den // self.den
        out = IntervalUnion(den)
        out.lo = [a * f for a in self.lo]
        out.hi = [b * f for b in self.hi]
        return out

    def _common(self, other: "IntervalUnion") -> tuple["IntervalUnion", "IntervalUnion"]:
        den = math.lcm(self.den, other.den)
        return self.rescaled(den), other.rescaled(den)

    def intersect(self, other: "IntervalUnion") -> "IntervalUnion":
        u, v = self._common(other)
        pairs = []
        i = j = 0
        while i < len(u.lo) and j < len(v.lo):
            a = max(u.lo[i], v.lo[j])
            b = min(u.hi[i], v.hi[j])
            if a < b:
                pairs.append((a, b))
            if u.hi[i] < v.hi[j]:
                i += 1
            else:
                j += 1
        return IntervalUnion(u.den, pairs)

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        u, v = self._common(other)
        pairs = sorted(zip(u.lo + v.lo, u.hi + v.hi))
        return IntervalUnion(u.den, pairs)

    def contains(self, x) -> np.ndarray:
        """Membership of float points (for grid estimates; endpoints excluded)."""
        x = np.asarray(x, dtype=np.float64)
        if not self.lo:
            return np.zeros(x.shape, dtype=bool)
        lo = np.array(self.lo, dtype=np.float64) / self.den
        hi = np.array(self.hi, dtype=np.float64) / self.den
        i = np.searchsorted(lo, x, side="left") - 1
        ic = np.maximum(i, 0)
        return (i >= 0) & (x > lo[ic]) & (x < hi[ic])

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        u, v = self._common(other)
        return u.lo == v.lo and u.hi == v.hi

    __hash__ = None


def union_all(unions: Iterable[IntervalUnion]) -> IntervalUnion:
    unions = list(unions)
    if not unions:
        return IntervalUnion.empty()
    den = math.lcm(*(u.den for u in unions))
    pairs = []
    for u in unions:
        r = u.rescaled(den)
        pairs.extend(zip(r.lo, r.hi))
    pairs.sort()
    return IntervalUnion(den, pairs)


def measure(u: IntervalUnion) -> Fraction:
    return u.measure()


def intersect(u: IntervalUnion, v: IntervalUnion) -> IntervalUnion:
    return u.intersect(v)


def build_S(k: int, psi, coprime_only: bool = False) -> IntervalUnion:
    """``[0,1] ∩ ⋃_a (a/k - psi/k, a/k + psi/k)`` over ``0 <= a <= k``.

    With ``coprime_only`` only numerators with ``gcd(a, k) = 1`` are used.
    """
    if k < 1:
        raise ParameterError("k must be >= 1")
    psi = as_fraction(psi)
    if psi < 0:
        raise ParameterError("psi must be non-negative")
    step = psi.denominator
    r = psi.numerator
    den = k * step
    if coprime_only:
        centers = [a for a in range(k + 1) if math.gcd(a, k) == 1]
    else:
        centers = range(k + 1)
    return IntervalUnion(den, [(a * step - r, a * step + r) for a in centers])
