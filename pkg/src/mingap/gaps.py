"""Minimal gap of ``{a_n alpha mod 1 : n <= N}`` on the torus.

All gap values are integers in units of ``2**-64``; with the fixed-point alpha
they are exact, and comparisons never tie spuriously.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sortedcontainers import SortedList

from .errors import CapacityError, ParameterError
from .numtheory import MASK64, SCALE, AlphaFixed
from .sequences import make_sequence

BRUTEFORCE_CAP = 2000


class DegenerateGapWarning(UserWarning):
    """Two points coincide on the torus, so the minimal gap is exactly 0."""


def points(a, alpha: AlphaFixed) -> np.ndarray:
    """``a_n alpha mod 1`` as uint64 numerators."""
    if isinstance(a, np.ndarray) and a.dtype != object:
        if len(a) and a.min() < 0:
            raise ParameterError("terms must be positive")
        u = a.astype(np.uint64)
    else:
        u = np.array([int(v) & MASK64 for v in a], dtype=np.uint64)
    return u * np.uint64(alpha.numerator)


def _flag(gap: int) -> int:
    if gap == 0:
        warnings.warn("coincident points: minimal gap is 0", DegenerateGapWarning, stacklevel=3)
    return gap


def min_gap_bruteforce(a, alpha: AlphaFixed, cap: int = BRUTEFORCE_CAP) -> int:
    """Minimum of ``||(a_m - a_n) alpha||`` over all pairs ``m != n`` (numerator)."""
    n = len(a)
    if n < 2:
        raise ParameterError("need N >= 2")
    if n > cap:
        raise CapacityError(f"brute force capped at N = {cap}, got {n}")
    p = points(a, alpha)
    best = SCALE
    for s in range(1, n):
        d = p[s:] - p[:-s]
        best = min(best, int(np.minimum(d, np.uint64(0) - d).min()))
    return _flag(best)


def min_gap_sorted(a, alpha: AlphaFixed) -> int:
    """Smallest circular gap between neighbouring points (numerator)."""
    if len(a) < 2:
        raise ParameterError("need N >= 2")
    p = np.sort(points(a, alpha))
    wrap = (int(p[0]) - int(p[-1])) & MASK64  # gap across 0
    best = min(int(np.diff(p).min()), wrap)
    return _flag(best)


@dataclass(frozen=True)
class GapTrajectory:
    """``delta_min(N)`` for ``N = 2..n_max``; ``deltas[i]`` belongs to ``ns[i]``."""

    alpha: AlphaFixed
    ns: np.ndarray
    deltas: np.ndarray
    degenerate: bool = False

    def at(self, n: int) -> int:
        return int(self.deltas[n - 2])

    def as_float(self) -> np.ndarray:
        return self.deltas.astype(np.float64) / float(SCALE)

    def as_fractions(self) -> list[Fraction]:
        return [Fraction(int(d), SCALE) for d in self.deltas]


def gap_trajectory_from_points(p: np.ndarray) -> tuple[np.ndarray, bool]:
    """Running minimal circular gap after each insertion, for ``N = 2..len(p)``.

    A new point splits one gap ``g`` into ``g1 + g2``.  If ``g`` was the
    minimum, ``min(g1, g2) < g`` replaces it, so tracking only the new gaps
    keeps the running minimum exact.
    """
    pts = p.tolist()
    n = len(pts)
    out = np.empty(max(n - 1, 0), dtype=np.uint64)
    sl = SortedList([pts[0]])
    best = SCALE
    degenerate = False
    for i in range(1, n):
        x = pts[i]
        j = sl.bisect_left(x)
        size = len(sl)
        succ = sl[j] if j < size else sl[0]
        pred = sl[j - 1]  # j == 0 wraps to the last point
        g = min((x - pred) & MASK64, (succ - x) & MASK64)
        if g == 0:
            degenerate = True
        if g < best:
            best = g
        sl.add(x)
        out[i - 1] = best
    return out, degenerate


def min_gap_trajectory(seq, alpha: AlphaFixed, n_max: int) -> GapTrajectory:
    """``delta_min^alpha(N)`` for every ``2 <= N <= n_max`` in ``O(n_max log n_max)``."""
    if n_max < 2:
        raise ParameterError("n_max must be >= 2")
    seq = make_sequence(seq)
    deltas, degenerate = gap_trajectory_from_points(points(seq.terms(n_max), alpha))
    if degenerate:
        warnings.warn("coincident points: minimal gap reached 0", DegenerateGapWarning, stacklevel=2)
    return GapTrajectory(alpha, np.arange(2, n_max + 1), deltas, degenerate)
