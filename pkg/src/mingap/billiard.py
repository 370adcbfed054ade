"""Spectrum ``{alpha m^2 + n^2 : m, n >= 1}`` of a rectangular billiard and its gaps.

alpha is a positive fixed-point real with 64 fractional bits.  Every
eigenvalue is stored exactly as ``hi + lo / 2**64`` with ``hi`` its integer part
and ``lo`` its fractional numerator.  The fractional part of ``alpha m^2 + n^2``
depends on ``m`` alone, so the whole table is built with integer numpy
arithmetic.  Gaps are Python ints in units of ``2**-64``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, CollisionError, ParameterError
from .io import csv_text, exact_decimal, fmt_float, write_text
from .metricda import Envelope, eval_envelope
from .numtheory import MASK64, SCALE

SPECTRUM_CAPACITY = 20_000_000


@dataclass(frozen=True, order=True)
class BilliardAlpha:
    """``alpha = numerator / 2**64`` with ``0 < alpha <= 2**32``."""

    numerator: int

    def __post_init__(self):
        if not 0 < self.numerator <= (1 << 96):
            raise ParameterError("alpha must lie in (0, 2**32]")

    @classmethod
    def from_fraction(cls, x) -> "BilliardAlpha":
        return cls(round(Fraction(x) * SCALE))

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, SCALE)

    def __float__(self) -> float:
        return self.numerator / SCALE


def _alpha(alpha) -> BilliardAlpha:
    return alpha if isinstance(alpha, BilliardAlpha) else BilliardAlpha.from_fraction(alpha)


@dataclass(frozen=True)
class Spectrum:
    """Sorted eigenvalues ``hi[i] + lo[i] / 2**64`` with labels ``(m[i], n[i])``."""

    alpha: BilliardAlpha
    cutoff: Fraction
    hi: np.ndarray
    lo: np.ndarray
    m: np.ndarray
    n: np.ndarray

    def __len__(self) -> int:
        return len(self.hi)

    def numerator(self, i: int) -> int:
        return (int(self.hi[i]) << 64) | int(self.lo[i])

    def value(self, i: int) -> Fraction:
        return Fraction(self.numerator(i), SCALE)

    def as_float(self) -> np.ndarray:
        return self.hi.astype(np.float64) + self.lo.astype(np.float64) / float(SCALE)

    def gaps(self, count: int | None = None) -> list[int]:
        """Exact consecutive gaps ``lambda_{k+1} - lambda_k`` (numerators), ``k = 1..count``."""
        count = len(self) - 1 if count is None else count
        hi = self.hi[: count + 1]
        lo = self.lo[: count + 1]
        borrow = (lo[1:] < lo[:-1]).astype(np.int64)
        dhi = np.diff(hi) - borrow
        dlo = lo[1:] - lo[:-1]  # wraps modulo 2**64 exactly when borrowing
        return [(h << 64) | l for h, l in zip(dhi.tolist(), dlo.tolist())]

    @property
    def collision(self) -> bool:
        return self.first_collision() is not None

    def first_collision(self) -> int | None:
        """Index ``k`` (0-based) of the first pair ``lambda_k == lambda_{k+1}``, if any."""
        same = (self.hi[1:] == self.hi[:-1]) & (self.lo[1:] == self.lo[:-1])
        idx = np.flatnonzero(same)
        return int(idx[0]) if len(idx) else None


def spectrum(alpha, cutoff, capacity: int = SPECTRUM_CAPACITY) -> Spectrum:
    """All ``alpha m^2 + n^2 <= cutoff`` with ``m, n >= 1``, sorted (ties by ``m``)."""
    alpha = _alpha(alpha)
    cutoff = Fraction(cutoff)
    a = alpha.numerator
    top = math.floor(cutoff * SCALE)
    estimate = math.pi * float(cutoff) / (4 * math.sqrt(float(alpha))) + 2 * math.sqrt(max(float(cutoff), 0))
    if estimate > capacity:
        raise CapacityError(f"about {estimate:.0f} eigenvalues exceed capacity {capacity}")
    his, los, ms, ns = [], [], [], []
    m = 1
    while a * m * m + SCALE <= top:
        base = a * m * m
        n_max = math.isqrt((top - base) >> 64)
        n = np.arange(1, n_max + 1, dtype=np.int64)
        his.append((base >> 64) + n * n)
        los.append(np.full(n_max, base & MASK64, dtype=np.uint64))
        ms.append(np.full(n_max, m, dtype=np.int64))
        ns.append(n)
        m += 1
    if not his:
        empty_i = np.zeros(0, dtype=np.int64)
        return Spectrum(alpha, cutoff, empty_i, np.zeros(0, dtype=np.uint64), empty_i, empty_i.copy())
    hi, lo, mm, nn = (np.concatenate(x) for x in (his, los, ms, ns))
    order = np.lexsort((mm, lo, hi))
    return Spectrum(alpha, cutoff, hi[order], lo[order], mm[order], nn[order])


def min_gap_spectrum(s: Spectrum, N: int) -> int:
    """Exact ``min{lambda_{k+1} - lambda_k : 1 <= k <= N}`` as a numerator."""
    if N < 1:
        raise ParameterError("N must be >= 1")
    if len(s) < N + 1:
        raise CapacityError(f"spectrum has {len(s)} entries, need {N + 1}")
    first = s.first_collision()
    if first is not None and first < N:
        raise CollisionError(f"eigenvalues {first + 1} and {first + 2} coincide")
    return min(s.gaps(N))


def weyl_count(alpha, cutoff) -> float:
    """Leading lattice-point term ``pi * cutoff / (4 sqrt(alpha))``."""
    return math.pi * float(cutoff) / (4.0 * math.sqrt(float(_alpha(alpha))))


def spectrum_with_count(alpha, count: int, capacity: int = SPECTRUM_CAPACITY) -> Spectrum:
    """A spectrum holding at least ``count`` eigenvalues (cutoff grown until it does)."""
    alpha = _alpha(alpha)
    sa = math.sqrt(float(alpha))
    cutoff = math.ceil(4 * sa * (count + 2) / math.pi * 1.05 + 4 * sa * math.sqrt(count) + 10)
    while True:
        s = spectrum(alpha, cutoff, capacity)
        if len(s) >= count:
            return s
        cutoff = math.ceil(cutoff * 1.25)


@dataclass(frozen=True)
class BilliardTrajectory:
    """``delta(N) = min`` of the first ``N`` spectral gaps, ``N = 1..n_max``."""

    alpha: BilliardAlpha
    ns: np.ndarray
    deltas: list
    epsilon: float = 1.0

    def as_float(self) -> np.ndarray:
        return np.array([d / SCALE for d in self.deltas], dtype=np.float64)

    def envelopes(self) -> dict[str, np.ndarray]:
        names = ["billiard_up", "billiard_low", "billiard_up_strong", "billiard_low_strong"]
        return {k: eval_envelope(Envelope(k, self.epsilon), self.ns) for k in names}

    def rows(self) -> list[dict]:
        env = self.envelopes()
        up, low = env["billiard_up"], env["billiard_low"]
        delta = self.as_float()
        out = []
        for i, n in enumerate(self.ns.tolist()):
            out.append({
                "N": n,
                "delta": exact_decimal(self.deltas[i]),
                "up_envelope": fmt_float(up[i]),
                "low_envelope": fmt_float(low[i]),
                "hit_up": int(delta[i] >= up[i]),
                "exceed_low": int(delta[i] <= low[i]),
            })
        return out

    def csv(self) -> str:
        return csv_text(["N", "delta", "up_envelope", "low_envelope", "hit_up", "exceed_low"], self.rows())

    def write_csv(self, path) -> None:
        write_text(path, self.csv())


def billiard_trajectory(alpha, n_max: int, epsilon: float = 1.0) -> BilliardTrajectory:
    """Running minimal gap of the spectrum for ``N = 1..n_max``."""
    if n_max < 1:
        raise ParameterError("n_max must be >= 1")
    alpha = _alpha(alpha)
    s = spectrum_with_count(alpha, n_max + 1)
    first = s.first_collision()
    if first is not None and first < n_max:
        raise CollisionError(f"eigenvalues {first + 1} and {first + 2} coincide")
    gaps = np.array(s.gaps(n_max), dtype=object)
    deltas = np.minimum.accumulate(gaps).tolist()
    return BilliardTrajectory(alpha, np.arange(1, n_max + 1), deltas, epsilon)
