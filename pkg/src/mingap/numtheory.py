"""Arithmetic primitives: sieves, totients, exact torus distance, Mertens product.

The rotation number alpha is stored as a 64-bit fixed-point fraction
``numerator / 2**64``.  Multiplying an integer by alpha modulo one is then a
wrapping 64-bit multiplication, which numpy performs natively on ``uint64``
arrays, so every distance below is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, ParameterError

SCALE_BITS = 64
SCALE = 1 << SCALE_BITS
MASK64 = SCALE - 1
HALF = SCALE >> 1

#: Default cap on sieve table length (entries).
SIEVE_CAPACITY = 1 << 31


@dataclass(frozen=True, order=True)
class AlphaFixed:
    """A point of the torus with 64 fractional bits: ``alpha = numerator / 2**64``."""

    numerator: int

    def __post_init__(self):
        if not 0 <= self.numerator < SCALE:
            raise ParameterError(f"numerator must lie in [0, 2**64), got {self.numerator}")

    @classmethod
    def from_fraction(cls, x: Fraction | int | float) -> "AlphaFixed":
        """Round ``x mod 1`` to the nearest multiple of ``2**-64`` (ties to even)."""
        q = Fraction(x) % 1
        return cls(round(q * SCALE) % SCALE)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, SCALE)

    @property
    def odd(self) -> bool:
        return bool(self.numerator & 1)

    def __float__(self) -> float:
        return self.numerator / SCALE


def torus_norm_num(k, alpha: AlphaFixed):
    """Numerator (units of ``2**-64``) of ``||k alpha||``.

    ``k`` may be a Python int (any sign) or an integer numpy array; arrays are
    handled with wrapping ``uint64`` arithmetic and return ``uint64``.
    """
    if isinstance(k, np.ndarray):
        f = k.astype(np.uint64) * np.uint64(alpha.numerator)
        return np.minimum(f, np.uint64(0) - f)
    f = (k * alpha.numerator) & MASK64
    return min(f, SCALE - f)


def torus_norm(k: int, alpha: AlphaFixed) -> Fraction:
    """Exact distance from ``k * alpha`` to the nearest integer."""
    if not 1 <= k < SCALE:
        raise ParameterError("torus_norm requires 1 <= k < 2**64")
    return Fraction(torus_norm_num(k, alpha), SCALE)


def _check_capacity(x: int, capacity: int | None) -> None:
    cap = SIEVE_CAPACITY if capacity is None else capacity
    if x > cap:
        raise CapacityError(f"sieve bound {x} exceeds capacity {cap}")


def prime_mask(x: int, capacity: int | None = None) -> np.ndarray:
    """Boolean array ``m`` of length ``x + 1`` with ``m[n]`` true iff n is prime."""
    if x < 1:
        raise ParameterError("x must be >= 1")
    _check_capacity(x, capacity)
    mask = np.ones(x + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(x) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return mask


def primes_up_to(x: int, capacity: int | None = None) -> np.ndarray:
    """All primes ``<= x`` in ascending order, as an int64 array."""
    return np.flatnonzero(prime_mask(x, capacity)).astype(np.int64)


class TotientTable:
    """Immutable table of Euler's phi, indexed ``1..x`` (``table[k] == phi(k)``)."""

    def __init__(self, values: np.ndarray):
        self._values = values
        self._values.flags.writeable = False

    @property
    def bound(self) -> int:
        return len(self._values) - 1

    @property
    def values(self) -> np.ndarray:
        """Array with ``values[k] = phi(k)``; ``values[0]`` is 0."""
        return self._values

    def __getitem__(self, k):
        if isinstance(k, (int, np.integer)):
            if not 1 <= k <= self.bound:
                raise IndexError(f"phi({k}) outside table 1..{self.bound}")
            return int(self._values[k])
        return self._values[k]

    def __len__(self) -> int:
        return self.bound


def totient_sieve(x: int, capacity: int | None = None) -> TotientTable:
    if x < 1:
        raise ParameterError("x must be >= 1")
    _check_capacity(x, capacity)
    phi = np.arange(x + 1, dtype=np.int64)
    for p in primes_up_to(x, capacity):
        p = int(p)
        phi[p::p] -= phi[p::p] // p
    phi[0] = 0
    return TotientTable(phi)


def totient(n: int) -> int:
    """phi(n) by trial division, for one-off values outside a sieve table."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1 if p == 2 else 2
    if m > 1:
        result -= result // m
    return result


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` in ascending order."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def mertens_product(x: int) -> float:
    """prod_{p <= x} (1 - 1/p)."""
    if x < 2:
        raise ParameterError("x must be >= 2")
    p = primes_up_to(x).astype(np.float64)
    return float(np.prod(1.0 - 1.0 / p))
