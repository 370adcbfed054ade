"""Difference-set statistics of a truncation ``A_N = (a_1, ..., a_N)``.

``rep_N(u)`` counts ordered pairs ``(m, n)`` with ``a_m - a_n = u``.  From it:

* ``C_N = #(A_N - A_N) = 2 C+_N + 1`` where ``C+_N`` counts positive differences,
* ``E_N = sum_u rep_N(u)**2 = N**2 + 2 sum_{u > 0} rep_N(u)**2``.

Two independent routes compute ``rep_N``: an explicit enumeration of all pairs
(:func:`rep_counts_direct`) and an exact modular-transform autocorrelation of
the indicator of ``A_N`` (:func:`rep_counts_fast`).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from . import ntt
from .errors import CapacityError, HorizonError, ParameterError
from .sequences import INT64_MAX, IntegerSequence, make_sequence

DIRECT_CAP = 5000
CONV_CAPACITY = 1 << 23
DENSE_FIRST_CAPACITY = 1 << 28
SPARSE_FIRST_CAPACITY = 5_000_000

# differences of huge terms are fingerprinted modulo this prime; it is far from
# any power of two so that geometric terms do not alias structurally
_FINGERPRINT_PRIME = 0x3A4F9C2B71D8E553


@dataclass(frozen=True)
class DiffStats:
    """Exact difference-set statistics of one truncation.

    ``values``/``counts`` hold the positive differences and their
    representation counts, ascending.  They are ``None`` only for huge-term
    Sidon truncations (every positive difference represented once), where the
    differences themselves are not materialized.
    """

    n: int
    c_plus: int
    energy: int
    values: np.ndarray | None = None
    counts: np.ndarray | None = None

    @property
    def c_full(self) -> int:
        return 2 * self.c_plus + 1

    def rep(self, u: int) -> int:
        if u == 0:
            return self.n
        if self.values is None:
            raise ValueError("representation counts were not materialized")
        u = abs(u)
        i = np.searchsorted(self.values, u)
        if i < len(self.values) and self.values[i] == u:
            return int(self.counts[i])
        return 0

    @property
    def ratio_e_lower(self) -> float:
        """``E C / N**4``; at least 1 by Cauchy-Schwarz."""
        return self.energy * self.c_full / self.n**4

    @property
    def ratio_e_upper(self) -> float:
        """``E / (N**2 C)``; at most 1."""
        return self.energy / (self.n**2 * self.c_full)

    def sandwich_holds(self) -> bool:
        """Exact integer check of ``N**4 / C <= E <= N**2 C``."""
        n, c, e = self.n, self.c_full, self.energy
        return n**4 <= e * c and e <= n * n * c

    def same_as(self, other: "DiffStats") -> bool:
        if (self.n, self.c_plus, self.energy) != (other.n, other.c_plus, other.energy):
            return False
        if self.values is None or other.values is None:
            return self.values is None and other.values is None
        return np.array_equal(self.values, other.values) and np.array_equal(self.counts, other.counts)


def _from_counts(n: int, values: np.ndarray, counts: np.ndarray) -> DiffStats:
    sq = counts.astype(np.int64)
    energy = n * n + 2 * int(np.dot(sq, sq))
    return DiffStats(n=n, c_plus=len(values), energy=energy, values=values, counts=counts.astype(np.int64))


def _as_terms(a) -> list[int] | np.ndarray:
    if isinstance(a, np.ndarray):
        if a.ndim != 1 or len(a) == 0:
            raise ParameterError("A_N must be a nonempty 1-d sequence")
        if len(a) > 1 and not np.all(a[1:] > a[:-1]):
            raise ParameterError("A_N must be strictly increasing")
        return a.astype(np.int64)
    t = [int(v) for v in a]
    if not t:
        raise ParameterError("A_N must be nonempty")
    if any(y <= x for x, y in zip(t, t[1:])):
        raise ParameterError("A_N must be strictly increasing")
    if t[-1] <= INT64_MAX and t[0] >= -INT64_MAX:
        return np.array(t, dtype=np.int64)
    return t


def _all_differences(a: np.ndarray, modulus: int | None = None) -> np.ndarray:
    """Every ``a_m - a_n`` with ``m > n`` (reduced mod ``modulus`` if given)."""
    n = len(a)
    out = np.empty(n * (n - 1) // 2, dtype=np.uint64 if modulus else np.int64)
    pos = 0
    if modulus:
        mod = np.uint64(modulus)
        for s in range(1, n):
            out[pos : pos + n - s] = (a[s:] + mod - a[:-s]) % mod
            pos += n - s
    else:
        for s in range(1, n):
            out[pos : pos + n - s] = a[s:] - a[:-s]
            pos += n - s
    return out


def _run_lengths(sorted_values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    if len(sorted_values) == 0:
        return sorted_values, np.zeros(0, dtype=np.int64)
    starts = np.flatnonzero(np.concatenate(([True], sorted_values[1:] != sorted_values[:-1])))
    counts = np.diff(np.append(starts, len(sorted_values)))
    return sorted_values[starts], counts


def rep_counts_direct(a, cap: int | None = DIRECT_CAP) -> DiffStats:
    """Representation counts by enumerating all ``N(N-1)/2`` pairs.

    Terms beyond 64 bits are handled exactly: the differences are fingerprinted
    modulo a 62-bit prime, and if all fingerprints are distinct the
    differences are certified distinct (a Sidon truncation, returned without
    materialized values).  Otherwise small truncations fall back to Python
    integers; large ones raise.
    """
    a = _as_terms(a)
    n = len(a)
    if cap is not None and n > cap:
        raise CapacityError(f"direct method capped at N = {cap}, got {n}")
    if isinstance(a, np.ndarray):
        diffs = _all_differences(a)
        diffs.sort()
        values, counts = _run_lengths(diffs)
        return _from_counts(n, values, counts)

    residues = np.array([v % _FINGERPRINT_PRIME for v in a], dtype=np.uint64)
    fp = _all_differences(residues, _FINGERPRINT_PRIME)
    fp.sort()
    npairs = len(fp)
    distinct = npairs == 0 or bool(np.all(fp[1:] != fp[:-1]))
    del fp
    if distinct:
        return DiffStats(n=n, c_plus=npairs, energy=n * n + 2 * npairs)
    if n > 2000:
        raise CapacityError("cannot certify differences of >64-bit terms beyond N = 2000")
    counter = Counter(a[m] - a[k] for m in range(n) for k in range(m))
    keys = sorted(counter)
    values = np.array(keys, dtype=object)
    counts = np.array([counter[k] for k in keys], dtype=np.int64)
    return _from_counts(n, values, counts)


def rep_counts_fast(a, capacity: int = CONV_CAPACITY) -> DiffStats:
    """Representation counts from the exact autocorrelation of the indicator of ``A_N``."""
    a = _as_terms(a)
    if not isinstance(a, np.ndarray):
        raise CapacityError("terms exceed 64 bits")
    span = int(a[-1] - a[0])
    if span > capacity:
        raise CapacityError(f"span a_N - a_1 = {span} exceeds convolution capacity {capacity}")
    c = ntt.autocorrelation(a - a[0])
    if c[0] != len(a):
        raise ArithmeticError("autocorrelation failed its zero-lag check")
    values = np.flatnonzero(c[1:]).astype(np.int64) + 1
    return _from_counts(len(a), values, c[values])


def diff_stats(a, *, direct_cap: int = 10_000, capacity: int = CONV_CAPACITY) -> DiffStats:
    """Pick the transform route when the span allows it, else enumerate pairs."""
    t = _as_terms(a)
    if isinstance(t, np.ndarray) and int(t[-1] - t[0]) <= capacity:
        return rep_counts_fast(t, capacity)
    return rep_counts_direct(t, cap=direct_cap)


class FirstOccurrenceMap:
    """``k -> N(k)``: the first truncation length whose difference set contains ``k``.

    Keys absent from the map have ``N(k) = infinity`` within ``horizon``.
    """

    def __init__(self, horizon: int, keys: np.ndarray, firsts: np.ndarray):
        order = np.argsort(keys, kind="stable")
        self.horizon = horizon
        self.keys = keys[order]
        self.firsts = firsts[order].astype(np.int64)
        self.new_counts = np.bincount(self.firsts, minlength=horizon + 1)

    def __len__(self) -> int:
        return len(self.keys)

    def get(self, k: int) -> int | None:
        i = np.searchsorted(self.keys, k)
        if i < len(self.keys) and self.keys[i] == k:
            return int(self.firsts[i])
        return None

    def __contains__(self, k) -> bool:
        return self.get(k) is not None

    def lookup(self, ks: np.ndarray) -> np.ndarray:
        """Vectorized ``N(k)``; 0 marks keys absent within the horizon."""
        ks = np.asarray(ks)
        if len(self.keys) == 0:
            return np.zeros(ks.shape, dtype=np.int64)
        i = np.minimum(np.searchsorted(self.keys, ks), len(self.keys) - 1)
        return np.where(self.keys[i] == ks, self.firsts[i], 0)

    def c_plus_trajectory(self) -> np.ndarray:
        """``C+_N`` for ``N = 0..horizon`` (index N)."""
        return np.cumsum(self.new_counts)

    def c_full_trajectory(self) -> np.ndarray:
        return 2 * self.c_plus_trajectory() + 1

    def z_order(self) -> np.ndarray:
        """Keys ordered by first occurrence, ties by value."""
        return self.keys[np.lexsort((self.keys, self.firsts))]


def first_occurrence(seq, n_max: int, dense_capacity: int = DENSE_FIRST_CAPACITY,
                     sparse_capacity: int = SPARSE_FIRST_CAPACITY) -> FirstOccurrenceMap:
    """Build the first-occurrence map incrementally up to ``N = n_max``.

    Term ``a_N`` contributes the differences ``a_N - a_n`` (``n < N``) not yet
    seen, each with value ``N``.
    """
    if n_max < 2:
        raise ParameterError("n_max must be >= 2")
    seq = make_sequence(seq) if not isinstance(seq, IntegerSequence) else seq
    t = seq.terms(n_max)
    span = t[-1] - t[0]
    if t[-1] <= INT64_MAX and span <= dense_capacity:
        a = np.array(t, dtype=np.int64)
        dtype = np.uint16 if n_max < 1 << 16 else np.uint32
        first = np.zeros(span + 1, dtype=dtype)
        for n in range(2, n_max + 1):
            d = a[n - 1] - a[: n - 1]
            fresh = d[first[d] == 0]
            first[fresh] = n
        keys = np.flatnonzero(first).astype(np.int64)
        return FirstOccurrenceMap(n_max, keys, first[keys])
    if t[-1] > INT64_MAX and n_max * (n_max - 1) // 2 > sparse_capacity:
        # differences of huge terms are costly to hold; refuse before building them
        raise CapacityError(f"first-occurrence map for terms beyond 2**63 capped at {sparse_capacity} pairs")
    seen: dict[int, int] = {}
    for n in range(2, n_max + 1):
        an = t[n - 1]
        for m in range(n - 1):
            seen.setdefault(an - t[m], n)
        if len(seen) > sparse_capacity:
            raise CapacityError(f"first-occurrence map exceeds {sparse_capacity} keys")
    keys = sorted(seen)
    dtype = np.int64 if keys[-1] <= INT64_MAX else object
    return FirstOccurrenceMap(n_max, np.array(keys, dtype=dtype),
                              np.array([seen[k] for k in keys], dtype=np.int64))


def z_enumeration(seq, n_max: int) -> np.ndarray:
    """Canonical enumeration ``z_1, z_2, ...`` of the positive differences.

    For ``N = 2, 3, ...`` the new elements of ``(A_N - A_N)^+`` are appended in
    increasing order, so the first ``C+_N`` entries are exactly ``(A_N - A_N)^+``.
    """
    return first_occurrence(seq, n_max).z_order()


def require_horizon(fmap: FirstOccurrenceMap, needed: int) -> None:
    if fmap.horizon < needed:
        raise HorizonError(f"first-occurrence horizon {fmap.horizon} < required {needed}")


def gcd_sum(values, block: int = 1024) -> float:
    """``sum_{m,n} gcd(v_m, v_n) / sqrt(v_m v_n)`` over all ordered pairs."""
    v = np.asarray(values, dtype=np.int64)
    if v.ndim != 1 or len(v) == 0:
        raise ParameterError("gcd_sum needs a nonempty list")
    if np.any(v < 1):
        raise ParameterError("gcd_sum needs positive integers")
    inv_sqrt = 1.0 / np.sqrt(v.astype(np.float64))
    parts = []
    for i in range(0, len(v), block):
        g = np.gcd(v[i : i + block, None], v[None, :])
        parts.append(float(np.sum(g * inv_sqrt[i : i + block, None] * inv_sqrt[None, :])))
    return math.fsum(parts)
