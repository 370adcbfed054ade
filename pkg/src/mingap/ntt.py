"""Number-theoretic transform over Z/pZ, p = 15 * 2**27 + 1, vectorized with numpy.

Used for exact integer autocorrelation of 0/1 indicator vectors.  Every
coefficient of such an autocorrelation is at most the number of ones, so the
result is exact as long as that number is below ``MODULUS``.

The forward transform is decimation-in-frequency (natural order in, bit
reversed out) and the inverse is decimation-in-time (bit reversed in, natural
out), so no explicit bit-reversal permutation is ever performed.
"""

from __future__ import annotations

import numpy as np

from .errors import CapacityError

MODULUS = 2013265921
GENERATOR = 31
MAX_LOG2_LENGTH = 27

_P = np.uint64(MODULUS)


def _powers(base: int, n: int) -> np.ndarray:
    """``[base**0, ..., base**(n-1)] mod p`` as uint64."""
    out = np.empty(n, dtype=np.uint64)
    out[0] = 1
    m = 1
    while m < n:
        step = np.uint64(pow(base, m, MODULUS))
        take = min(m, n - m)
        out[m : m + take] = out[:take] * step % _P
        m += take
    return out


def _check_length(length: int) -> int:
    log2 = length.bit_length() - 1
    if length < 1 or 1 << log2 != length:
        raise ValueError("transform length must be a power of two")
    if log2 > MAX_LOG2_LENGTH:
        raise CapacityError(f"transform length 2**{log2} exceeds 2**{MAX_LOG2_LENGTH}")
    return log2


def _reduce_once(x: np.ndarray) -> None:
    """``x -= p`` where ``x >= p``, for ``x < 2p``: unsigned wrap-around makes ``x - p`` huge otherwise."""
    np.minimum(x, x - _P, out=x)


def forward(a: np.ndarray) -> np.ndarray:
    """In-place forward NTT of a uint64 array with entries in [0, p); bit-reversed output."""
    n = len(a)
    _check_length(n)
    length = n
    while length >= 2:
        half = length // 2
        w = _powers(pow(GENERATOR, (MODULUS - 1) // length, MODULUS), half)
        v = a.reshape(-1, length)
        u = v[:, :half]
        t = v[:, half:]
        d = u + _P
        d -= t
        u += t
        _reduce_once(u)
        d *= w
        np.remainder(d, _P, out=t)
        length = half
    return a


def inverse(a: np.ndarray) -> np.ndarray:
    """In-place inverse NTT taking bit-reversed input to natural order, scaled by 1/n."""
    n = len(a)
    _check_length(n)
    ginv = pow(GENERATOR, MODULUS - 2, MODULUS)
    length = 2
    while length <= n:
        half = length // 2
        w = _powers(pow(ginv, (MODULUS - 1) // length, MODULUS), half)
        v = a.reshape(-1, length)
        u = v[:, :half]
        t = v[:, half:]
        t *= w
        t %= _P
        d = u + _P
        d -= t
        u += t
        _reduce_once(u)
        _reduce_once(d)
        t[...] = d
        length *= 2
    a *= np.uint64(pow(n, MODULUS - 2, MODULUS))
    a %= _P
    return a


def bit_reversal(log2: int) -> np.ndarray:
    """Permutation ``r`` with ``r[i]`` the ``log2``-bit reversal of ``i``."""
    r = np.zeros(1, dtype=np.int64)
    for _ in range(log2):
        r = np.concatenate((2 * r, 2 * r + 1))
    return r


def autocorrelation(positions: np.ndarray) -> np.ndarray:
    """Exact ``c[u] = #{(i, j): x_i - x_j = u}`` for ``u >= 0``.

    ``positions`` are distinct non-negative integers; the result has length
    ``max(positions) + 1``.  Uses one forward transform: the inverse of
    ``X(k) X(-k)`` is the cyclic autocorrelation, which does not wrap when the
    length is at least ``2 max + 1``.
    """
    positions = np.asarray(positions, dtype=np.int64)
    if len(positions) >= MODULUS:
        raise CapacityError("too many points for exact modular autocorrelation")
    m = int(positions.max()) + 1
    length = 1 << max(1, (2 * m - 1 - 1).bit_length())
    log2 = _check_length(length)
    x = np.zeros(length, dtype=np.uint64)
    x[positions] = 1
    forward(x)
    # slot p holds X[rev(p)]; X[-rev(p)] sits in slot rev(-rev(p))
    rev = bit_reversal(log2)
    x *= x[rev[(-rev) % length]]
    del rev
    x %= _P
    inverse(x)
    return x[:m].astype(np.int64)
