"""Strictly increasing integer sequences ``a_1 < a_2 < ...`` and their truncations.

Sequences are described by short spec strings, which is also what the CLI and
experiment configs accept::

    natural                  a_n = n
    squares                  a_n = n^2
    primes                   a_n = n-th prime
    quadratic:a,b,c          a_n = a n^2 + b n + c
    geometric:r,a0           a_n = a0 * r^n
    piatetski_shapiro:p/q    a_n = floor(n^(p/q))
    file:path                one integer per line, ascending
"""

from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import ParameterError, SequenceOverflowError, SequenceParseError
from .numtheory import primes_up_to

INT64_MAX = (1 << 63) - 1

KINDS = ("natural", "squares", "primes", "quadratic", "geometric", "piatetski_shapiro", "file")


def iroot(x: int, q: int) -> int:
    """Largest integer ``r`` with ``r**q <= x`` (integer Newton iteration)."""
    if x < 0 or q < 1:
        raise ParameterError("iroot needs x >= 0 and q >= 1")
    if x < 2 or q == 1:
        return x
    r = 1 << -(-x.bit_length() // q)
    while True:
        y = ((q - 1) * r + x // r ** (q - 1)) // q
        if y >= r:
            return r
        r = y


def nth_prime_bound(n: int) -> int:
    """An upper bound for the n-th prime (Rosser's bound for n >= 6)."""
    if n < 6:
        return 13
    return int(n * (math.log(n) + math.log(math.log(n)))) + 1


class IntegerSequence:
    """A lazily extended strictly increasing sequence of positive integers."""

    def __init__(self, kind: str, params: tuple = ()):
        if kind not in KINDS:
            raise ParameterError(f"unknown sequence kind {kind!r}")
        self.kind = kind
        self.params = tuple(params)
        self._cache: list[int] = []
        self._validate()

    def __repr__(self):
        return f"IntegerSequence({self.spec!r})"

    @property
    def spec(self) -> str:
        if not self.params:
            return self.kind
        if self.kind == "file":
            return f"file:{self.params[0]}"
        if self.kind == "piatetski_shapiro":
            return f"piatetski_shapiro:{self.params[0]}"
        return f"{self.kind}:" + ",".join(str(p) for p in self.params)

    @property
    def finite_length(self) -> int | None:
        return len(self._cache) if self.kind == "file" else None

    def _validate(self) -> None:
        k, p = self.kind, self.params
        if k == "quadratic":
            if len(p) != 3:
                raise ParameterError("quadratic needs (a, b, c)")
            a, b, c = p
            if a < 1:
                raise ParameterError("quadratic needs leading coefficient a >= 1")
            # f(n+1) - f(n) = a(2n+1) + b is increasing in n, so n = 1 decides
            if 3 * a + b <= 0 or a + b + c < 1:
                raise ParameterError("quadratic must be positive and increasing for n >= 1")
        elif k == "geometric":
            if len(p) != 2:
                raise ParameterError("geometric needs (r, a0)")
            r, a0 = p
            if r < 2 or a0 < 1:
                raise ParameterError("geometric needs r >= 2 and a0 >= 1")
        elif k == "piatetski_shapiro":
            if len(p) != 1 or not isinstance(p[0], Fraction):
                raise ParameterError("piatetski_shapiro needs a rational theta")
            if p[0] <= 1:
                raise ParameterError("piatetski_shapiro needs theta > 1")
        elif k == "file":
            if len(p) != 1:
                raise ParameterError("file needs a path")
            self._cache = read_sequence_file(p[0])
        elif p:
            raise ParameterError(f"{k} takes no parameters")

    def _term(self, n: int) -> int:
        k, p = self.kind, self.params
        if k == "natural":
            return n
        if k == "squares":
            return n * n
        if k == "quadratic":
            a, b, c = p
            return a * n * n + b * n + c
        if k == "geometric":
            r, a0 = p
            return a0 * r**n
        if k == "piatetski_shapiro":
            theta = p[0]
            return iroot(n**theta.numerator, theta.denominator)
        raise AssertionError(k)

    def _extend(self, n: int) -> None:
        have = len(self._cache)
        if n <= have:
            return
        if self.kind == "file":
            raise ParameterError(f"sequence file has only {have} terms, {n} requested")
        if self.kind == "primes":
            self._cache = [int(q) for q in primes_up_to(nth_prime_bound(n))[:n]]
            return
        new = [self._term(i) for i in range(have + 1, n + 1)]
        prev = self._cache[-1] if self._cache else 0
        for i, v in enumerate(new, start=have + 1):
            if v <= prev:
                raise ParameterError(f"{self.spec}: term {i} = {v} does not exceed term {i - 1} = {prev}")
            prev = v
        self._cache.extend(new)

    def terms(self, n: int) -> list[int]:
        """The first ``n`` terms as Python ints (no size limit)."""
        if n < 1:
            raise ParameterError("N must be >= 1")
        self._extend(n)
        return self._cache[:n]

    def prefix(self, n: int) -> np.ndarray:
        """The truncation ``A_N`` as an int64 array.

        Raises :class:`SequenceOverflowError` if ``a_N`` exceeds ``2**63 - 1``.
        """
        t = self.terms(n)
        if t[-1] > INT64_MAX:
            raise SequenceOverflowError(f"{self.spec}: a_{n} = {t[-1]} exceeds 2**63-1")
        return np.array(t, dtype=np.int64)


def read_sequence_file(path) -> list[int]:
    text = Path(path).read_text(encoding="utf-8")
    values: list[int] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        s = line.strip()
        if not s:
            continue
        try:
            v = int(s, 10)
        except ValueError:
            raise SequenceParseError(f"{path}:{lineno}: not an integer: {s!r}") from None
        if v < 1 or v > INT64_MAX:
            raise SequenceParseError(f"{path}:{lineno}: value {v} outside [1, 2**63-1]")
        if values and v <= values[-1]:
            raise SequenceParseError(f"{path}:{lineno}: {v} is not larger than {values[-1]}")
        values.append(v)
    if not values:
        raise SequenceParseError(f"{path}: empty sequence file")
    return values


def write_sequence_file(path, values) -> None:
    Path(path).write_text("".join(f"{int(v)}\n" for v in values), encoding="utf-8")


def make_sequence(spec) -> IntegerSequence:
    """Build a sequence from a spec string such as ``"quadratic:1,0,1"``.

    An existing :class:`IntegerSequence` is returned unchanged.
    """
    if isinstance(spec, IntegerSequence):
        return spec
    if not isinstance(spec, str) or not spec:
        raise ParameterError(f"bad sequence spec {spec!r}")
    kind, _, arg = spec.partition(":")
    kind = kind.strip().lower()
    aliases = {"ps": "piatetski_shapiro", "n": "natural"}
    kind = aliases.get(kind, kind)
    if kind == "file":
        return IntegerSequence("file", (arg,))
    if kind == "piatetski_shapiro":
        try:
            theta = Fraction(arg.strip())
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"bad theta {arg!r}") from None
        return IntegerSequence(kind, (theta,))
    params: tuple = ()
    if arg:
        try:
            params = tuple(int(x) for x in arg.split(","))
        except ValueError:
            raise ParameterError(f"bad parameters in {spec!r}") from None
    return IntegerSequence(kind, params)
