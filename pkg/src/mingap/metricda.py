"""Envelopes, Catlin-type series, overlap diagnostics and the D(N, M) statistic.

Logarithms follow the clamped convention ``log x := max(1, log x)`` at every
level, so ``log_2 x = max(1, log(max(1, log x)))`` and so on; every envelope
is then finite and positive for all ``N >= 1``.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .diffstats import FirstOccurrenceMap, first_occurrence, require_horizon
from .errors import ParameterError
from .intervals import IntervalUnion, as_fraction, build_S, union_all
from .numtheory import SCALE, AlphaFixed, prime_factors, torus_norm_num, totient_sieve

#: Exponent from the Erdos multiplication table problem, 1 - (1 + log log 2) / log 2.
#: The inner logs are the genuine ones (log log 2 < 0), not clamped.
MULT_TABLE_C = 1.0 - (1.0 + math.log(math.log(2.0))) / math.log(2.0)

CE_SLACK = Fraction(1, 1 << 40)


def clog(x, depth: int = 1):
    """Iterated clamped logarithm: ``depth`` applications of ``max(1, log .)``.

    Accepts numbers (including Python ints too large for floats) or arrays.
    """
    if isinstance(x, np.ndarray):
        v = x.astype(np.float64)
        for _ in range(depth):
            v = np.maximum(1.0, np.log(np.maximum(v, 1.0)))
        return v
    v = x
    for _ in range(depth):
        v = max(1.0, math.log(v)) if v >= 1 else 1.0
    return float(v)


# kind describes which event an envelope is compared against:
#   lower        delta >= env for all large N; violation when delta < env
#   lower_weak   same, but a violation is delta <= env
#   upper_io     delta <= env for infinitely many N; a hit when delta <= env
#   upper_ev     delta <= env for all large N; violation when delta > env
#   lower_io     delta >= env for infinitely many N; a hit when delta >= env
ENVELOPE_KINDS = {
    "th1_lower": "lower",
    "th1_upper_sizedep": "upper_io",
    "th1_upper_plain": "upper_io",
    "conj_up": "upper_ev",
    "allN": "upper_ev",
    "primes_cd": "upper_io",
    "squares_up": "upper_io",
    "squares_low": "lower",
    "billiard_up": "lower_io",
    "billiard_low": "lower_weak",
    "billiard_up_strong": "lower_io",
    "billiard_low_strong": "lower_weak",
}


@dataclass(frozen=True)
class Envelope:
    """A closed-form comparison curve for minimal-gap trajectories.

    ``primes_cd`` is ``1/(N log^2 N log_2 N (log_3 N)^(1+eps))``: with
    ``epsilon=0`` it is the divergent (upper, infinitely often) side, with
    ``epsilon>0`` the convergent (lower) side.
    """

    name: str
    epsilon: float = 1.0
    constant: float = 1.0

    def __post_init__(self):
        if self.name not in ENVELOPE_KINDS:
            raise ParameterError(f"unknown envelope {self.name!r}")

    @property
    def kind(self) -> str:
        if self.name == "primes_cd" and self.epsilon > 0:
            return "lower"
        return ENVELOPE_KINDS[self.name]

    @property
    def needs_c(self) -> bool:
        return not self.name.startswith(("primes", "squares", "billiard"))


def _logs(n):
    return clog(n, 1), clog(n, 2), clog(n, 3)


def eval_envelope(e: Envelope, n, c_n=None, a_n=None):
    """Value of envelope ``e`` at ``N`` (scalars or arrays)."""
    if isinstance(n, np.ndarray):
        n = n.astype(np.float64)
    if np.any(np.asarray(n) < 1):
        raise ParameterError("N must be >= 1")
    if e.needs_c:
        if c_n is None:
            raise ParameterError(f"{e.name} needs C_N")
        c_n = np.asarray(c_n, dtype=np.float64) if isinstance(c_n, np.ndarray) else float(c_n)
    l1, l2, l3 = _logs(n)
    eps, c = e.epsilon, MULT_TABLE_C
    name = e.name
    if name == "th1_lower":
        v = 1.0 / (c_n * l1 * l2 ** (1 + eps))
    elif name == "th1_upper_sizedep":
        if a_n is None:
            raise ParameterError("th1_upper_sizedep needs a_N")
        if isinstance(a_n, np.ndarray) and a_n.dtype != object:
            la = clog(a_n, 2)
        elif isinstance(a_n, (list, tuple, np.ndarray)):
            la = np.array([clog(int(x), 2) for x in a_n])
        else:
            la = clog(a_n, 2)
        v = la / (c_n * l1 * l2)
    elif name == "th1_upper_plain":
        v = 1.0 / c_n
    elif name == "conj_up":
        v = l1**eps / c_n
    elif name == "allN":
        v = n**eps / c_n
    elif name == "primes_cd":
        v = 1.0 / (n * l1**2 * l2 * l3 ** (1 + eps))
    elif name == "squares_up":
        v = l1 ** (c - 1) * l2**0.5 / n**2
    elif name == "squares_low":
        v = l1 ** (c - 1) * l2**0.5 / (n**2 * l3 ** (1 + eps))
    elif name == "billiard_up":
        v = l1 ** (2 * c) / n
    elif name == "billiard_low":
        v = l1 ** (2 * c) / (n * l1)
    elif name == "billiard_up_strong":
        v = l1 ** (2 * c) * l2 ** (3 - c - eps) / n
    else:  # billiard_low_strong
        v = l1 ** (2 * c) * l2 ** (2 - c - eps) / (3 * n * l1)
    return e.constant * v


def envelope_event(kind: str, delta, env):
    """Boolean event for an envelope kind: a violation or a hit (see ENVELOPE_KINDS)."""
    if kind == "lower":
        return delta < env
    if kind == "lower_weak":
        return delta <= env
    if kind == "upper_io":
        return delta <= env
    if kind == "upper_ev":
        return delta > env
    if kind == "lower_io":
        return delta >= env
    raise ParameterError(f"unknown envelope kind {kind!r}")


def _evaluate(f, args: np.ndarray) -> np.ndarray:
    """Apply ``f`` (callable, mapping, or table indexed by argument) to an int array."""
    if isinstance(f, Mapping):
        return np.array([float(f.get(int(x), 0.0)) for x in args.ravel()]).reshape(args.shape)
    if isinstance(f, (np.ndarray, list, tuple)):
        table = np.asarray(f, dtype=np.float64)
        out = np.zeros(args.shape)
        ok = args < len(table)
        out[ok] = table[args[ok]]
        return out
    try:
        out = np.asarray(f(args), dtype=np.float64)
        if out.shape == args.shape:
            return out
    except (TypeError, ValueError):
        pass
    return np.array([float(f(int(x))) for x in args.ravel()]).reshape(args.shape)


def catlin_series_partial(psi, K: int = 10_000, B_max: int = 1000, block: int = 256) -> float:
    """Truncation ``sum_{k<=K} phi(k) max_{b<=B_max} psi(bk)/(bk)`` of the Catlin series.

    Every term is non-negative, so this is a lower bound for the full series;
    the sum is correctly rounded, hence exactly monotone in ``K`` and ``B_max``.
    ``psi`` may be a vectorized callable, a mapping (missing keys are 0) or a
    table indexed by argument.
    """
    if K < 1 or B_max < 1:
        raise ParameterError("K and B_max must be >= 1")
    phi = totient_sieve(K).values
    b = np.arange(1, B_max + 1, dtype=np.int64)
    total = []
    for start in range(1, K + 1, block):
        k = np.arange(start, min(start + block, K + 1), dtype=np.int64)
        bk = k[:, None] * b[None, :]
        best = np.max(_evaluate(psi, bk) / bk, axis=1)
        total.extend((phi[k] * best).tolist())
    return math.fsum(total)


def thcat_series_partial(seq, eta, K: int = 10_000, B_max: int = 1000, L_max: int | None = None,
                         nonincreasing: bool = False, fmap: FirstOccurrenceMap | None = None,
                         block: int = 256) -> float:
    """Truncated difference-set series ``sum phi(k) max_b sup_{N(bk)<=l<=L_max} eta(l) / (bk)``.

    ``N(bk)`` beyond the horizon counts as infinity and contributes 0.  With
    ``nonincreasing`` the inner supremum is taken as ``eta(N(bk))``, which is
    the same value when ``eta`` really is nonincreasing.
    """
    if L_max is None:
        L_max = fmap.horizon if fmap is not None else None
    if L_max is None or L_max < 2:
        raise ParameterError("L_max must be >= 2")
    if fmap is None:
        fmap = first_occurrence(seq, L_max)
    require_horizon(fmap, L_max)
    ell = np.arange(0, L_max + 1, dtype=np.int64)
    eta_vals = _evaluate(eta, np.maximum(ell, 1))
    eta_vals[0] = 0.0
    if np.any(eta_vals < 0):
        raise ParameterError("eta must be non-negative")
    if nonincreasing:
        inner = eta_vals
    else:
        inner = np.maximum.accumulate(eta_vals[::-1])[::-1].copy()
        inner[0] = 0.0
    phi = totient_sieve(K).values
    b = np.arange(1, B_max + 1, dtype=np.int64)
    total = []
    for start in range(1, K + 1, block):
        k = np.arange(start, min(start + block, K + 1), dtype=np.int64)
        bk = k[:, None] * b[None, :]
        first = fmap.lookup(bk)
        first[first > L_max] = 0
        best = np.max(inner[first] / bk, axis=1)
        total.extend((phi[k] * best).tolist())
    return math.fsum(total)


def series_report(series: str, K: int, B_max: int, L_max: int | None, partial_sum: float) -> dict:
    return {"series": series, "K": K, "B_max": B_max, "L_max": L_max, "partial_sum": partial_sum}


@dataclass(frozen=True)
class OverlapReport:
    D: Fraction
    P: float
    lhs_measure: Fraction
    rhs_bound: float
    ratio: float


def overlap_D(z_m: int, z_n: int, psi_m, psi_n) -> Fraction:
    """``max(z_m psi_n, z_n psi_m) / gcd(z_m, z_n)``."""
    psi_m, psi_n = as_fraction(psi_m), as_fraction(psi_n)
    return max(z_m * psi_n, z_n * psi_m) / math.gcd(z_m, z_n)


def overlap_P(z_m: int, z_n: int, D: Fraction, prime_bound: int) -> float:
    """Product of ``1 + 1/p`` over primes ``p | z_m z_n / gcd^2`` with ``D < p <= prime_bound``."""
    if D < 1:
        return 0.0
    g = math.gcd(z_m, z_n)
    q = (z_m // g) * (z_n // g)
    prod = 1.0
    for p in prime_factors(q):
        if D < p <= prime_bound:
            prod *= 1.0 + 1.0 / p
    return prod


def overlap_diagnostics(z_m: int, z_n: int, psi_m, psi_n, prime_bound: int) -> OverlapReport:
    """Exact overlap measure next to the shape of the pairwise overlap bound.

    Reports ``lambda(S_m ∩ S_n) / (sqrt(psi_m psi_n)/prime_bound + P lambda(S_m) lambda(S_n))``.
    The bound holds only up to an unspecified constant, so nothing is asserted.
    """
    if z_m == z_n:
        raise ParameterError("z_m and z_n must differ")
    D = overlap_D(z_m, z_n, psi_m, psi_n)
    P = overlap_P(z_m, z_n, D, prime_bound)
    s_m, s_n = build_S(z_m, psi_m), build_S(z_n, psi_n)
    lhs = s_m.intersect(s_n).measure()
    rhs = (math.sqrt(float(as_fraction(psi_m)) * float(as_fraction(psi_n))) / prime_bound
           + P * float(s_m.measure()) * float(s_n.measure()))
    ratio = float(lhs) / rhs if rhs > 0 else math.inf
    return OverlapReport(D, P, lhs, rhs, ratio)


@dataclass(frozen=True)
class ChungErdos:
    lhs: Fraction
    rhs: Fraction
    holds: bool = field(default=False)


def chung_erdos_check(unions: list[IntervalUnion]) -> ChungErdos:
    """Exact check of ``lambda(⋃ A_m) >= (sum lambda(A_m))^2 / sum_{m,n} lambda(A_m ∩ A_n)``."""
    measures = [u.measure() for u in unions]
    if not any(measures):
        raise ParameterError("at least one union must have positive measure")
    pair_sum = Fraction(0)
    for i, u in enumerate(unions):
        pair_sum += measures[i]
        for v in unions[i + 1 :]:
            pair_sum += 2 * u.intersect(v).measure()
    lhs = union_all(unions).measure()
    rhs = sum(measures, Fraction(0)) ** 2 / pair_sum
    return ChungErdos(lhs, rhs, lhs >= rhs - CE_SLACK)


def d_threshold(M) -> int:
    """Largest numerator ``t`` with ``t / 2**64 <= 1 / (2M)``."""
    M = as_fraction(M)
    if M <= 0:
        raise ParameterError("M must be positive")
    return math.floor(Fraction(SCALE) / (2 * M))


def D_statistic(z, M, alpha: AlphaFixed) -> int:
    """``#{n : ||z_n alpha|| <= 1/(2M)}``.

    ``z`` may contain negative integers; ``||-x|| = ||x||``.
    """
    z = np.asarray(z)
    if z.dtype == object:
        z = np.array([int(v) & ((1 << 64) - 1) for v in z], dtype=np.uint64)
    norms = torus_norm_num(z, alpha)
    t = d_threshold(M)
    if t >= SCALE:
        return int(len(norms))
    return int(np.count_nonzero(norms <= np.uint64(t)))
