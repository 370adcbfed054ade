"""Acceptance suite: one test per criterion, each with its stated tolerance and time budget.

Monte Carlo criteria use fixed master seeds, so every run measures the same
alpha samples.
"""

import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from mingap.billiard import spectrum, weyl_count
from mingap.diffstats import diff_stats, first_occurrence, rep_counts_direct, rep_counts_fast
from mingap.experiments import (ExperimentConfig, billiard_alpha, d_statistic_mean,
                                run_billiard_experiment, run_gap_experiment)
from mingap.gaps import min_gap_bruteforce, min_gap_sorted, min_gap_trajectory
from mingap.intervals import build_S
from mingap.metricda import MULT_TABLE_C, chung_erdos_check, clog
from mingap.multtable import square_diff_count
from mingap.numtheory import SCALE, AlphaFixed, totient_sieve
from mingap.sequences import make_sequence

PSI_SET = [Fraction(1, 2**j) for j in range(2, 11)] + [Fraction(0.4)]


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.1f}s, budget {self.seconds}s"


def test_criterion_01_oracle_equivalence():
    """Exact agreement of fast and oracle routes; < 1 min."""
    rng = np.random.default_rng(1)
    with Budget(60):
        for _ in range(100):
            n = int(rng.integers(1, 501))
            span = int(rng.choice([2 * n, 20 * n, 10**5]))
            a = np.sort(rng.choice(np.arange(1, span + 1), size=n, replace=False))
            assert rep_counts_fast(a).same_as(rep_counts_direct(a))
        for _ in range(100):
            n = int(rng.integers(2, 501))
            a = np.sort(rng.choice(np.arange(1, 10**7), size=n, replace=False))
            alpha = AlphaFixed(int(rng.integers(0, 2**63)) * 2 + 1)
            assert min_gap_sorted(a, alpha) == min_gap_bruteforce(a, alpha)
        for spec in ("squares", "primes", "ps:3/2", "natural", "quadratic:3,1,7"):
            for _ in range(2):
                alpha = AlphaFixed(int(rng.integers(0, 2**63)) * 2 + 1)
                tr = min_gap_trajectory(spec, alpha, 300)
                a = make_sequence(spec).prefix(300)
                assert [tr.at(n) for n in range(2, 301)] == [min_gap_sorted(a[:n], alpha) for n in range(2, 301)]


def test_criterion_02_energy_sandwich():
    """N^4/C_N <= E_N <= N^2 C_N exactly for five families at N = 1e2, 1e3, 1e4; < 1 min."""
    with Budget(60):
        for spec in ("squares", "primes", "natural", "geometric:2,1", "ps:3/2"):
            seq = make_sequence(spec)
            for n in (10**2, 10**3, 10**4):
                st = diff_stats(seq.terms(n))
                assert st.sandwich_holds(), (spec, n)


def test_criterion_03_measure_identities_and_chung_erdos():
    """Exact measures of S_k for k <= 1000 and the psi set; Chung-Erdos on 100 families; < 1 min."""
    phi = totient_sieve(1000)
    with Budget(60):
        for k in range(1, 1001):
            for psi in PSI_SET:
                assert build_S(k, psi).measure() == min(2 * psi, 1)
                if k >= 2:
                    assert build_S(k, psi, coprime_only=True).measure() == 2 * psi * phi[k] / k
        rng = random.Random(3)
        for _ in range(100):
            fam = [build_S(rng.randrange(1, 60), Fraction(rng.randrange(1, 64), 1024),
                           coprime_only=rng.random() < 0.5) for _ in range(rng.randrange(1, 7))]
            r = chung_erdos_check(fam)
            assert r.holds, (r.lhs, r.rhs)


def test_criterion_04_primes_difference_set_size():
    """C_N / (N log N) within a factor 2 over N = 1e3, 1e4, 1e5; < 2 min."""
    seq = make_sequence("primes")
    with Budget(120):
        ratios = [diff_stats(seq.prefix(n)).c_full / (n * math.log(n)) for n in (10**3, 10**4, 10**5)]
    assert max(ratios) / min(ratios) <= 2, ratios


def test_criterion_05_squares_ford_band_and_parity_count():
    """Ford-normalised C_N within a factor 3 over N = 1e3, 1e4, 3e4; exact parity count for N <= 2000; < 3 min."""
    def normalised(n, c):
        return c * clog(n) ** MULT_TABLE_C * clog(n, 2) ** 1.5 / n**2

    with Budget(180):
        ratios = [normalised(n, 2 * square_diff_count(n) + 1) for n in (10**3, 10**4, 3 * 10**4)]
        assert max(ratios) / min(ratios) <= 3, ratios
        traj = first_occurrence("squares", 2000).c_plus_trajectory()
        for n in range(1, 2001):
            assert square_diff_count(n) == traj[n], n
        sq = make_sequence("squares")
        for n in (2, 3, 10, 99, 500, 1999, 2000):
            assert square_diff_count(n) == diff_stats(sq.prefix(n)).c_plus


def test_criterion_06_lower_envelope_violation_rate():
    """Violations of delta >= 1/(C_N log N (log_2 N)^2) at N >= 1e3 in < 5% of (alpha, N); < 5 min."""
    cfg = ExperimentConfig(sequence="squares", n_max=10**4, alpha_trials=200, master_seed=6,
                           epsilon=1.0, envelopes=["th1_lower"], rate_n_min=1000)
    with Budget(300):
        agg = run_gap_experiment(cfg).envelopes["th1_lower"]
    assert agg["late_pairs"] == 200 * 9001
    assert agg["late_rate"] < 0.05, agg["late_rate"]


def test_criterion_07_upper_envelope_recurrence():
    """>= 90% of 100 alpha hit delta <= 1/C_N in >= 3 dyadic windows with j <= 13; < 5 min."""
    cfg = ExperimentConfig(sequence="squares", n_max=10**4, alpha_trials=100, master_seed=7,
                           envelopes=["th1_upper_plain"], window_hits=3, dyadic_window_max=13)
    with Budget(300):
        agg = run_gap_experiment(cfg).envelopes["th1_upper_plain"]
    assert agg["fraction_alpha_recurrent"] >= 0.9, agg["fraction_alpha_recurrent"]


def test_criterion_08_d_statistic_mean():
    """Mean of D(N, M) over 1e3 alpha within [9.5, 10.5] for squares, N = 1e3, M = C_N/10; < 1 min."""
    c_n = diff_stats(make_sequence("squares").prefix(1000)).c_full
    with Budget(60):
        mean, nz = d_statistic_mean("squares", 1000, Fraction(c_n, 10), 1000, master_seed=8)
    assert nz == c_n - 1
    assert 9.5 <= mean <= 10.5, mean


def test_criterion_09_weyl_law_and_collision():
    """Eigenvalue count within 2% of pi L/(4 sqrt(alpha)) at L = 1e5 for 20 alpha; collision at alpha = 3/2, L = 20; < 2 min."""
    with Budget(120):
        for i in range(20):
            alpha = billiard_alpha(9, i)
            s = spectrum(alpha, 10**5)
            dev = abs(len(s) / weyl_count(alpha, 10**5) - 1)
            assert dev <= 0.02, (float(alpha), dev)
        s = spectrum(Fraction(3, 2), 20)
        assert s.collision
        k = s.first_collision()
        assert {(int(s.m[k]), int(s.n[k])), (int(s.m[k + 1]), int(s.n[k + 1]))} == {(1, 4), (3, 2)}


def test_criterion_10_billiard_envelopes():
    """< 20% of 50 alpha with delta <= (log N)^{2c}/(N log N) somewhere in [1e3, 1e4];
    >= 80% with a dyadic window where delta >= (log N)^{2c}/N; < 10 min."""
    cfg = ExperimentConfig(kind="billiard", n_max=10**4, alpha_trials=50, master_seed=10,
                           envelopes=["billiard_low", "billiard_up"], rate_n_min=1000)
    with Budget(600):
        env = run_billiard_experiment(cfg).envelopes
    assert env["billiard_low"]["fraction_alpha_late_event"] < 0.20, env["billiard_low"]["fraction_alpha_late_event"]
    assert env["billiard_up"]["fraction_alpha_windows_ge_1"] >= 0.80, env["billiard_up"]["fraction_alpha_windows_ge_1"]


@pytest.mark.parametrize("kind", ["gap", "billiard"])
def test_criterion_11_determinism(kind):
    """Byte-identical reports for repeated runs and for 1, 2 and 3 workers."""
    outputs = set()
    for workers in (1, 1, 2, 3):
        cfg = ExperimentConfig(kind=kind, sequence="primes", n_max=2000, alpha_trials=7,
                               master_seed=11, workers=workers)
        r = run_gap_experiment(cfg) if kind == "gap" else run_billiard_experiment(cfg)
        outputs.add((r.json().encode(), r.csv().encode()))
    assert len(outputs) == 1
