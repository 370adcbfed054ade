"""Minimal gaps of dilated integer sequences modulo one.

Exact tools for difference sets, minimal-gap trajectories of ``(a_n alpha) mod 1``,
truncated convergence series, interval-union measures, multiplication-table
counts and rectangular-billiard spectra, plus a seeded experiment harness.
"""

from .billiard import (BilliardAlpha, Spectrum, billiard_trajectory, min_gap_spectrum, spectrum,
                       weyl_count)
from .diffstats import (DiffStats, FirstOccurrenceMap, diff_stats, first_occurrence, gcd_sum,
                        rep_counts_direct, rep_counts_fast, z_enumeration)
from .errors import (CapacityError, CollisionError, HorizonError, MingapError, ParameterError,
                     SequenceOverflowError, SequenceParseError)
from .experiments import (AggregateReport, ExperimentConfig, run_billiard_experiment,
                          run_gap_experiment, run_report)
from .gaps import (DegenerateGapWarning, GapTrajectory, min_gap_bruteforce, min_gap_sorted,
                   min_gap_trajectory)
from .intervals import IntervalUnion, build_S, intersect, measure
from .metricda import (MULT_TABLE_C, D_statistic, Envelope, catlin_series_partial,
                       chung_erdos_check, eval_envelope, overlap_diagnostics, thcat_series_partial)
from .multtable import HQuery, H_count, square_diff_count, table_count
from .numtheory import (AlphaFixed, mertens_product, primes_up_to, torus_norm, totient,
                        totient_sieve)
from .sequences import IntegerSequence, make_sequence, read_sequence_file

__version__ = "0.1.0"
