"""Seeded Monte Carlo runs over alpha and their aggregation against envelopes.

Trial ``i`` draws its alpha from ``splitmix64(master_seed + (i + 1) * GOLDEN)``,
so a trial's result depends only on the config and its index.  Trials run in
any order (optionally in worker processes) and are merged in index order, so
reports are byte-identical for every worker count.

"For infinitely many N" is approximated by hits in at least ``window_hits``
distinct dyadic windows ``[2^j, 2^(j+1))``; "for all large N" by the rate of
violations at ``N >= rate_n_min``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .billiard import BilliardAlpha, billiard_trajectory
from .diffstats import diff_stats, first_occurrence
from .errors import ParameterError
from .gaps import gap_trajectory_from_points, points
from .io import csv_text, fmt_float, json_text, write_text
from .metricda import (Envelope, D_statistic, eval_envelope, envelope_event, series_report,
                       thcat_series_partial)
from .multtable import multtable_csv, multtable_rows
from .numtheory import MASK64, SCALE, AlphaFixed
from .sequences import make_sequence

GOLDEN = 0x9E3779B97F4A7C15

GAP_ENVELOPES = ("th1_lower", "th1_upper_plain")
BILLIARD_ENVELOPES = ("billiard_low", "billiard_up", "billiard_low_strong", "billiard_up_strong")


def splitmix64(x: int) -> int:
    """The SplitMix64 finalizer (Steele, Lea and Flood constants)."""
    z = x & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, index: int) -> int:
    return splitmix64(master_seed + (index + 1) * GOLDEN)


def trial_alpha(master_seed: int, index: int) -> AlphaFixed:
    """Odd-numerator dyadic alpha in (0, 1) for trial ``index``."""
    return AlphaFixed(trial_seed(master_seed, index) | 1)


def billiard_alpha(master_seed: int, index: int) -> BilliardAlpha:
    """``1 + u`` with ``u`` the trial's odd-numerator dyadic, so alpha lies in (1, 2)."""
    return BilliardAlpha(SCALE + (trial_seed(master_seed, index) | 1))


@dataclass
class ExperimentConfig:
    kind: str = "gap"
    sequence: str = "squares"
    n_max: int = 10_000
    alpha_trials: int = 100
    master_seed: int = 0
    epsilon: float = 1.0
    envelopes: list[str] | None = None
    dyadic_window_max: int = 13
    window_hits: int = 3
    rate_n_min: int = 1000
    workers: int = 1
    report_ns: list[int] | None = None
    multtable_ns: list[int] = field(default_factory=lambda: [10, 100, 1000])
    series_K: int = 10_000
    series_B_max: int = 1000
    series_powers: list[float] = field(default_factory=lambda: [1.0, 2.0, 3.0])
    output_dir: str | None = None

    def __post_init__(self):
        if self.kind not in ("gap", "billiard"):
            raise ParameterError(f"kind must be 'gap' or 'billiard', got {self.kind!r}")
        if self.n_max < 2:
            raise ParameterError("n_max must be >= 2")
        if self.alpha_trials < 0:
            raise ParameterError("alpha_trials must be >= 0")
        if not 0 <= self.master_seed < 1 << 64:
            raise ParameterError("master_seed must be a 64-bit unsigned integer")
        if self.workers < 1 or self.window_hits < 1 or self.dyadic_window_max < 0:
            raise ParameterError("workers, window_hits must be >= 1; dyadic_window_max >= 0")
        if self.envelopes is None:
            self.envelopes = list(GAP_ENVELOPES if self.kind == "gap" else BILLIARD_ENVELOPES)
        for name in self.envelopes:
            Envelope(name, self.epsilon)
        make_sequence(self.sequence)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d, dict):
            raise ParameterError("config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ParameterError(f"unknown config keys: {', '.join(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ParameterError(str(exc)) from None

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read config {path}: {exc}") from None
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)


# --- per-trial work ---------------------------------------------------------------

_SHARED: dict = {}


def _shared_gap_data(cfg: ExperimentConfig) -> dict:
    key = (cfg.sequence, cfg.n_max)
    if _SHARED.get("key") != key:
        seq = make_sequence(cfg.sequence)
        terms = seq.terms(cfg.n_max)
        c_full = first_occurrence(seq, cfg.n_max).c_full_trajectory()
        _SHARED.clear()
        _SHARED.update(key=key, terms=terms, c_full=c_full)
    return _SHARED


def _envelope_values(cfg: ExperimentConfig, ns: np.ndarray, data: dict | None) -> dict:
    out = {}
    for name in cfg.envelopes:
        e = Envelope(name, cfg.epsilon)
        c_n = data["c_full"][ns] if e.needs_c else None
        a_n = [data["terms"][n - 1] for n in ns] if name == "th1_upper_sizedep" else None
        out[name] = (e.kind, eval_envelope(e, ns, c_n, a_n))
    return out


def _summarize(cfg: ExperimentConfig, ns: np.ndarray, delta: np.ndarray, envs: dict) -> dict:
    j = np.floor(np.log2(ns)).astype(np.int64)
    late = ns >= cfg.rate_n_min
    out = {}
    for name, (kind, env) in envs.items():
        ev = envelope_event(kind, delta, env)
        hit_n = ns[ev]
        windows = sorted(set(j[ev & (j <= cfg.dyadic_window_max)].tolist()))
        out[name] = {
            "last_event_N": int(hit_n[-1]) if len(hit_n) else None,
            "first_event_N": int(hit_n[0]) if len(hit_n) else None,
            "events_late": int(np.count_nonzero(ev & late)),
            "bucket_events": np.bincount(j[ev], minlength=int(j[-1]) + 1).tolist(),
            "windows": windows,
        }
    return out


def _gap_trial(args) -> dict:
    cfg, index = args
    data = _shared_gap_data(cfg)
    alpha = trial_alpha(cfg.master_seed, index)
    deltas, degenerate = gap_trajectory_from_points(points(data["terms"], alpha))
    ns = np.arange(2, cfg.n_max + 1)
    delta = deltas.astype(np.float64) / float(SCALE)
    return {
        "trial": index,
        "alpha_numerator": alpha.numerator,
        "degenerate": degenerate,
        "final_delta": fmt_float(delta[-1]),
        "envelopes": _summarize(cfg, ns, delta, _envelope_values(cfg, ns, data)),
    }


def _billiard_trial(args) -> dict:
    cfg, index = args
    alpha = billiard_alpha(cfg.master_seed, index)
    tr = billiard_trajectory(alpha, cfg.n_max, cfg.epsilon)
    delta = tr.as_float()
    return {
        "trial": index,
        "alpha_numerator": alpha.numerator,
        "degenerate": False,
        "final_delta": fmt_float(delta[-1]),
        "envelopes": _summarize(cfg, tr.ns, delta, _envelope_values(cfg, tr.ns, None)),
    }


def _run_trials(cfg: ExperimentConfig, worker) -> list[dict]:
    tasks = [(cfg, i) for i in range(cfg.alpha_trials)]
    if cfg.workers == 1 or len(tasks) <= 1:
        return [worker(t) for t in tasks]
    chunk = max(1, len(tasks) // (4 * cfg.workers))
    with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
        return list(ex.map(worker, tasks, chunksize=chunk))


# --- aggregation ------------------------------------------------------------------


@dataclass
class AggregateReport:
    """Per-envelope aggregates plus the per-trial summaries they came from."""

    config: dict
    ns_first: int
    envelopes: dict
    trials: list

    def to_dict(self) -> dict:
        return {"config": self.config, "n_trials": len(self.trials),
                "envelopes": self.envelopes, "trials": self.trials}

    def json(self) -> str:
        return json_text(self.to_dict())

    def csv(self) -> str:
        """Violation/hit rate per envelope and dyadic bucket."""
        rows = []
        for name, agg in self.envelopes.items():
            for b in agg["buckets"]:
                rows.append({"envelope": name, "kind": agg["kind"], **b, "rate": fmt_float(b["rate"])})
        return csv_text(["envelope", "kind", "j", "n_lo", "n_hi", "pairs", "events", "rate"], rows)

    def write(self, out_dir, stem: str) -> list[Path]:
        out = Path(out_dir)
        paths = [out / f"{stem}.json", out / f"{stem}.csv"]
        write_text(paths[0], self.json())
        write_text(paths[1], self.csv())
        return paths


def _aggregate(cfg: ExperimentConfig, trials: list[dict], n_first: int) -> AggregateReport:
    t = len(trials)
    n_max = cfg.n_max
    late_count = max(0, n_max - max(cfg.rate_n_min, n_first) + 1)
    envs = {}
    for name in cfg.envelopes:
        kind = Envelope(name, cfg.epsilon).kind
        per = [tr["envelopes"][name] for tr in trials]
        nbuckets = int(math.floor(math.log2(n_max))) + 1
        events = np.zeros(nbuckets, dtype=np.int64)
        for p in per:
            be = p["bucket_events"]
            events[: len(be)] += be
        buckets = []
        for j in range(nbuckets):
            lo, hi = max(1 << j, n_first), min((1 << (j + 1)) - 1, n_max)
            if lo > hi:
                continue
            pairs = t * (hi - lo + 1)
            buckets.append({"j": j, "n_lo": lo, "n_hi": hi, "pairs": pairs, "events": int(events[j]),
                            "rate": events[j] / pairs if pairs else 0.0})
        late_events = sum(p["events_late"] for p in per)
        nwin = [len(p["windows"]) for p in per]
        hist = [0] * (cfg.dyadic_window_max + 2)
        for w in nwin:
            hist[w] += 1
        envs[name] = {
            "kind": kind,
            "rate_n_min": cfg.rate_n_min,
            "late_pairs": t * late_count,
            "late_events": late_events,
            "late_rate": late_events / (t * late_count) if t and late_count else 0.0,
            "fraction_alpha_late_event": sum(p["events_late"] > 0 for p in per) / t if t else 0.0,
            "fraction_alpha_windows_ge_1": sum(w >= 1 for w in nwin) / t if t else 0.0,
            "fraction_alpha_recurrent": sum(w >= cfg.window_hits for w in nwin) / t if t else 0.0,
            "window_count_histogram": hist,
            "buckets": buckets,
        }
    # the worker count is an execution detail; leaving it out keeps reports identical
    echo = {k: v for k, v in cfg.to_dict().items() if k != "workers"}
    return AggregateReport(echo, n_first, envs, trials)


def run_gap_experiment(cfg: ExperimentConfig) -> AggregateReport:
    """Minimal-gap trajectories of ``(a_n alpha)`` for sampled alpha against envelopes."""
    if cfg.kind != "gap":
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), "kind": "gap", "envelopes": None})
    trials = _run_trials(cfg, _gap_trial) if cfg.alpha_trials else []
    return _aggregate(cfg, trials, 2)


def run_billiard_experiment(cfg: ExperimentConfig) -> AggregateReport:
    """Minimal spectral gaps of sampled billiards ``alpha in (1, 2)`` against envelopes."""
    if cfg.kind != "billiard":
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), "kind": "billiard", "envelopes": None})
    trials = _run_trials(cfg, _billiard_trial) if cfg.alpha_trials else []
    return _aggregate(cfg, trials, 1)


def run_experiment(cfg: ExperimentConfig) -> AggregateReport:
    return run_gap_experiment(cfg) if cfg.kind == "gap" else run_billiard_experiment(cfg)


def d_statistic_mean(seq, N: int, M, trials: int, master_seed: int = 0) -> tuple[float, int]:
    """Mean of ``D(N, M)`` over sampled alpha, with ``z`` all nonzero differences of ``A_N``.

    Returns ``(mean, len(z))``; the expected value is ``len(z) / M`` up to the
    ``2**-64`` discretisation of alpha.
    """
    fmap = first_occurrence(seq, N)
    z = fmap.keys.astype(np.int64)
    z = np.concatenate([z, -z])
    total = sum(D_statistic(z, M, trial_alpha(master_seed, i)) for i in range(trials))
    return total / trials, len(z)


# --- tables -----------------------------------------------------------------------


def default_report_ns(n_max: int) -> list[int]:
    ns = [n for e in range(1, 12) for n in (10**e, 2 * 10**e, 5 * 10**e) if n < n_max]
    return ns + [n_max]


def diffstats_rows(seq, ns) -> list[dict]:
    seq = make_sequence(seq)
    rows = []
    for n in ns:
        st = diff_stats(seq.terms(n))
        rows.append({
            "N": n,
            "a_N": seq.terms(n)[-1],
            "C_plus": st.c_plus,
            "C_N": st.c_full,
            "E_N": st.energy,
            "C_over_NlogN": fmt_float(st.c_full / (n * max(1.0, math.log(n)))),
            "E_lower_ratio": fmt_float(st.ratio_e_lower),
            "E_upper_ratio": fmt_float(st.ratio_e_upper),
            "sandwich": int(st.sandwich_holds()),
        })
    return rows


DIFFSTATS_FIELDS = ["N", "a_N", "C_plus", "C_N", "E_N", "C_over_NlogN", "E_lower_ratio",
                    "E_upper_ratio", "sandwich"]


def diffstats_csv(seq, ns) -> str:
    return csv_text(DIFFSTATS_FIELDS, diffstats_rows(seq, ns))


def series_records(seq, n_max: int, K: int, B_max: int, powers) -> list[dict]:
    fmap = first_occurrence(seq, n_max)
    out = []
    for p in powers:
        eta = lambda ell, p=p: np.asarray(ell, dtype=np.float64) ** (-p)
        s = thcat_series_partial(seq, eta, K, B_max, n_max, nonincreasing=True, fmap=fmap)
        out.append(series_report(f"difference_set_eta=N^-{p:g}", K, B_max, n_max, s))
    return out


def run_report(cfg: ExperimentConfig, out_dir=None) -> list[Path]:
    """Write ``diffstats.csv``, ``multtable.csv`` and ``series.json`` for the config."""
    out = Path(out_dir or cfg.output_dir or ".")
    ns = cfg.report_ns or default_report_ns(cfg.n_max)
    paths = [out / "diffstats.csv", out / "multtable.csv", out / "series.json"]
    write_text(paths[0], diffstats_csv(cfg.sequence, ns))
    write_text(paths[1], multtable_csv(multtable_rows(cfg.multtable_ns)))
    records = series_records(cfg.sequence, cfg.n_max, cfg.series_K, cfg.series_B_max, cfg.series_powers)
    write_text(paths[2], json_text(records))
    return paths
