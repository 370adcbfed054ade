"""Command-line entry point: ``python -m mingap <command> ...``.

Exit status: 0 on success, 2 on configuration or input errors, 3 when a
capacity limit is hit, 1 for any other library error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .billiard import BilliardAlpha, billiard_trajectory
from .diffstats import first_occurrence
from .errors import CapacityError, HorizonError, MingapError, ParameterError
from .experiments import (ExperimentConfig, billiard_alpha, default_report_ns, diffstats_csv,
                          run_experiment, run_report, series_records, trial_alpha)
from .gaps import min_gap_trajectory
from .io import csv_text, exact_decimal, fmt_float, json_text, write_text
from .metricda import Envelope, eval_envelope
from .multtable import multtable_csv, multtable_rows
from .numtheory import AlphaFixed
from .sequences import make_sequence

EXIT_CONFIG = 2
EXIT_CAPACITY = 3


def _emit(text: str, out) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _config(args) -> ExperimentConfig:
    base = {}
    if args.config:
        try:
            base = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ParameterError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(base, dict):
            raise ParameterError("config must be a JSON object")
    overrides = {
        "sequence": args.seq, "n_max": args.n_max, "alpha_trials": args.trials,
        "master_seed": args.seed, "epsilon": args.epsilon,
        "kind": getattr(args, "kind", None), "workers": getattr(args, "workers", None),
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig.from_dict(base)


def _parse_alpha(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParameterError(f"bad alpha {text!r}") from None


def cmd_gen(args) -> None:
    cfg = _config(args)
    terms = make_sequence(cfg.sequence).terms(cfg.n_max)
    _emit("".join(f"{t}\n" for t in terms), args.out)


def cmd_diffstats(args) -> None:
    cfg = _config(args)
    _emit(diffstats_csv(cfg.sequence, cfg.report_ns or default_report_ns(cfg.n_max)), args.out)


def cmd_gaps(args) -> None:
    cfg = _config(args)
    alpha = (AlphaFixed.from_fraction(_parse_alpha(args.alpha)) if args.alpha
             else trial_alpha(cfg.master_seed, 0))
    seq = make_sequence(cfg.sequence)
    tr = min_gap_trajectory(seq, alpha, cfg.n_max)
    c_full = first_occurrence(seq, cfg.n_max).c_full_trajectory()[tr.ns]
    names = [n for n in cfg.envelopes if not n.startswith("billiard")]
    terms = seq.terms(cfg.n_max)
    env = {}
    for n in names:
        a_n = [terms[i - 1] for i in tr.ns] if n == "th1_upper_sizedep" else None
        env[n] = eval_envelope(Envelope(n, cfg.epsilon), tr.ns, c_full, a_n)
    rows = []
    for i, n in enumerate(tr.ns.tolist()):
        row = {"N": n, "delta": exact_decimal(int(tr.deltas[i])), "C_N": int(c_full[i])}
        row.update({k: fmt_float(v[i]) for k, v in env.items()})
        rows.append(row)
    _emit(csv_text(["N", "delta", "C_N", *names], rows), args.out)


def cmd_series(args) -> None:
    cfg = _config(args)
    recs = series_records(cfg.sequence, cfg.n_max, cfg.series_K, cfg.series_B_max, cfg.series_powers)
    _emit(json_text(recs), args.out)


def cmd_multtable(args) -> None:
    cfg = _config(args)
    ns = default_report_ns(args.n_max) if args.n_max else cfg.multtable_ns
    _emit(multtable_csv(multtable_rows(ns)), args.out)


def cmd_billiard(args) -> None:
    cfg = _config(args)
    alpha = (BilliardAlpha.from_fraction(_parse_alpha(args.alpha)) if args.alpha
             else billiard_alpha(cfg.master_seed, 0))
    _emit(billiard_trajectory(alpha, cfg.n_max, cfg.epsilon).csv(), args.out)


def cmd_experiment(args) -> None:
    cfg = _config(args)
    report = run_experiment(cfg)
    out = args.out or cfg.output_dir
    if out:
        for p in report.write(out, f"{cfg.kind}_experiment"):
            print(p)
    else:
        sys.stdout.write(report.json())


def cmd_report(args) -> None:
    cfg = _config(args)
    for p in run_report(cfg, args.out or cfg.output_dir or "."):
        print(p)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mingap", description="Minimal gaps of (a_n alpha) mod 1.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, alpha=False):
        sp.add_argument("--seq", help="sequence spec, e.g. squares, primes, quadratic:1,0,1, file:PATH")
        sp.add_argument("--n-max", type=int, help="truncation length N_max")
        sp.add_argument("--trials", type=int, help="number of sampled alpha")
        sp.add_argument("--seed", type=int, help="64-bit master seed")
        sp.add_argument("--epsilon", type=float, help="epsilon in the envelopes")
        sp.add_argument("--out", help="output file (directory for experiment/report)")
        sp.add_argument("--config", help="JSON config file with ExperimentConfig fields")
        if alpha:
            sp.add_argument("--alpha", help="explicit alpha (decimal or p/q) instead of a seeded one")
        return sp

    common(sub.add_parser("gen", help="print sequence terms")).set_defaults(func=cmd_gen)
    common(sub.add_parser("diffstats", help="difference-set sizes and energies")).set_defaults(func=cmd_diffstats)
    common(sub.add_parser("gaps", help="minimal-gap trajectory for one alpha"), True).set_defaults(func=cmd_gaps)
    common(sub.add_parser("series", help="truncated difference-set series")).set_defaults(func=cmd_series)
    common(sub.add_parser("multtable", help="multiplication table counts")).set_defaults(func=cmd_multtable)
    common(sub.add_parser("billiard", help="billiard minimal-gap trajectory"), True).set_defaults(func=cmd_billiard)
    ex = common(sub.add_parser("experiment", help="seeded Monte Carlo experiment"))
    ex.add_argument("--kind", choices=["gap", "billiard"])
    ex.add_argument("--workers", type=int)
    ex.set_defaults(func=cmd_experiment)
    common(sub.add_parser("report", help="diffstats/multtable/series tables")).set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CapacityError, HorizonError) as exc:
        print(f"mingap: capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ParameterError as exc:
        print(f"mingap: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"mingap: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except MingapError as exc:
        print(f"mingap: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
