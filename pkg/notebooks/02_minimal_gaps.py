# ---
# jupyter:
#   jupytext:
#     formats: ipynb,py:percent
#     text_representation:
#       extension: .py
#       format_name: percent
#       format_version: '1.3'
#       jupytext_version: 1.16.0
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Minimal gaps of $(a_n \alpha) \bmod 1$
#
# $\alpha$ is a 64-bit dyadic, so every point $a_n\alpha \bmod 1$ and every gap
# is an exact integer multiple of $2^{-64}$.

# %%
import numpy as np

from mingap import AlphaFixed, Envelope, eval_envelope, first_occurrence, min_gap_trajectory
from mingap.experiments import ExperimentConfig, run_gap_experiment, trial_alpha

# %% [markdown]
# ## One trajectory against the envelopes

# %%
n_max = 4000
alpha = trial_alpha(2024, 0)
tr = min_gap_trajectory("squares", alpha, n_max)
c_n = first_occurrence("squares", n_max).c_full_trajectory()[tr.ns]
delta = tr.as_float()
lower = eval_envelope(Envelope("th1_lower", 1.0), tr.ns, c_n)
upper = eval_envelope(Envelope("th1_upper_plain"), tr.ns, c_n)
for n in (10, 100, 1000, 4000):
    i = n - 2
    print(f"N={n:5d} delta={delta[i]:.3e}  lower={lower[i]:.3e}  1/C_N={upper[i]:.3e}")

# %% [markdown]
# ## Many $\alpha$ at once
#
# "For all large $N$" becomes a violation rate at $N \ge 1000$; "for infinitely
# many $N$" becomes hits in at least three dyadic windows $[2^j, 2^{j+1})$.

# %%
cfg = ExperimentConfig(sequence="squares", n_max=4000, alpha_trials=30, master_seed=1)
report = run_gap_experiment(cfg)
for name, agg in report.envelopes.items():
    print(name, agg["kind"], "late rate", round(agg["late_rate"], 4),
          "recurrent", agg["fraction_alpha_recurrent"])

# %%
print(report.csv()[:400])
