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
# # Spectral gaps of a rectangular billiard
#
# Eigenvalues $\alpha m^2 + n^2$ ($m, n \ge 1$) are enumerated exactly in fixed
# point, so ties are real coincidences and not rounding artefacts.

# %%
from fractions import Fraction

from mingap import billiard_trajectory, spectrum, weyl_count
from mingap.experiments import ExperimentConfig, billiard_alpha, run_billiard_experiment

# %%
s = spectrum(Fraction(3, 2), 20)
print([str(s.value(i)) for i in range(len(s))])
print("collision at index", s.first_collision())

# %% [markdown]
# ## Weyl's law

# %%
for i in range(5):
    a = billiard_alpha(3, i)
    n = len(spectrum(a, 10**5))
    print(f"alpha={float(a):.4f} count={n} ratio={n / weyl_count(a, 10**5):.4f}")

# %% [markdown]
# ## Minimal gap against $(\log N)^{2c}/N$ and $(\log N)^{2c}/(N \log N)$

# %%
tr = billiard_trajectory(billiard_alpha(3, 0), 5000)
print(tr.csv().splitlines()[-1])

# %%
cfg = ExperimentConfig(kind="billiard", n_max=5000, alpha_trials=20, master_seed=3)
for name, agg in run_billiard_experiment(cfg).envelopes.items():
    print(name, agg["kind"], agg["fraction_alpha_late_event"], agg["fraction_alpha_windows_ge_1"])
