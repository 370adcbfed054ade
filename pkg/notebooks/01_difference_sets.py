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
# # Difference sets: size, energy and first occurrences
#
# For a truncation $A_N = \{a_1 < \dots < a_N\}$ we look at the difference set
# $A_N - A_N$, its size $C_N$ and the additive energy
# $E_N = \sum_u r_N(u)^2$.  Cauchy–Schwarz squeezes the energy between
# $N^4/C_N$ and $N^2 C_N$.

# %%
import math

import numpy as np

from mingap import diff_stats, first_occurrence, make_sequence, square_diff_count

# %% [markdown]
# ## Five families at three sizes

# %%
for spec in ["natural", "squares", "primes", "ps:3/2", "geometric:2,1"]:
    seq = make_sequence(spec)
    for n in (100, 1000):
        st = diff_stats(seq.terms(n))
        print(f"{spec:14s} N={n:5d}  C_N={st.c_full:9d}  E*C/N^4={st.ratio_e_lower:8.3f}  "
              f"E/(N^2 C)={st.ratio_e_upper:.2e}  sandwich={st.sandwich_holds()}")

# %% [markdown]
# Natural numbers have the smallest difference set ($C_N = 2N-1$) and the largest
# energy; the geometric sequence is a Sidon set, every difference appearing once.
#
# ## The primes: $C_N / (N \log N)$

# %%
primes = make_sequence("primes")
for n in (1000, 3000, 10000):
    c = diff_stats(primes.prefix(n)).c_full
    print(n, c, round(c / (n * math.log(n)), 4))

# %% [markdown]
# ## Squares and the multiplication table
#
# $m^2 - n^2 = (m-n)(m+n)$ turns the positive differences of squares into
# products $ab$ with $a > b$ of equal parity and $a + b \le 2N$.  Counting them
# with a bitset is much cheaper than enumerating pairs.

# %%
sq = make_sequence("squares")
for n in (10, 100, 1000):
    print(n, square_diff_count(n), diff_stats(sq.prefix(n)).c_plus)

# %% [markdown]
# ## First occurrence of a difference
#
# $\mathcal N(k)$ is the first $N$ at which $k$ becomes a positive difference.

# %%
fm = first_occurrence("squares", 50)
print({k: fm.get(k) for k in (3, 5, 7, 8, 15, 16, 24)})
traj = fm.c_plus_trajectory()
print("C+_N for N = 1..10:", traj[1:11].tolist())
