# ---
# jupyter:
#   jupytext:
#     formats: py:percent
#   kernelspec:
#     display_name: Python 3
#     language: python
#     name: python3
# ---

# %% [markdown]
# # Packing and covering numbers
#
# C_ε is the size of the largest set whose points are pairwise at distance
# at least ε. R_ε is the fewest open ε-balls needed to cover every point.
# Both are exact here: the solvers split the conflict graph into connected
# components and search each one.

# %%
import numpy as np

from epscx import build_from_matrix, max_separated_exact, min_net_exact
from epscx.corpus import distance_quantiles, random_metric
from epscx.solvers import complexity_profile

# %% [markdown]
# Five points on a line with d(i, j) = |i − j|. At ε = 1.5 the points
# 0, 2, 4 are separated. The balls around 0 and 3 cover everything.

# %%
line = build_from_matrix([[abs(i - j) for j in range(5)] for i in range(5)])
sep = max_separated_exact(line, 1.5)
net = min_net_exact(line, 1.5)
print("C =", sep.size, "witness", sep.witness)
print("R =", net.size, "witness", net.witness)

# %% [markdown]
# Balls are open, so at ε = 1 a ball holds only its center and R_1 = 5.
# A profile sorts the grid by decreasing ε. It also checks monotonicity
# and the chain R_ε ≤ C_ε ≤ R_{ε/2}.

# %%
prof = complexity_profile(line, [3, 2, 1.5, 1, 0.5])
for e in prof:
    print(f"eps={e.eps:<4} C={e.separated.size} R={e.net.size}")

# %% [markdown]
# Ties are broken by a priority order: the witness is the lexicographically
# smallest optimal set with respect to it. Reversing the order gives another
# optimal set of the same size.

# %%
print(min_net_exact(line, 1.5, order=[4, 3, 2, 1, 0]).witness)

# %% [markdown]
# On a random metric (uniform weights closed under shortest paths), ε is
# taken from realized distances. This tests the d = ε boundary directly.

# %%
space = random_metric(np.random.default_rng(1), 12)
for eps in distance_quantiles(space, (0.2, 0.5, 0.8)):
    c = max_separated_exact(space, eps).size
    r = min_net_exact(space, eps).size
    print(f"eps={eps:.4f}  R={r}  C={c}  R_half={min_net_exact(space, eps / 2).size}")
