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
# # Dimension of the middle-thirds Cantor set
#
# The space is the 1024 left endpoints of the level-10 construction.
# At ε = 3^{-k} two endpoints conflict exactly when they share a level-k
# interval. The conflict graph is then a union of cliques, so C_ε = 2^k
# and the slope ln C_ε / (−ln ε) is ln 2 / ln 3.

# %%
import math

from epscx.corpus import cantor_eps, cantor_interval_count, cantor_space
from epscx.measures import dimension_estimate
from epscx.solvers import complexity_profile

# %%
level = 10
space = cantor_space(level)
prof = complexity_profile(space, [cantor_eps(level, k) for k in range(1, 9)], allow_greedy=False)
for k, e in zip(range(1, 9), prof):
    print(k, e.separated.size, cantor_interval_count(space, k))

# %%
est = dimension_estimate(prof)
print("least-squares slope", est.slope)
print("ln2/ln3           ", math.log(2) / math.log(3))
print("per-point         ", [round(s, 12) for s in est.per_point])
