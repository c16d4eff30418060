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
# # Averages over optimal sets
#
# I_ε(φ) is the mean of φ over an optimal separated set. Ĩ_ε(φ) is the
# same mean over an optimal net. Different optimal sets can give different
# values. The gap is bounded by the modulus of continuity r_φ(ε), or by
# r_φ(2ε) for nets. Local isometries move I_ε by at most the same amount.

# %%
import numpy as np

from epscx.corpus import random_metric
from epscx.measures import TestFunction, independence_gap, invariance_gap, mu_nu_comparison
from epscx.symbolic import DistanceSpec, SymbolicSpace, admissible_permutation_isometry, realize_space

rng = np.random.default_rng(5)
space = random_metric(rng, 11)
phi = TestFunction(rng.uniform(0, 1, space.n))
for eps in (0.3, 0.5):
    print(eps, independence_gap(space, eps, phi), independence_gap(space, eps, phi, "net"))
    print("   ", mu_nu_comparison(space, eps, phi))

# %% [markdown]
# On the golden-mean shift, g_α rewrites the first two symbols by a
# permutation that keeps the last one. It preserves every distance up to
# 1/4.

# %%
sym = SymbolicSpace(2, 8, DistanceSpec.geometric(0.5, 8), ((1, 1), (1, 0)))
shift = realize_space(sym)
tau = admissible_permutation_isometry(sym, 2, {(0, 0): (1, 0), (1, 0): (0, 0)})
psi = TestFunction(rng.uniform(0, 1, shift.n))
print("radius", tau.isometry_radius, invariance_gap(shift, tau.isometry_radius, tau, psi))
