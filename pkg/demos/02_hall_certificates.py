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
# # Matchings between optimal sets
#
# Any two maximum ε-separated sets can be paired off so that matched points
# are closer than ε. An optimal ε-net injects into any other ε-net with
# matched distances below 2ε. Both maps come from a bipartite matching, and
# a failed matching carries a Hall violator: a left subset with fewer
# neighbours than members.

# %%
import numpy as np

from epscx import build_from_matrix, max_separated_exact, min_net_exact
from epscx.corpus import random_cloud
from epscx.matching import HallFailure, kx_partition, net_injection, optimal_separated_bijection

# %%
space = random_cloud(np.random.default_rng(3), 18, 2)
eps = 0.3
reverse = list(range(space.n))[::-1]
a = max_separated_exact(space, eps).witness
b = max_separated_exact(space, eps, order=reverse).witness
alpha = optimal_separated_bijection(space, eps, a, b)
print("separated sets", a, b)
print("largest matched distance", max(space.dist(x, y) for x, y in alpha.items()))

# %%
net = min_net_exact(space, eps).witness
beta = net_injection(space, eps, net, a)
print("net", net, "->", [beta[x] for x in net])
print("largest matched distance", max(space.dist(x, y) for x, y in beta.items()), "< 2 eps =", 2 * eps)

# %% [markdown]
# ## Partitioning a separated set by a net
#
# Each point x of the optimal net gets a cell K_x of separated points inside
# its open ball. Every cell is nonempty and the cells partition the set.

# %%
part = kx_partition(space, eps, net, a)
print(part.cells, part.problems(space, a))

# %% [markdown]
# On random spaces the cells always exist. The 9-point space below is
# hand-built and shows they can fail at the strict radius. Both sets are
# optimal at ε = 2, but the net points {0, 2} have only one separated point
# within distance < 2.

# %%
gap = build_from_matrix([
    [0, 2.5, 1, 2, 2, 2, 1.5, 1.5, 2],
    [2.5, 0, 2.5, 2, 2, 1.5, 1.5, 2, 2.5],
    [1, 2.5, 0, 2.5, 2.5, 2, 2, 1.5, 1],
    [2, 2, 2.5, 0, 2.5, 1.5, 2, 3, 1.5],
    [2, 2, 2.5, 2.5, 0, 1, 1, 2, 2],
    [2, 1.5, 2, 1.5, 1, 0, 2, 3, 2.5],
    [1.5, 1.5, 2, 2, 1, 2, 0, 2.5, 2],
    [1.5, 2, 1.5, 3, 2, 3, 2.5, 0, 2.5],
    [2, 2.5, 1, 1.5, 2, 2.5, 2, 2.5, 0],
])
print(min_net_exact(gap, 2).size, max_separated_exact(gap, 2).size)
try:
    kx_partition(gap, 2, (0, 2, 5), (0, 1, 3, 4))
except HallFailure as exc:
    print("Hall violator:", exc.result.hall_violator)
