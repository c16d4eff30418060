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
# # The golden-mean shift and its Perron measure
#
# Words over {0, 1} with no "11". Two words at depth L are 2^{-k} apart when
# they first differ at index k. A ball is a cylinder, which is a set of words
# sharing a prefix. An optimal separated set picks one word per cylinder.
# Its cylinder frequencies then approach λ^{-n} e_i, where λ is the golden
# ratio and e is the Perron eigenvector.

# %%
import math

from epscx.experiments import GOLDEN_MEAN
from epscx.solvers import max_separated_exact
from epscx.symbolic import DistanceSpec, SymbolicSpace, cylinder_measure, enumerate_words, perron, realize_space

# %%
pd = perron(GOLDEN_MEAN)
print("lambda", pd.lam, "golden ratio", (1 + math.sqrt(5)) / 2)
print("e", pd.e)
print("admissible word counts", [len(enumerate_words(2, GOLDEN_MEAN, L)) for L in range(1, 9)])

# %% [markdown]
# Depth 12 gives 377 words. At the finest scale every word is its own
# ball, so the witness holds every point.

# %%
L = 12
sym = SymbolicSpace(2, L, DistanceSpec.geometric(0.5, L), GOLDEN_MEAN)
space = realize_space(sym)
res = max_separated_exact(space, 0.5 ** (L - 1))
words = space.metadata["words"]
for n in (1, 2, 3):
    for w in enumerate_words(2, GOLDEN_MEAN, n):
        f = sum(1 for i in res.witness if words[i][:n] == w) / res.size
        print(n, w, f"{f:.6f}", f"{cylinder_measure(pd, w, GOLDEN_MEAN):.6f}")
