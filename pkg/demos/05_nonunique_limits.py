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
# # Limits that depend on the ε-subsequence
#
# The space has two ultrametric halves, Ω01 and Ω23, at mutual distance 1.
# Scale sequences with long constant runs make the halves take turns
# dominating C_ε. The mass an optimal set puts on Ω23 shrinks along
# ε = 1/2, 1/4, … and grows along ε = 1/3, 1/5, …. So no single limiting
# measure exists.

# %%
from epscx.measures import EpsilonSchedule, estimate_measure
from epscx.symbolic import Example3Config, Example3Model, closed_form_C

cfg = Example3Config(2)
for e in sorted(cfg.E + cfg.E_prime, reverse=True):
    print(f"eps={str(e):<4}  C01={closed_form_C(cfg, '01', e):<6} C23={closed_form_C(cfg, '23', e)}")

# %% [markdown]
# The cylinder model computes witnesses class by class. It reaches depths 10
# and 15 without building a distance matrix.

# %%
model = Example3Model(cfg)
report = estimate_measure(model, EpsilonSchedule.tagged(E=cfg.E, E_prime=cfg.E_prime), model.cells, solver=model.solve)
print("Omega23 along E :", report.tag_sequence("Omega23", "E"))
print("Omega23 along E':", report.tag_sequence("Omega23", "E_prime"))
print("tag limits", report.tag_limits, "spread", round(report.spread, 3))
