"""
Functionals along the infinitesimal Moser sequence
==================================================

w_j rises with slope j^{1/N} on [0, 1/j] and is flat afterwards.  It has
energy 1 and sup norm j^{-(N-1)/N}, so it goes to 0 uniformly, yet the
functionals do not all forget it.
"""

# %%
import math

from blissmoser import i_beta_spec, j1h_spec, j_gamma_spec, sweep
from blissmoser.sequences import geometric_schedule

js = geometric_schedule(1e2, 1e8, 10.0)

# %% [markdown]
# Subcritical gamma decays toward J(0) = 1, but only like (log j)^{gamma-1}.
# At j = 1e8 the value is still above 2.

# %%
print(sweep(j_gamma_spec(0.5), 2, js).to_csv())

# %% [markdown]
# At gamma = 1 the values settle near 6, well above e + 1: no convergence to J(0).

# %%
t = sweep(j_gamma_spec(1.0), 2, js)
print(t.to_csv())
print("e + 1 =", math.e + 1)

# %% [markdown]
# Past gamma = 1 the growth follows e (log ej)^{gamma-1} up to a constant factor.

# %%
t = sweep(j_gamma_spec(1.5), 2, js)
for r in t.rows:
    print(f"{r.j:8.0e} {r.value:10.5f} {r.value / r.model:7.4f}")

# %% [markdown]
# A triple-log perturbation of the critical weight is already enough to diverge.

# %%
crit = sweep(j_gamma_spec(1.0), 2, js).values
pert = sweep(j1h_spec(), 2, js).values
for j, a, b in zip(js, crit, pert):
    print(f"{j:8.0e} {a:9.5f} {b:9.5f} {b - a:8.4f}")

# %% [markdown]
# Without the log log term, beta = 1 is compact along w_j: I_1(w_j) - 1
# roughly halves each time j is squared.

# %%
i1 = sweep(i_beta_spec(1.0), 2, [1e2, 1e4, 1e8]).values
print(i1, (i1[1:] - 1) / (i1[:-1] - 1))
