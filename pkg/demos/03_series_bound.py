"""
Termwise series bound for beta < 1
==================================

Expanding the exponential and applying the Bliss inequality to each power
gives an explicit upper bound on sup I_beta.  The terms behave like beta^k,
so the bound is finite for beta < 1.
"""

# %%
import math

import numpy as np

from blissmoser import i_beta_spec, moser_w, random_monotone, eval_functional, series_bound
from blissmoser.series import divergence_witness, series_term, term_ratio

# %%
for beta in (0.3, 0.6, 0.9, 0.99):
    sb = series_bound(2, beta)
    print(f"beta={beta}: bound {sb.value:.10f} after {sb.terms_used} terms, tail <= {sb.tail_bound:.1e}")

# %% [markdown]
# Consecutive terms approach beta from below.

# %%
print(term_ratio(2, 0.9, np.array([1e1, 1e2, 1e3, 1e4])))

# %% [markdown]
# The bound is far from tight: random members of E_2 and Moser functions
# sit well below it.

# %%
best = max(eval_functional(random_monotone(s, 12, 2, geometric=True), i_beta_spec(0.9), 2).value
           for s in range(200))
print("random max", best, " w_1e3", eval_functional(moser_w(1e3, 2), i_beta_spec(0.9), 2).value)

# %% [markdown]
# At beta = 1 the terms decay like e^2 / (sqrt(2 pi) k^{3/2}), which is summable.
# The bound stays finite even though the termwise argument is stated for
# beta < 1 only.

# %%
k = np.array([1e2, 1e3, 1e4, 1e5])
print(series_term(2, 1.0, k) * k ** 1.5 * math.sqrt(2 * math.pi) / math.e ** 2)
ps = divergence_witness(2, 1.0, 100_000)
print(ps[[99, 999, 9999, 99999]])

# %% [markdown]
# Above 1 the terms grow geometrically.

# %%
print(divergence_witness(2, 1.1, 200)[[9, 49, 99, 199]])
