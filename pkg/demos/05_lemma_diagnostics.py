"""
How close is a function to a Moser broken line?
===============================================

For v in E_N let 1 - delta be the largest value of v^N / s^{N-1}, attained
at a.  Small delta forces v to look like the broken line with kink at a.
"""

# %%
import numpy as np

from blissmoser import diagnostics, from_slopes, normalize
from blissmoser.suites import lemma_corpus

# %% [markdown]
# Jitter the slopes of a broken line and watch delta and the defect move together.

# %%
x = np.array([0.0, 2e-4, 6e-4, 1e-3, 0.1, 1.0])
g0 = np.where(x[1:] <= 1e-3, 1e-3 ** (-1 / 3), 0.0)
rng = np.random.default_rng(0)
for eps in (0.0, 1e-3, 1e-2, 1e-1, 0.5):
    f = normalize(from_slopes(x, g0 + eps * rng.random(len(g0))), 3)
    r = diagnostics(f, 3)
    print(f"eps={eps:<6} delta={r.delta:.3e} defect={r.defect:.3e} a={r.a:.3e}")

# %% [markdown]
# Over a random corpus the largest margin of each bound stays at rounding level.

# %%
for N in (2, 3, 4):
    reps = [diagnostics(f, N) for f in lemma_corpus(N, 300)]
    worst = [max(getattr(r, name) for r in reps) for name in
             ("lemma31_margin", "lemma32_margin", "lemma33_margin")]
    small = [r.lemma34_margin for r in reps if r.lemma34_margin is not None]
    print(N, ["%.1e" % w for w in worst], "%.1e" % max(small), len(small))
