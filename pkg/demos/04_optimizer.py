"""
Searching E_N from below
========================

Two lower estimates for sup over E_N: the broken-line family, and projected
gradient ascent on a grid that is geometric toward the origin.
"""

# %%
import numpy as np

from blissmoser import (geometric_grid, i_beta_spec, j_gamma_spec, max_ratio, maximize_gridfn,
                        scan_broken_line, series_bound)

x = geometric_grid(64, 1e-9)

# %% [markdown]
# Subcritical beta: the ascent improves on the best broken line and stays
# under the series bound.

# %%
W = i_beta_spec(0.9)
scan = scan_broken_line(W, 2, x[1:])
rep = maximize_gridfn(W, 2, 64)
print(scan.best_a, scan.best_value)
print(rep.status, rep.iterations, rep.best_value, "<=", series_bound(2, 0.9).value)
print("trace", np.round(rep.trace[:6], 5))

# %% [markdown]
# The maximizer found is not a broken line.  Its slopes spread over several
# grid cells.

# %%
g = rep.best_fn.slopes
print(np.round(g[g > 1e-3 * g.max()], 3))

# %% [markdown]
# Supercritical gamma: the ascent piles all energy into the finest cell.  Continuing
# the broken-line family below the grid shows increments that do not shrink,
# which is what gets flagged.

# %%
rep = maximize_gridfn(j_gamma_spec(1.5), 2, 64)
print(rep.status, max_ratio(rep.best_fn, 2).a)
for a, v in rep.probe:
    print(f"{a:.3e} {v:.4f}")

# %% [markdown]
# At gamma = 1 the ascent keeps its mass away from the origin (a is a few
# hundredths), so no probe runs and nothing is flagged.

# %%
rep = maximize_gridfn(j_gamma_spec(1.0), 2, 64, iters=60)
print(rep.status, rep.best_value, max_ratio(rep.best_fn, 2).a)
