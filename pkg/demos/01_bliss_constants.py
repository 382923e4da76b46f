"""
Bliss constants and their limit
===============================

C_{N,k} is the sharp constant in the Bliss inequality.  At k = 1 it is the
Hardy constant, and k * C_{N,k} tends to C_N = e^{H_{N-1}}/(N-1).
"""

# %%
import math

import numpy as np

from blissmoser import bliss_constant, bliss_limit, carleson_chang_threshold, hardy_constant

# %% [markdown]
# The k = 1 end of the family.

# %%
for N in (2, 3, 4, 8):
    print(N, bliss_constant(N, 1.0), hardy_constant(N))

# %% [markdown]
# The gap |k C_{N,k} - C_N| shrinks by roughly a factor of ten per decade of k.

# %%
ks = 10.0 ** np.arange(1, 9)
for N in (2, 3, 4):
    lim = bliss_limit(N)
    gaps = [abs(k * bliss_constant(N, k) - lim) for k in ks]
    print(f"N={N} C_N={lim:.12f}", " ".join(f"{g:.1e}" for g in gaps))

# %% [markdown]
# The same exponential of a harmonic number shows up in the energy
# threshold 1 + e^{H_{N-1}}.

# %%
for N in range(2, 7):
    print(N, carleson_chang_threshold(N), 1 + (N - 1) * bliss_limit(N))
print("e + 1 =", math.e + 1)
