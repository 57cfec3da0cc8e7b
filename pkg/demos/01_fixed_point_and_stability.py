"""
Fixed point and local stability
================================

Where does the interior equilibrium sit, and when does it lose stability?
"""

# %%
import numpy as np

from ideawaves import Params, fixed_point, flow
from ideawaves.stability import (
    classify_region,
    eigenvalues_at_fixed_point,
    hopf_alpha,
    stability_map,
)

beta, xi = 0.5, 0.4

# %% [markdown]
# The equilibrium has a closed form. Plugging it back into the vector field
# gives a residual at round-off level.

# %%
p = Params(beta, xi, alpha=1.75, delta=1.75)
fp = fixed_point(p)
print(fp.state, "R* =", fp.state.r)
print("residual:", np.abs(flow(fp.state, p)).max())

# %% [markdown]
# Five reference points in the (alpha, delta) plane, with the leading
# eigenvalue alongside the region label.

# %%
for a, d in [(0.65, 0.6), (0.95, 0.6), (0.45, 3.0), (1.5, 2.5), (1.75, 1.75)]:
    q = Params(beta, xi, a, d)
    lam = eigenvalues_at_fixed_point(q).max_real
    print(f"alpha={a:<5} delta={d:<5} {classify_region(q).value:<14} max Re = {lam:+.4f}")

# %% [markdown]
# On the diagonal alpha = delta the crossing has a closed form.

# %%
h = hopf_alpha(beta, xi)
print("alpha_H =", h.alpha, "condition beta > 11 xi / 25:", h.condition_holds)

# %%
smap = stability_map(beta, xi, (0.0, 3.0), (0.0, 3.0), 60)
labels = np.array([[lab.value[0] for lab in row] for row in smap.labels])
# rows are alpha, columns delta; u = unstable, s = one of the stable regions
for row in labels[::6]:
    print("".join(row[::2]))
