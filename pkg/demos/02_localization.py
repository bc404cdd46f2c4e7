"""
Localized eigenmodes
====================

High-index eigenmodes concentrate their energy close to the boundary of the
ball. The propagating function traces the tangential mode profile along the
radius; its mass inside r < a shrinks roughly like 1/l.
"""

# %%
import numpy as np

from ballres import modes as md
from ballres import spectrum as sp

ctx = sp.WaveContext(1.0)
seq = sp.compute_modes(ctx, "TE", 1, sp.asymptotic_zero("TE", 1, 45) + 1.0)

# %%
# Fraction of the profile carried by r < 1/2, times l. Roughly constant.
for l in (5, 10, 20, 40):
    mode = sp.find_mode(seq, l)
    print(f"l={l:2d}  ratio*l = {md.localization_ratio(mode, 0.5) * l:.3f}")

# %%
# The interior and exterior pieces of the propagating function join
# continuously at the boundary, which is just the resonance condition.
print("max continuity jump:", max(md.continuity_jump(m) for m in seq))

# %%
# Outside the ball the profile decays super-geometrically in the degree n.
lam = seq[0].lam
vals = np.array([abs(md.propagating_phi("TE", n, ctx, lam, 2.0)) for n in range(5, 16)])
print("consecutive ratios:", np.round(vals[1:] / vals[:-1], 4))
