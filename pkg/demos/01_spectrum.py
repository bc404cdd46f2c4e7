"""
Resonances of a dielectric ball
===============================

Eigenvalues of the volume integral operator on the unit ball are read off
from the complex zeros of two scalar functions, one per mode family. This
demo scans for them and compares with the closed-form asymptotic law.
"""

# %%
# The background wavenumber lives in a small context object.
import numpy as np

from ballres import spectrum as sp

ctx = sp.WaveContext(1.0)

# %%
# TM modes of degree 1. Each zero z gives an eigenvalue lambda through
# k_lambda = z, that is lambda = k^2 / (z^2 - k^2).
tm1 = sp.compute_modes(ctx, "TM", 1, 18.0)
for m in tm1:
    print(f"TM1 l={m.l_asym:2d}  z={m.z.real:9.4f}{m.z.imag:+.2e}j  lambda={m.lam.real:+.5f}{m.lam.imag:+.2e}j")

# %%
# Zeros approach the asymptotic locations. The gap shrinks like 1/l and the
# eigenvalue error like l^-4.
deep = sp.compute_modes(ctx, "TM", 1, sp.asymptotic_zero("TM", 1, 60) + 1.0)
sel = [m for m in deep if 5 <= m.l_asym <= 60]
ls = np.log([m.l_asym for m in sel])
print("slope |z - z_asym|:", np.polyfit(ls, np.log([abs(m.z - m.z_asym) for m in sel]), 1)[0])
print("slope |lambda - lambda_asym|:", np.polyfit(ls, np.log([abs(m.lam - m.lam_asym) for m in sel]), 1)[0])

# %%
# Every eigenvalue sits in the closed upper half plane and |lambda| decays
# toward the accumulation point 0.
rep = sp.spectral_report(deep)
print(rep.count, "modes, half-plane violations:", len(rep.violations))
