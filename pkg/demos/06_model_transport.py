"""The 1-D model measure dx/cos(Ax) and monotone transport.

Symmetric intervals of nu_A-measure t have boundary weight 2 cosh(At/2).
Any even target exp(W) with W'' exp(-2W) >= A^2 is reached from nu_A by an
increasing map with slope at most 1, which transfers the profile bound.
"""

# %%
import math

import numpy as np

from radiso import logconvex as lc

m = lc.ModelMeasure1D(1.0)
for t in (0.0, 1.0, 5.0):
    print(f"t={t}: interval weight {m.interval_profile(t):.12f}  2 cosh(t/2) = {lc.model_profile_1d(1.0, t):.12f}")

# %% transport nu_1 onto nu_2: a contraction
nu2 = lambda x: -np.log(np.cos(2.0 * np.asarray(x, dtype=float)))
tm = lc.monotone_transport_1d(1.0, nu2, target_half_width=math.pi / 4)
print(f"Lipschitz estimate {tm.lipschitz_estimate:.8f}, pushforward residual {tm.pushforward_residual:.1e}")
print("T(0.5) =", float(np.interp(0.5, tm.x, tm.T)))
