"""Half-planes under the Gaussian measure.

With u held constant at r0 the stationary curve is the straight line at
distance r0 from the origin, i.e. f(r) = arccos(r0 / r).  The enclosed
region is a half-plane, so its measure and weighted length are the 1-D
Gaussian tail and density at r0.
"""

# %%
import math

import numpy as np
from scipy.stats import norm

from radiso.analysis import region_measure, region_perimeter
from radiso.density import gaussian
from radiso.stationary import constant_u, integrate_f

law = gaussian()

# %% integrate f for a few distances and compare with the closed forms
for r0 in (0.25, 1.0, 2.0):
    curve = integrate_f(constant_u(r0, law))
    r = np.linspace(r0 * (1 + 1e-6), 10 * max(r0, 1), 500)
    err = np.max(np.abs(curve.f_at(r) - np.arccos(r0 / r)))
    print(f"r0={r0:4}: sup|f - arccos| = {err:.1e}   "
          f"measure {region_measure(curve):.10f} vs {norm.sf(r0):.10f}   "
          f"perimeter {region_perimeter(curve):.10f} vs {norm.pdf(r0):.10f}")

# %% the total turning of a straight line seen from the origin is pi/2
print("rotation / (pi/2) =", integrate_f(constant_u(1.0, law)).rotation / (math.pi / 2))
