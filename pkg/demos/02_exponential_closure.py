"""Shooting for a smooth closed curve under exp(-r).

For the exponential law the lambda = 0 curve spirals, while a very small
positive lambda bends it back so that it closes up smoothly.  The search
runs in log(lambda) and brackets the sign change of the closure defect.
The resulting region is then compared with the centred ball of equal
measure.
"""

# %%
import math

from radiso import shooting
from radiso.analysis import ball_comparison, classify, region_measure, region_perimeter
from radiso.emit import svg_curve, write_atomic

res = shooting.find_lambda_smooth(1.0, 0.5)
print(f"lambda* = {res.lam:.6e} after {res.iterations} iterations, residual {res.residual:.1e}")
print("class:", classify(res.curve).tag)

# %% measure, perimeter and the ball comparison
m = region_measure(res.curve)
p = region_perimeter(res.curve)
print(f"measure {m:.6f}, perimeter {p:.6f}, perimeter / ball perimeter = {ball_comparison(res.curve):.6f}")

# %% the closing condition fixes lambda sharply: nearby values overshoot or undershoot
for scale in (0.5, 1.0, 2.0):
    defect = shooting.closure_defect(res.curve.law, 0.5, scale * res.lam)
    print(f"lambda = {scale:>3} * lambda*: closure defect {defect}")

# %% a picture for inspection
write_atomic("exponential_closure.svg", svg_curve(res.curve))
print("wrote exponential_closure.svg; rotation / pi =", res.curve.rotation / math.pi)
