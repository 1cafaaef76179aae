"""Which kind of curve does each (alpha, a, lambda) produce?

A coarse table over the exponent alpha and the shooting parameters.  Heavier
tails (small alpha) make lambda = 0 curves turn by more than pi, which forces
self-intersection; light tails keep them simple and unbounded.
"""

# %%
from radiso.analysis import classify
from radiso.density import power_law
from radiso.errors import Divergent, DomainError, QuadratureError
from radiso.stationary import StationaryParams, solve_curve

rows = [(alpha, a, lam) for alpha in (1.0, 1.5, 2.0, 3.0) for a in (0.2, 0.5, 1.0) for lam in (-0.1, 0.0)]

# %%
print(f"{'alpha':>5} {'a':>4} {'lambda':>6}  class")
for alpha, a, lam in rows:
    try:
        tag = classify(solve_curve(StationaryParams(power_law(alpha), a, lam))).tag
    except (Divergent, DomainError, QuadratureError) as exc:
        tag = f"({type(exc).__name__})"
    print(f"{alpha:5} {a:4} {lam:6}  {tag}")
