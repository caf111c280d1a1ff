"""
Two sufficient decay conditions that do not contain each other
==============================================================

Scan the gap delta - rho along a direction and record where exactly one
of the two conditions on r admits a symbol.
"""
import numpy as np

from weylab import classes as cl
from weylab.verify import compare_thresholds, threshold_exhibit

taus = np.linspace(0.05, 1.0, 20)

# balanced gaps in one dimension: the first condition is the weaker one
for e in threshold_exhibit(1, 1.0, taus, [1.0])[:3]:
    print(f"n=1 tau={e['tau']:.2f}: first r < {e['first']:.3f}, second r < {e['second']:.3f} -> only {e['only']}")

# a gap in a single direction out of three: now the second one wins
for e in threshold_exhibit(3, 1.0, taus, [1.0, 0.0, 0.0])[:3]:
    print(f"n=3 tau={e['tau']:.2f}: first r < {e['first']:.3f}, second r < {e['second']:.3f} -> only {e['only']}")

print(f"kappa_1 = {cl.kappa(1, 1)}, kappa'_1 = {cl.kappa_prime(1, 1)}, n_1 = {cl.n_p(1, 1)}")

rep = compare_thresholds(cl.ClassSpec(-2.5, -2.5, (0.0, 0.0), (0.1, 0.1)), 1.0)
print(rep.to_json())
