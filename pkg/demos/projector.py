"""
The Gaussian projector and the Hilbert-Schmidt identity
=======================================================

Quantize 2 exp(-|X|^2) with the Weyl rule, look at its singular values,
then compare s_2 with the L^2 norm of a few random symbols.
"""
import math

import numpy as np

from weylab import PhaseGrid, build_kernel, schatten_norm, singular_values
from weylab.families import random_symbol
from weylab.grids import lp_norm
from weylab.verify import gaussian_projector_symbol

grid = PhaseGrid(1, 8, 128)
a = gaussian_projector_symbol(grid)
spec = singular_values(build_kernel(a, 0.5))

# one singular value at 1, the rest at round-off
print("leading singular values:", np.round(spec.sigma[:4], 10))
for p in (1, 2, math.inf):
    print(f"s_{p} = {schatten_norm(spec, p):.8f}")

# s_2 is the L^2 norm of the symbol up to (2 pi)^{-1/2}
rng = np.random.default_rng(0)
small = PhaseGrid(1, 8, 64)
for i in range(5):
    b = random_symbol(small, rng)
    s2 = schatten_norm(singular_values(build_kernel(b, 0.5)), 2)
    print(f"symbol {i}: s_2 = {s2:.6f}, ||b||_2 / sqrt(2 pi) = {lp_norm(b, 2) / math.sqrt(2 * math.pi):.6f}")
