"""
Truncated trace norms over growing boxes
========================================

The plain symbol <x>^r <xi>^s is integrable when r, s < -1 (n = 1).
Growing the box at a fixed spacing, the truncated trace norm settles for
r = s = -2 and doubles with every doubling of the box for r = s = 0.
"""
from weylab.classes import ClassSpec
from weylab.verify import plain_trend

Ls = (4.0, 8.0, 16.0)
for r in (-2, 0):
    spec = ClassSpec(r, r, (1, 0), (0, 0))
    for t in (0.5, 0.0):
        vals = plain_trend(spec, t, 1.0, Ls, h=0.125)
        print(f"r = s = {r:2d}, t = {t}: " + ", ".join(f"L={L:g}: {v:.4f}" for L, v in zip(Ls, vals)))

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots()
    for r in (-2, 0):
        ax.loglog(Ls, plain_trend(ClassSpec(r, r, (1, 0), (0, 0)), 0.5, 1.0, Ls, h=0.125), "o-", label=f"r=s={r}")
    ax.set_xlabel("box half-width L")
    ax.set_ylabel("truncated s_1")
    ax.legend()
    fig.savefig("trend.png", dpi=120)
    print("wrote trend.png")
