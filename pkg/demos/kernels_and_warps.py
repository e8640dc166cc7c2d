"""
Parseval kernel systems and warping
===================================

Build the two prototype families, check that their squared kernels sum to
one, then bend a UMT system with a monotone warp and check again.
Run with ``python3 demos/kernels_and_warps.py``; a figure is written to
``demos/out/`` when matplotlib is available.
"""

from pathlib import Path

import numpy as np

from graphspectra import bspline_system, frame_analysis, solve_gamma, umt_system, warp_system
from graphspectra.warp import monotone_cubic

# the crossfade parameter that gives every UMT band the same integral
gamma = solve_gamma()
print(f"gamma = {gamma:.4f}")

lam_max = 2.0
systems = {
    "bspline J=20 n=3": bspline_system(20, 3, lam_max),
    "umt J=7": umt_system(7, lam_max),
}

# a warp that stretches the low end of the spectrum
T = monotone_cubic(np.array([[0.0, 0.0], [0.2, 0.8], [1.0, 1.6], [2.0, 2.0]]))
systems["warped umt J=7"] = warp_system(systems["umt J=7"], T)

for name, s in systems.items():
    _, G, B1, B2 = frame_analysis(s)
    print(f"{name:18s} frame bounds [{B1:.12f}, {B2:.12f}]")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    lam = np.linspace(0.0, lam_max, 2001)
    fig, axes = plt.subplots(len(systems), 1, figsize=(7, 7), sharex=True)
    for ax, (name, s) in zip(axes, systems.items()):
        ax.plot(lam, s(lam).T, lw=1)
        ax.plot(lam, s.frame_function(lam), "k--", lw=1)
        ax.set_title(name)
    axes[-1].set_xlabel("lambda")
    out = Path(__file__).parent / "out"
    out.mkdir(exist_ok=True)
    fig.tight_layout()
    fig.savefig(out / "kernels_and_warps.png", dpi=120)
    print(f"figure: {out / 'kernels_and_warps.png'}")
