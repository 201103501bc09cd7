"""Scan the frequency ratio and mark where circular orbits are unstable.

At m/M = 0.1 the low-order zones are wide enough to see on a coarse
grid.  Expect clusters at 3, 2, 5/3 and 3/2, but nothing at 4, 5, 6 or
5/2: those ratios are not of the form n/(n-2).

Run: python demos/03_floquet_scan.py   (about 15 s)
"""
import numpy as np

from rtbp_hill import SystemConfig
from rtbp_hill.floquet import stability_scan, unstable_clusters, zone_boundaries

cfg = SystemConfig.normalized(0.1)
grid = np.round(np.arange(1.40, 6.30, 0.005), 6)
points = stability_scan(cfg, grid, workers=4)
for lo, hi in unstable_clusters(points):
    print(f"unstable for {lo:.3f} <= omega/omega_s <= {hi:.3f}")

# Zone edges by bisection, at a Jupiter-like mass ratio.
weak = SystemConfig.normalized(1e-3)
for n in (3, 4):
    lo, hi = zone_boundaries(weak, n)
    print(f"n={n}: [{lo:.7f}, {hi:.7f}]")
