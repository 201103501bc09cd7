"""When neighbouring zones touch.

Zone n and zone n+1 overlap once the width term reaches the spacing of
their centers.  Eccentricity moves both quantities the wrong way, so
overlap sets in at lower order for eccentric orbits.

Run: python demos/05_overlap.py
"""
import numpy as np

from rtbp_hill import SystemConfig
from rtbp_hill.zones import critical_order, critical_order_raw, eccentricity_scan, overlap_margin

for mu in (1e-4, 1e-3, 1e-2, 0.1):
    cfg = SystemConfig.normalized(mu)
    print(f"m/M={mu:<7g} n_raw={critical_order_raw(cfg, 0.1):7.2f}  "
          f"n_critical={critical_order(cfg, 0.1)}")

cfg = SystemConfig.normalized(0.1)
print("\n e     width     gap       margin")
for e, w, g, m in eccentricity_scan(cfg, 13, np.linspace(0, 0.5, 6), 0.1):
    print(f"{e:.1f}  {w:.5f}  {g:.5f}  {m:+.5f}")

# Smallest overlapping order at each eccentricity
for e in (0.0, 0.3, 0.5, 0.7):
    n = 3
    while not overlap_margin(cfg, n, e, 0.1).overlapped:
        n += 1
    print(f"e={e}: first overlapping zone n={n}")
