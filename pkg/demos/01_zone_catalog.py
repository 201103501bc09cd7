"""Where the instability zones sit, and how wide they are.

Run: python demos/01_zone_catalog.py
"""
from rtbp_hill import SystemConfig
from rtbp_hill.cli import TABLE1, TABLE1_R
from rtbp_hill.zones import Resonance, center_semimajor_axis, instability_zone

# A Jupiter-like perturber at r = 5.2025 with mass ratio 1e-3.
cfg = SystemConfig.physical(1.0, 1.0, 1e-3, TABLE1_R)

print("Reference commensurability distances")
for k, label, ratio, dist, _, _ in TABLE1:
    a = center_semimajor_axis(cfg, ratio)
    print(f"  k={k}  {label:>4}  a={a:.6f}  reference={dist:.6f}")

# The zone family n/(n-2), in normalized units this time.
cfg = SystemConfig.normalized(1e-3)
print("\n  n  resonance  ratio     a        half-width in a")
for n in range(3, 11):
    z = instability_zone(cfg, n)
    print(f"{n:3d}  {str(Resonance.from_order(n)):>9}  {z.center_ratio:.4f}  "
          f"{z.center_a:.5f}  {z.width_a:.3e}")
