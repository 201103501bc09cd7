"""The Fourier ladder of the time-dependent radial frequency.

For small y = R0/r the kernel is 2 P2(cos S), so b0 -> 1/2, b2 -> 3/2 and
every other coefficient vanishes; the deviations grow like y**2.

Run: python demos/02_hill_coefficients.py
"""
import numpy as np

from rtbp_hill import SystemConfig, ProbeOrbit
from rtbp_hill.hillde import fourier_b, hill_coefficients, omega_sq_exact_angle, omega_sq_series

cfg = SystemConfig.normalized(1e-3)

for y in (1e-3, 1e-2, 0.1, 0.5):
    b = fourier_b(cfg, ProbeOrbit(y), 16)
    print(f"y={y:<6} b0-1/2={b[0] - 0.5:+.3e}  b2-3/2={b[2] - 1.5:+.3e}  b3={b[3]:.3e}")

# The truncated series against the closed form at the 3:1 radius.
a = 3 ** (-2 / 3)
S = np.linspace(0, 2 * np.pi, 721)
exact = omega_sq_exact_angle(cfg, a, S)
for pmax in (2, 4, 8, 16):
    err = np.max(np.abs(omega_sq_series(cfg, ProbeOrbit(a), S, pmax) - exact) / exact)
    print(f"pmax={pmax:2d}  max relative error {err:.2e}")

c = hill_coefficients(cfg, ProbeOrbit(a), 12)
print("\nh_p at the 3:1 radius:", " ".join(f"{v:.3e}" for v in c.h[:6]))
