"""A circular orbit at a resonance does not stay circular.

Start on a circle at the 3:1 commensurability and, for comparison,
at ratio 5/2, between the 2:1 and 3:1 zones.  The osculating eccentricity of the
resonant orbit climbs past 0.01; the control stays at the few-1e-3 level
of the ordinary short-period forcing.

Run: python demos/04_forced_eccentricity.py   (about 20 s)
"""
import numpy as np

from rtbp_hill import SystemConfig
from rtbp_hill.rtbp import circular_state, integrate
from rtbp_hill.zones import center_semimajor_axis

cfg = SystemConfig.normalized(1e-3)
T = cfg.perturber_period

for label, ratio in (("3:1", 3.0), ("control 5:2", 2.5)):
    traj = integrate(cfg, circular_state(cfg, center_semimajor_axis(cfg, ratio)), 500 * T,
                     tol=1e-11, samples=20001)
    k = np.argmax(traj.e_osc > 0.01)
    when = f"e > 0.01 after {traj.t[k] / T:.0f} periods" if traj.e_osc[k] > 0.01 else "never"
    print(f"{label:12s} max e = {traj.e_osc.max():.4f}  ({when}); "
          f"Jacobi drift {traj.jacobi_drift:.1e}")
