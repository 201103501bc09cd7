"""Parametric instability of resonant motion in the planar circular restricted three-body problem."""

__version__ = "0.1.0"

from .kernel import (  # noqa: E402
    ProbeOrbit,
    SystemConfig,
    UnitSystem,
    angular_momentum,
    legendre_p,
    mean_radius,
    mutual_distance,
    perturbing_potential,
)
from .hillde import (  # noqa: E402
    ForcingSpec,
    HillCoefficients,
    base_frequency_sq,
    forcing,
    fourier_b,
    hill_amplitudes,
    hill_coefficients,
    omega_sq_exact,
    omega_sq_series,
    omega_sq_zero_order,
)
from .zones import (  # noqa: E402
    InstabilityZone,
    OverlapReport,
    Resonance,
    center_semimajor_axis,
    critical_order,
    eccentricity_scan,
    overlap_margin,
    zone_center,
    zone_width,
)
from .floquet import (  # noqa: E402
    MonodromyResult,
    monodromy,
    stability_scan,
    tongue_boundaries,
    zone_boundaries,
)
from .rtbp import (  # noqa: E402
    DivergenceResult,
    Trajectory,
    TrajectoryState,
    divergence,
    integrate,
)
