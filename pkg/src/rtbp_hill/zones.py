"""Analytic catalog of parametric instability zones.

Zone ``n`` is where the ``n``-th synodic harmonic drives the radial
oscillation at twice its natural frequency.  For a circular probe this
happens at ``omega/omega_s = n/(n-2)``: 3, 2, 5/3, 3/2, 7/5, ...
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd
from typing import Sequence

from .hillde import E4_COEFF, fourier_b, hill_amplitudes
from .kernel import ProbeOrbit, SystemConfig, mean_radius, series_order

__all__ = [
    "Resonance",
    "InstabilityZone",
    "OverlapReport",
    "zone_center",
    "center_semimajor_axis",
    "zone_width",
    "width_in_semimajor_axis",
    "instability_zone",
    "overlap_margin",
    "critical_order",
    "critical_order_raw",
    "eccentricity_scan",
]

OVERLAP_C4 = 0.75
OVERLAP_C8 = 0.375


@dataclass(frozen=True)
class Resonance:
    """Mean-motion commensurability ``p:q`` (probe to perturber)."""

    p: int
    q: int

    def __post_init__(self):
        if not self.p > self.q >= 1:
            raise ValueError("need p > q >= 1")
        if gcd(self.p, self.q) != 1:
            raise ValueError(f"{self.p}:{self.q} is not in lowest terms")

    @classmethod
    def from_order(cls, n: int) -> "Resonance":
        """Commensurability of the zone of harmonic order ``n``, i.e. ``n:(n-2)`` reduced."""
        if n < 3:
            raise ValueError("zone order must be at least 3")
        g = gcd(n, n - 2)
        return cls(n // g, (n - 2) // g)

    @property
    def ratio(self) -> float:
        return self.p / self.q

    def __str__(self):
        return f"{self.p}:{self.q}"


@dataclass(frozen=True)
class InstabilityZone:
    n: int
    center_ratio: float
    center_a: float
    width_eps1: float
    width_eps2: float
    width_a: float
    e: float


@dataclass(frozen=True)
class OverlapReport:
    n: int
    gap: float
    width_term: float
    margin: float
    overlapped: bool


def zone_center(n: int, e: float = 0.0, alpha: float = 0.0, c_e: float = E4_COEFF) -> float:
    """Center ``omega/omega_s = n / (n - 2(1 - alpha/2) + c_e e**4)``."""
    if not 0 <= e < 1:
        raise ValueError("eccentricity must lie in [0, 1)")
    den = n - 2 * (1 - alpha / 2) + c_e * e**4
    if den <= 0:
        raise ValueError(f"zone order {n} has a non-positive denominator")
    return n / den


def center_semimajor_axis(cfg: SystemConfig, ratio: float) -> float:
    """Commensurability distance ``r * ratio**(-2/3)``."""
    if not ratio > 0:
        raise ValueError("ratio must be positive")
    return cfg.r * ratio ** (-2.0 / 3.0)


def zone_width(omega0: float, n: int, h_n: float) -> tuple[float, float]:
    """First- and second-order zone widths.

    ``eps1 = omega0 n h / (2 (n-2))`` and ``eps2 = omega0 n h**2 / (8 (n-2))``.
    """
    if n == 2:
        raise ValueError("n = 2 is a pole of the width formula")
    if h_n < 0:
        raise ValueError("h_n must be non-negative")
    eps1 = omega0 * n * h_n / (2 * (n - 2))
    return eps1, eps1 * h_n / 4


def width_in_semimajor_axis(eps1: float, omega0: float, a: float) -> float:
    """Kepler differential ``da = (2/3) (d omega / omega) a``."""
    return 2.0 / 3.0 * eps1 / omega0 * a


def instability_zone(cfg: SystemConfig, n: int, e: float = 0.0, *, alpha: float = 0.0,
                     c_e: float = E4_COEFF, pmax: int | None = None) -> InstabilityZone:
    """Center and widths of zone ``n`` with ``h_n`` computed at the zone center."""
    ratio = zone_center(n, e, alpha, c_e)
    a = center_semimajor_axis(cfg, ratio)
    orbit = ProbeOrbit(a, e)
    y = mean_radius(orbit) / cfg.r
    if pmax is None:
        pmax = max(n, series_order(y))
    b = fourier_b(cfg, orbit, pmax, n_quad=max(4096, 1 << (2 * pmax + 2).bit_length()))
    h_n = float(hill_amplitudes(cfg, orbit, b, c_e)[n])
    omega0 = math.sqrt(cfg.gamma * cfg.M / a**3 * (1 - c_e * e**4))
    eps1, eps2 = zone_width(omega0, n, abs(h_n))
    return InstabilityZone(n, ratio, a, eps1, eps2, width_in_semimajor_axis(eps1, omega0, a), e)


def overlap_margin(cfg: SystemConfig, n: int, e: float, b_n: float,
                   c4: float = OVERLAP_C4, c8: float = OVERLAP_C8) -> OverlapReport:
    """Compare the spacing of zones ``n`` and ``n+1`` with the zone width.

    ``gap`` is the distance between the centers ``n/(n - (2 - c4 e**4))`` and
    ``(n+1)/(n - (1 - c4 e**4))``; ``width_term`` is
    ``n (m/M) b_n / (2 (n-2) (1 - c8 e**4))``.  The zones overlap when the
    gap no longer exceeds the width.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    d_n = n - (2 - c4 * e**4)
    d_next = n - (1 - c4 * e**4)
    d_w = 2 * (n - 2) * (1 - c8 * e**4)
    if min(d_n, d_next, d_w) <= 0:
        raise ValueError("non-positive denominator in overlap condition")
    gap = n / d_n - (n + 1) / d_next
    width = n * cfg.mass_ratio * b_n / d_w
    margin = gap - width
    return OverlapReport(n, gap, width, margin, margin <= 0)


def critical_order_raw(cfg: SystemConfig, b: float) -> float:
    """Positive root ``(mb + sqrt((mb)**2 + 16 M m b)) / (2 m b)`` of the circular overlap condition."""
    if not cfg.m > 0:
        raise ValueError("m = 0: zones overlap only in the limit n -> infinity")
    if not b > 0:
        raise ValueError("b = 0: zones overlap only in the limit n -> infinity")
    mb = cfg.m * b
    return (mb + math.sqrt(mb * mb + 16 * cfg.M * mb)) / (2 * mb)


def critical_order(cfg: SystemConfig, b: float) -> int:
    """Lowest zone order from which neighbouring circular-orbit zones overlap."""
    return max(3, math.ceil(critical_order_raw(cfg, b)))


def eccentricity_scan(cfg: SystemConfig, n: int, e_grid: Sequence[float], b_n: float,
                      c4: float = OVERLAP_C4, c8: float = OVERLAP_C8) -> list[tuple]:
    """Rows ``(e, width, gap, margin)`` for zone ``n`` across eccentricities.

    ``b_n`` is held fixed, so eccentricity acts only through the ``e**4``
    terms of the overlap condition.
    """
    if n < 3:
        raise ValueError("n must be at least 3")
    rows = []
    for e in e_grid:
        if not 0 <= e <= 0.9:
            raise ValueError("eccentricities must lie in [0, 0.9]")
        rep = overlap_margin(cfg, n, e, b_n, c4, c8)
        rows.append((float(e), rep.width_term, rep.gap, rep.margin))
    return rows
