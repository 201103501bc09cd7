"""Configuration, orbital geometry and special-function primitives.

Everything here is a pure function of its inputs.  The default unit system
is normalized: ``gamma = M = r = 1`` so that the perturber mean motion is
``sqrt(1 + m)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SystemConfig",
    "ProbeOrbit",
    "UnitSystem",
    "legendre_p",
    "legendre_table",
    "mutual_distance",
    "perturbing_potential",
    "potential_truncation_bound",
    "mean_radius",
    "angular_momentum",
    "series_order",
    "DEFAULT_PMAX",
]

DEFAULT_PMAX = 16


@dataclass(frozen=True)
class UnitSystem:
    """Unit convention tag: ``"normalized"`` or ``"physical"``."""

    convention: str = "normalized"

    def __post_init__(self):
        if self.convention not in ("normalized", "physical"):
            raise ValueError(f"unknown unit convention {self.convention!r}")


@dataclass(frozen=True)
class SystemConfig:
    """Fixed parameters of the planar circular restricted problem.

    Parameters
    ----------
    gamma : float
        Gravitational constant.
    M : float
        Primary mass.
    m : float
        Perturber mass (``0 <= m < M``).
    r : float
        Radius of the perturber's circular orbit about the primary.
    units : UnitSystem
        Normalized configurations must have ``gamma = M = r = 1``.

    The perturber mean motion is always the two-body value
    ``sqrt(gamma * (M + m) / r**3)``.
    """

    gamma: float = 1.0
    M: float = 1.0
    m: float = 1e-3
    r: float = 1.0
    units: UnitSystem = field(default_factory=UnitSystem)

    def __post_init__(self):
        if not self.gamma > 0:
            raise ValueError("gamma must be positive")
        if not self.M > 0:
            raise ValueError("M must be positive")
        if not 0 <= self.m < self.M:
            raise ValueError("m must satisfy 0 <= m < M")
        if not self.r > 0:
            raise ValueError("r must be positive")
        if self.units.convention == "normalized" and (
            self.gamma != 1.0 or self.M != 1.0 or self.r != 1.0
        ):
            raise ValueError("normalized units require gamma = M = r = 1")

    @classmethod
    def normalized(cls, mass_ratio: float = 1e-3) -> "SystemConfig":
        return cls(1.0, 1.0, mass_ratio, 1.0, UnitSystem("normalized"))

    @classmethod
    def physical(cls, gamma, M, m, r) -> "SystemConfig":
        return cls(gamma, M, m, r, UnitSystem("physical"))

    @property
    def omega_s(self) -> float:
        return math.sqrt(self.gamma * (self.M + self.m) / self.r**3)

    @property
    def mass_ratio(self) -> float:
        return self.m / self.M

    @property
    def perturber_period(self) -> float:
        return 2 * math.pi / self.omega_s


@dataclass(frozen=True)
class ProbeOrbit:
    """Osculating elements of the massless particle."""

    a: float
    e: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("semimajor axis a must be positive")
        if not 0 <= self.e < 1:
            raise ValueError("eccentricity e must lie in [0, 1)")


def legendre_p(p: int, x: float) -> float:
    """Legendre polynomial ``P_p(x)`` by the Bonnet recurrence.

    ``(k + 1) P_{k+1} = (2k + 1) x P_k - k P_{k-1}``
    """
    if int(p) != p or p < 0:
        raise ValueError(f"degree must be a non-negative integer, got {p!r}")
    if abs(x) > 1:
        raise ValueError(f"argument must lie in [-1, 1], got {x!r}")
    p0, p1 = 1.0, float(x)
    if p == 0:
        return p0
    for k in range(1, int(p)):
        p0, p1 = p1, ((2 * k + 1) * x * p1 - k * p0) / (k + 1)
    return p1


def legendre_table(pmax: int, x) -> np.ndarray:
    """All of ``P_0(x) .. P_pmax(x)`` for array ``x``; shape ``(pmax+1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    if pmax < 0:
        raise ValueError("pmax must be non-negative")
    if np.any(np.abs(x) > 1):
        raise ValueError("argument must lie in [-1, 1]")
    out = np.empty((pmax + 1,) + x.shape)
    out[0] = 1.0
    if pmax >= 1:
        out[1] = x
    for k in range(1, pmax):
        out[k + 1] = ((2 * k + 1) * x * out[k] - k * out[k - 1]) / (k + 1)
    return out


def mutual_distance(R, r, S):
    """Distance between bodies at radii ``R`` and ``r`` separated by angle ``S``."""
    if np.any(np.asarray(R) <= 0) or np.any(np.asarray(r) <= 0):
        raise ValueError("radii must be positive")
    d2 = R * R + r * r - 2 * R * r * np.cos(S)
    # rounding can push d2 a hair below zero for coincident bodies
    return np.sqrt(np.maximum(d2, 0.0))


def perturbing_potential(cfg: SystemConfig, R: float, S, pmax: int = DEFAULT_PMAX):
    """Truncated Legendre expansion of the potential for an outer perturber.

    Returns ``-gamma*M/R - (gamma*m/r) * sum_{p=2}^{pmax} y**p P_p(cos S)``
    with ``y = R / r``.  The sign convention follows the series form, where
    the potential is negative; the ``p = 0, 1`` terms are dropped (the
    ``p = 1`` term cancels against the indirect term).
    """
    if pmax < 2:
        raise ValueError("pmax must be at least 2")
    if not 0 < R < cfg.r:
        raise ValueError("expansion requires 0 < R < r (outer perturber)")
    y = R / cfg.r
    P = legendre_table(pmax, np.cos(S))
    powers = y ** np.arange(pmax + 1)
    series = np.tensordot(powers[2:], P[2:], axes=1)
    return -cfg.gamma * cfg.M / R - cfg.gamma * cfg.m / cfg.r * series


def potential_truncation_bound(cfg: SystemConfig, R: float, pmax: int) -> float:
    """Upper bound on the tail dropped by :func:`perturbing_potential`."""
    y = R / cfg.r
    return cfg.gamma * cfg.m / cfg.r * y ** (pmax + 1) / (1 - y)


def series_order(y: float, rel_tol: float = 1e-13, derivative: int = 2) -> int:
    """Smallest truncation order at which the tail of ``sum p**d y**p`` is negligible.

    Used to pick ``pmax`` for the second-derivative series, whose terms
    decay like ``p**2 y**p`` rather than ``y**p``.
    """
    if not 0 <= y < 1:
        raise ValueError("y must lie in [0, 1)")
    if y == 0:
        return 2
    p = 2
    while (p + 1) ** derivative * y ** (p - 1) / (1 - y) > rel_tol:
        p += 1
    return p


def mean_radius(orbit: ProbeOrbit) -> float:
    """Phase-averaged central distance ``a * sqrt(1 - e**2)``."""
    return orbit.a * math.sqrt(1 - orbit.e**2)


def angular_momentum(cfg: SystemConfig, orbit: ProbeOrbit) -> float:
    """Two-body specific angular momentum ``sqrt(gamma*M*a*(1 - e**2))``."""
    return math.sqrt(cfg.gamma * cfg.M * orbit.a * (1 - orbit.e**2))
