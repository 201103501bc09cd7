"""The Hill equation for radial displacement from the reference orbit.

Linearizing the radial equation about ``R = R0`` gives

    x'' + omega**2(t) x = f(t),
    omega**2 = omega0**2 * (1 + sum_p h_p cos(p S)),

where ``S = (omega - omega_s) t + phi`` is the synodic angle.  This module
builds ``omega**2`` three ways (exact pointwise, zero order in ``y = R0/r``,
Legendre series) and the Fourier ladder ``b_p`` / ``h_p`` consumed by the
Floquet analysis.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernel import (
    DEFAULT_PMAX,
    ProbeOrbit,
    SystemConfig,
    angular_momentum,
    legendre_table,
    mean_radius,
    mutual_distance,
)

__all__ = [
    "HillCoefficients",
    "ForcingSpec",
    "QuadratureError",
    "E4_COEFF",
    "synodic_rate",
    "omega_sq_exact",
    "omega_sq_exact_angle",
    "omega_sq_zero_order",
    "omega_sq_series",
    "legendre_kernel",
    "fourier_b",
    "base_frequency_sq",
    "elliptic_factor_exact",
    "hill_amplitudes",
    "hill_coefficients",
    "forcing",
]

E4_COEFF = 0.75
DEFAULT_NQUAD = 4096


class QuadratureError(ArithmeticError):
    """Fourier quadrature did not converge under grid refinement."""


@dataclass(frozen=True, eq=False)
class HillCoefficients:
    """Coefficients of ``x'' + omega0_sq (1 + sum h_p cos(p S)) x = 0``.

    Attributes
    ----------
    omega0_sq : float
        Base frequency squared.
    b : ndarray
        Dimensionless Fourier coefficients of the Legendre kernel, ``p = 0..pmax``.
    h : ndarray
        Relative amplitudes, same length as ``b``.
    drive_freq : float
        Synodic rate ``omega - omega_s``; harmonic ``p`` oscillates at ``p * drive_freq``.
    e_used : float
        Eccentricity the ladder was built with.
    phi : float
        Synodic phase at ``t = 0``.
    """

    omega0_sq: float
    b: np.ndarray
    h: np.ndarray
    drive_freq: float
    e_used: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not self.omega0_sq > 0:
            raise ValueError("omega0_sq must be positive")
        b = np.asarray(self.b, dtype=float)
        h = np.asarray(self.h, dtype=float)
        if b.shape != h.shape or b.ndim != 1:
            raise ValueError("b and h must be 1-d sequences of equal length")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "_p", np.arange(h.size, dtype=float))

    @classmethod
    def single_harmonic(cls, omega0: float, h: float, drive_freq: float):
        """Mathieu equation ``x'' + omega0**2 (1 + h cos(drive_freq t)) x = 0``."""
        return cls(omega0**2, np.array([0.0, 0.0]), np.array([0.0, h]), drive_freq)

    @property
    def omega0(self) -> float:
        return math.sqrt(self.omega0_sq)

    @property
    def period(self) -> float:
        """Common period of all harmonics, one full synodic period."""
        return 2 * math.pi / abs(self.drive_freq)

    def omega_sq(self, t):
        S = self.drive_freq * np.asarray(t, dtype=float)[..., None] + self.phi
        return self.omega0_sq * (1.0 + np.cos(self._p * S) @ self.h)


@dataclass(frozen=True, eq=False)
class ForcingSpec:
    """Inhomogeneous term ``f = constant + sum_p harmonics[p] cos(p S)``."""

    constant: float
    harmonics: np.ndarray

    def __call__(self, S):
        p = np.arange(len(self.harmonics))
        S = np.asarray(S, dtype=float)
        return self.constant + np.cos(S[..., None] * p) @ self.harmonics


def synodic_rate(cfg: SystemConfig, a: float) -> float:
    """``omega - omega_s`` for a probe with Kepler mean motion about the primary."""
    return math.sqrt(cfg.gamma * cfg.M / a**3) - cfg.omega_s


def omega_sq_exact_angle(cfg: SystemConfig, R0: float, S):
    """Pointwise ``omega**2`` at synodic angle ``S`` (closed form, no expansion).

    ``gamma*M/R0**3 - gamma*m/D**3 * (1 - 3 (R0 - r cos S)**2 / D**2)``
    with ``D`` the mutual distance.
    """
    if not 0 < R0 < cfg.r:
        raise ValueError("requires 0 < R0 < r")
    S = np.asarray(S, dtype=float)
    D = mutual_distance(R0, cfg.r, S)
    if np.any(D <= 1e-15 * cfg.r):
        raise ValueError("collision geometry: mutual distance vanishes")
    u = R0 - cfg.r * np.cos(S)
    return cfg.gamma * cfg.M / R0**3 - cfg.gamma * cfg.m / D**3 * (1 - 3 * u**2 / D**2)


def omega_sq_exact(cfg: SystemConfig, R0: float, t, phi: float = 0.0):
    """:func:`omega_sq_exact_angle` at ``S = synodic_rate * t + phi``."""
    S = synodic_rate(cfg, R0) * np.asarray(t, dtype=float) + phi
    return omega_sq_exact_angle(cfg, R0, S)


def omega_sq_zero_order(cfg: SystemConfig, R0: float, t, phi: float = 0.0):
    """Zero-order-in-``y`` frequency: constant part plus a single ``cos 2S`` term."""
    if not 0 < R0 < cfg.r:
        raise ValueError("requires 0 < R0 < r")
    S = synodic_rate(cfg, R0) * np.asarray(t, dtype=float) + phi
    k = cfg.gamma * cfg.m / cfg.r**3
    return cfg.gamma * cfg.M / R0**3 + 0.5 * k + 1.5 * k * np.cos(2 * S)


def legendre_kernel(y: float, S, pmax: int = DEFAULT_PMAX):
    """``W(S) = sum_{q=2}^{pmax} q (q-1) y**(q-2) P_q(cos S)``."""
    if pmax < 2:
        raise ValueError("pmax must be at least 2")
    q = np.arange(pmax + 1, dtype=float)
    weights = q * (q - 1) * np.concatenate(([0.0, 0.0], y ** q[:-2]))
    P = legendre_table(pmax, np.cos(np.asarray(S, dtype=float)))
    return np.tensordot(weights[2:], P[2:], axes=1)


def omega_sq_series(cfg: SystemConfig, orbit: ProbeOrbit, S, pmax: int = DEFAULT_PMAX,
                    c_e: float = E4_COEFF):
    """Legendre-series ``omega**2`` for an elliptic probe orbit.

    ``(gamma*M/a**3)(1 - c_e e**4) + (gamma*m/r**3) W(S)`` with ``y = R0bar / r``.
    """
    if pmax < 2:
        raise ValueError("pmax must be at least 2")
    R0 = mean_radius(orbit)
    if R0 >= cfg.r:
        raise ValueError("requires mean radius below the perturber radius")
    base = base_frequency_sq(cfg, orbit, c_e)
    return base + cfg.gamma * cfg.m / cfg.r**3 * legendre_kernel(R0 / cfg.r, S, pmax)


def _cosine_coefficients(samples: np.ndarray, pmax: int) -> np.ndarray:
    # trapezoid rule on a uniform periodic grid == scaled real DFT
    c = np.fft.rfft(samples).real / samples.size
    c[1:] *= 2
    return c[: pmax + 1]


def fourier_b(cfg: SystemConfig, orbit: ProbeOrbit, pmax: int = DEFAULT_PMAX,
              n_quad: int = DEFAULT_NQUAD, check: bool = True) -> np.ndarray:
    """Cosine Fourier coefficients ``b_0..b_pmax`` of the Legendre kernel.

    ``b_0`` is the mean of ``W`` over a synodic period and
    ``b_p = (1/pi) int W(S) cos(p S) dS`` for ``p >= 1``.  The integrals are
    evaluated by the trapezoid rule on ``n_quad`` points; with ``check`` the
    grid is doubled and the two results must agree to 1e-10 relative.

    Raises
    ------
    QuadratureError
        If the refinement check fails.
    """
    y = mean_radius(orbit) / cfg.r
    if y >= 1:
        raise ValueError("requires mean radius below the perturber radius")
    if n_quad <= 2 * pmax:
        raise ValueError("n_quad must exceed 2 * pmax to avoid aliasing")

    def at(n):
        S = 2 * np.pi * np.arange(n) / n
        return _cosine_coefficients(legendre_kernel(y, S, pmax), pmax)

    b = at(n_quad)
    if check:
        b2 = at(2 * n_quad)
        scale = np.max(np.abs(b2))
        if np.max(np.abs(b - b2)) > 1e-10 * scale:
            raise QuadratureError(
                f"Fourier quadrature unconverged at y={y:.6g}, N={n_quad}"
            )
        b = b2
    return b


def base_frequency_sq(cfg: SystemConfig, orbit: ProbeOrbit, c_e: float = E4_COEFF) -> float:
    """``(gamma*M/a**3) (1 - c_e e**4)``; ``c_e = 3/4`` by default."""
    return cfg.gamma * cfg.M / orbit.a**3 * (1 - c_e * orbit.e**4)


def elliptic_factor_exact(e: float) -> float:
    """Unexpanded ``(3 L0**2/R0**4 - 2 gamma M/R0**3) / (gamma M/a**3)``.

    Uses ``L0**2 = gamma M a (1-e**2)`` and ``R0 = a sqrt(1-e**2)``, which
    reduces to ``3/(1-e**2) - 2/(1-e**2)**1.5``.  Its Taylor series is
    ``1 - (3/4) e**4 - (11/8) e**6 + ...``.
    """
    q = 1 - e * e
    return 3 / q - 2 / q**1.5


def hill_amplitudes(cfg: SystemConfig, orbit: ProbeOrbit, b, c_e: float = E4_COEFF):
    """``h_p = (m/M) (R0bar/r)**3 b_p / (1 - c_e e**4)``."""
    y = mean_radius(orbit) / cfg.r
    return cfg.mass_ratio * y**3 * np.asarray(b, dtype=float) / (1 - c_e * orbit.e**4)


def hill_coefficients(cfg: SystemConfig, orbit: ProbeOrbit, pmax: int = DEFAULT_PMAX,
                      c_e: float = E4_COEFF, n_quad: int | None = None) -> HillCoefficients:
    """Assemble the full Hill ladder for one probe orbit.

    The base frequency is ``gamma*M/R0bar**3 (1 - c_e e**4)`` so that
    ``omega0_sq * h_p == gamma*m/r**3 * b_p`` holds exactly.  The drive is
    the synodic rate of the Kepler mean motion ``sqrt(gamma*M/a**3)``.
    """
    if n_quad is None:
        n_quad = max(DEFAULT_NQUAD, 1 << (2 * pmax + 2).bit_length())
    b = fourier_b(cfg, orbit, pmax, n_quad)
    h = hill_amplitudes(cfg, orbit, b, c_e)
    R0 = mean_radius(orbit)
    omega0_sq = cfg.gamma * cfg.M / R0**3 * (1 - c_e * orbit.e**4)
    return HillCoefficients(omega0_sq, b, h, synodic_rate(cfg, orbit.a), orbit.e, orbit.phi)


def forcing(cfg: SystemConfig, orbit: ProbeOrbit, pmax: int = DEFAULT_PMAX,
            n_quad: int = DEFAULT_NQUAD) -> ForcingSpec:
    """Inhomogeneous term of the linearized radial equation.

    Constant part ``L0**2/R0**3 - gamma*M/R0**2`` (vanishes for a circular
    orbit) plus the cosine decomposition of
    ``-(gamma*m/r**2) sum_{p=2}^{pmax} p y**(p-1) P_p(cos S)``.
    """
    if pmax < 2:
        raise ValueError("pmax must be at least 2")
    R0 = mean_radius(orbit)
    if R0 >= cfg.r:
        raise ValueError("requires mean radius below the perturber radius")
    y = R0 / cfg.r
    L0 = angular_momentum(cfg, orbit)
    constant = L0**2 / R0**3 - cfg.gamma * cfg.M / R0**2

    p = np.arange(pmax + 1, dtype=float)
    weights = np.zeros(pmax + 1)
    weights[2:] = p[2:] * y ** (p[2:] - 1)
    S = 2 * np.pi * np.arange(n_quad) / n_quad
    series = np.tensordot(weights, legendre_table(pmax, np.cos(S)), axes=1)
    harmonics = _cosine_coefficients(-cfg.gamma * cfg.m / cfg.r**2 * series, pmax)
    return ForcingSpec(constant, harmonics)
