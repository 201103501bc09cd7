"""Floquet analysis of the Hill equation.

The homogeneous equation ``x'' + omega**2(t) x = 0`` is integrated over one
full synodic period from the identity to obtain the monodromy matrix.
Because the system is undamped the matrix has unit determinant, and the
motion is parametrically unstable exactly when ``|trace| > 2``.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import solve_ivp

from .hillde import E4_COEFF, HillCoefficients, hill_coefficients
from .kernel import ProbeOrbit, SystemConfig, series_order
from .zones import zone_center, zone_width

__all__ = [
    "MonodromyResult",
    "ScanPoint",
    "IntegrationError",
    "NoTongueError",
    "STABILITY_MARGIN",
    "monodromy",
    "monodromy_fixed_step",
    "tongue_boundaries",
    "zone_boundaries",
    "orbit_for_ratio",
    "coefficients_for_ratio",
    "stability_scan",
    "unstable_clusters",
]

STABILITY_MARGIN = 1e-10
DET_TOLERANCE = 1e-6


class IntegrationError(ArithmeticError):
    """The variational integration failed or lost its unit determinant."""


class NoTongueError(ValueError):
    """No instability tongue was found inside the search window."""


@dataclass(frozen=True)
class MonodromyResult:
    matrix: np.ndarray
    trace: float
    multipliers: tuple
    unstable: bool
    period_used: float

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def magnitudes(self) -> tuple:
        return tuple(abs(z) for z in self.multipliers)

    @property
    def growth_rate(self) -> float:
        """Floquet exponent: ``log(max |multiplier|) / period``."""
        return math.log(max(self.magnitudes)) / self.period_used


def _result(phi: np.ndarray, period: float) -> MonodromyResult:
    det = np.linalg.det(phi)
    if not np.isfinite(det) or abs(det - 1) > DET_TOLERANCE:
        raise IntegrationError(f"monodromy determinant drifted to {det!r}")
    tr = float(np.trace(phi))
    mult = tuple(complex(z) for z in np.linalg.eigvals(phi))
    return MonodromyResult(phi, tr, mult, abs(tr) > 2 + STABILITY_MARGIN, period)


def monodromy(coeffs: HillCoefficients, period: float | None = None,
              tol: float = 1e-11, method: str = "DOP853") -> MonodromyResult:
    """One-period state-transition matrix of ``x'' + omega**2(t) x = 0``.

    Both fundamental solutions are propagated together with an adaptive
    embedded Runge-Kutta pair at relative tolerance ``tol``.

    Parameters
    ----------
    coeffs : HillCoefficients
        Frequency ladder; ``omega**2(t)`` is evaluated from it.
    period : float, optional
        Integration span. Defaults to the full synodic period.
    tol : float
        Relative tolerance; the absolute tolerance is ``tol * 1e-2``.

    Raises
    ------
    IntegrationError
        On solver failure or when ``|det - 1| > 1e-6``.
    """
    T = coeffs.period if period is None else period
    if not T > 0:
        raise ValueError("period must be positive")

    def rhs(t, s):
        w2 = coeffs.omega_sq(t)
        return [s[1], -w2 * s[0], s[3], -w2 * s[2]]

    sol = solve_ivp(rhs, (0.0, T), [1.0, 0.0, 0.0, 1.0], method=method,
                    rtol=tol, atol=tol * 1e-2)
    if sol.status != 0:
        raise IntegrationError(sol.message)
    s = sol.y[:, -1]
    return _result(np.array([[s[0], s[2]], [s[1], s[3]]]), T)


def monodromy_fixed_step(coeffs: HillCoefficients, period: float | None = None,
                         steps: int = 4096) -> MonodromyResult:
    """Classical RK4 with a fixed number of steps; deterministic cross-check."""
    T = coeffs.period if period is None else period
    dt = T / steps
    Y = np.eye(2)
    A = np.array([[0.0, 1.0], [0.0, 0.0]])
    ts = dt * np.arange(steps)
    w_0 = coeffs.omega_sq(ts)
    w_half = coeffs.omega_sq(ts + 0.5 * dt)
    w_1 = coeffs.omega_sq(ts + dt)

    def f(w2, Y):
        A[1, 0] = -w2
        return A @ Y

    for i in range(steps):
        k1 = f(w_0[i], Y)
        k2 = f(w_half[i], Y + 0.5 * dt * k1)
        k3 = f(w_half[i], Y + 0.5 * dt * k2)
        k4 = f(w_1[i], Y + dt * k3)
        Y = Y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return _result(Y, T)


def _bisect_edge(unstable_at, stable_x, unstable_x, rtol):
    a, b = stable_x, unstable_x
    while abs(b - a) > rtol * max(abs(a), abs(b)):
        mid = 0.5 * (a + b)
        if unstable_at(mid):
            b = mid
        else:
            a = mid
    return 0.5 * (a + b)


def tongue_boundaries(coeffs_at: Callable[[float], HillCoefficients],
                      window: tuple[float, float], center: float | None = None,
                      rtol: float = 1e-8, tol: float = 1e-11,
                      probe_points: int = 201) -> tuple[float, float]:
    """Edges of the instability tongue inside ``window``.

    ``coeffs_at`` maps the scanned parameter (a frequency ratio, or a drive
    frequency for a bare Mathieu equation) to Hill coefficients.  An
    unstable seed is taken at ``center`` or, failing that, from a uniform
    probe of the window; each edge is then located by bisection on
    ``|trace| = 2`` to relative tolerance ``rtol``.

    Raises
    ------
    NoTongueError
        No unstable point inside the window, or a window end is itself
        unstable (the tongue is not bracketed).
    """
    lo, hi = window
    if not lo < hi:
        raise ValueError("window must be increasing")

    def unstable_at(x):
        return monodromy(coeffs_at(x), tol=tol).unstable

    seed = None
    if center is not None and lo < center < hi and unstable_at(center):
        seed = center
    else:
        xs = np.linspace(lo, hi, probe_points)[1:-1]
        if center is not None:
            xs = xs[np.argsort(np.abs(xs - center), kind="stable")]
        for x in xs:
            if unstable_at(x):
                seed = float(x)
                break
    if seed is None:
        raise NoTongueError(f"no instability found in window ({lo}, {hi})")
    if unstable_at(lo) or unstable_at(hi):
        raise NoTongueError("window does not bracket the tongue")
    return _bisect_edge(unstable_at, lo, seed, rtol), _bisect_edge(unstable_at, hi, seed, rtol)


def orbit_for_ratio(cfg: SystemConfig, ratio: float, e: float = 0.0, phi: float = 0.0) -> ProbeOrbit:
    """Probe orbit whose Kepler mean motion is ``ratio * omega_s``."""
    if not ratio > 1:
        raise ValueError("ratio must exceed 1 for an inner probe")
    n = ratio * cfg.omega_s
    return ProbeOrbit((cfg.gamma * cfg.M / n**2) ** (1 / 3), e, phi)


def coefficients_for_ratio(cfg: SystemConfig, ratio: float, e: float = 0.0,
                           pmax: int | None = None, c_e: float = E4_COEFF) -> HillCoefficients:
    """Hill ladder at the orbit implied by ``ratio``; ``pmax`` defaults to a converged order."""
    orbit = orbit_for_ratio(cfg, ratio, e)
    if pmax is None:
        pmax = series_order(orbit.a * math.sqrt(1 - e * e) / cfg.r)
    return hill_coefficients(cfg, orbit, pmax, c_e)


def zone_boundaries(cfg: SystemConfig, n: int, e: float = 0.0, *, alpha: float = 0.0,
                    c_e: float = E4_COEFF, pmax: int | None = None,
                    window_widths: float = 5.0, rtol: float = 1e-8,
                    tol: float = 1e-11) -> tuple[float, float]:
    """Measured edges, in ``omega/omega_s``, of the ``n``-th analytic zone.

    The search window is the analytic center plus or minus
    ``window_widths`` analytic half-widths.  The analytic half-width in the
    ratio is ``eps1 / (n * omega_s)``, ``eps1`` being a half-width in the
    drive frequency ``n (omega - omega_s)``.
    """
    center = zone_center(n, e, alpha, c_e)
    coeffs = coefficients_for_ratio(cfg, center, e, pmax, c_e)
    eps1, _ = zone_width(coeffs.omega0, n, coeffs.h[n])
    half = eps1 / (n * cfg.omega_s)
    if half == 0:
        raise NoTongueError("analytic zone has zero width")
    window = (center - window_widths * half, center + window_widths * half)
    return tongue_boundaries(lambda x: coefficients_for_ratio(cfg, x, e, pmax, c_e),
                             window, center, rtol=rtol, tol=tol)


@dataclass(frozen=True)
class ScanPoint:
    ratio: float
    trace: float
    unstable: bool
    error: str = ""


def _scan_one(args) -> ScanPoint:
    cfg, ratio, e, pmax, c_e, tol = args
    try:
        res = monodromy(coefficients_for_ratio(cfg, ratio, e, pmax, c_e), tol=tol)
    except (ArithmeticError, ValueError) as exc:
        return ScanPoint(float(ratio), math.nan, False, f"{type(exc).__name__}: {exc}")
    return ScanPoint(float(ratio), res.trace, res.unstable)


def stability_scan(cfg: SystemConfig, ratio_grid: Sequence[float], e: float = 0.0,
                   pmax: int | None = None, c_e: float = E4_COEFF, tol: float = 1e-10,
                   workers: int = 1) -> list[ScanPoint]:
    """Classify each frequency ratio on ``ratio_grid`` as stable or unstable.

    Points whose integration fails are returned with ``error`` set and the
    scan carries on.  With ``workers > 1`` the grid is split across
    processes; results come back in grid order either way.
    """
    grid = np.asarray(ratio_grid, dtype=float)
    if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
        raise ValueError("ratio grid must be strictly increasing")
    if np.any(grid <= 1):
        raise ValueError("all ratios must exceed 1")
    jobs = [(cfg, x, e, pmax, c_e, tol) for x in grid]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_scan_one, jobs, chunksize=8))
    return [_scan_one(j) for j in jobs]


def unstable_clusters(points: Sequence[ScanPoint]) -> list[tuple[float, float]]:
    """Contiguous runs of unstable grid points as ``(first, last)`` ratio pairs."""
    runs, start, prev = [], None, None
    for pt in points:
        if pt.unstable:
            if start is None:
                start = pt.ratio
            prev = pt.ratio
        elif start is not None:
            runs.append((start, prev))
            start = None
    if start is not None:
        runs.append((start, prev))
    return runs
