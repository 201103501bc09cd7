"""Direct integration of the planar circular restricted problem in polar form.

State is ``(R, lambda, vR, L)`` with ``L = R**2 dlambda/dt``::

    dR/dt = vR                 dvR/dt = L**2/R**3 + dU/dR
    dlambda/dt = L/R**2        dL/dt  = dU/dlambda

The perturber moves on a circle of radius ``r`` at longitude
``omega_s * t``; ``S = lambda - omega_s t``.  Coordinates are centered on
the primary, so the default potential carries the indirect term
``-gamma*m*R*cos(S)/r**2``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .kernel import SystemConfig

__all__ = [
    "TrajectoryState",
    "Trajectory",
    "DivergenceResult",
    "CollisionError",
    "JacobiDriftWarning",
    "POTENTIALS",
    "potential",
    "rhs",
    "jacobi_constant",
    "osculating_elements",
    "circular_state",
    "kepler_state",
    "integrate",
    "divergence",
]

POTENTIALS = ("heliocentric", "literal")
COLLISION_FRACTION = 1e-9


class CollisionError(ArithmeticError):
    """The probe came within the collision threshold of a massive body."""

    def __init__(self, msg, t=None, state=None):
        super().__init__(msg)
        self.t = t
        self.state = state


class JacobiDriftWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class TrajectoryState:
    R: float
    lam: float
    vR: float
    L: float
    t: float = 0.0

    def __post_init__(self):
        if not self.R > 0:
            raise ValueError("R must be positive")
        if not all(map(math.isfinite, (self.R, self.lam, self.vR, self.L, self.t))):
            raise ValueError("state components must be finite")

    def as_array(self) -> np.ndarray:
        return np.array([self.R, self.lam, self.vR, self.L])


@dataclass(frozen=True, eq=False)
class Trajectory:
    t: np.ndarray
    R: np.ndarray
    lam: np.ndarray
    vR: np.ndarray
    L: np.ndarray
    a_osc: np.ndarray
    e_osc: np.ndarray
    C_J: np.ndarray

    COLUMNS = ("t", "R", "lambda", "vR", "L", "a_osc", "e_osc", "C_J")

    def rows(self):
        return zip(self.t, self.R, self.lam, self.vR, self.L, self.a_osc, self.e_osc, self.C_J)

    def state(self, i: int = -1) -> TrajectoryState:
        return TrajectoryState(self.R[i], self.lam[i], self.vR[i], self.L[i], self.t[i])

    @property
    def jacobi_drift(self) -> float:
        """Largest relative excursion of the Jacobi constant."""
        return float(np.max(np.abs(self.C_J / self.C_J[0] - 1)))


@dataclass(frozen=True)
class DivergenceResult:
    ftle: float
    renormalizations: int
    horizon: float


def _check(cfg, R, D):
    thr = COLLISION_FRACTION * cfg.r
    if R < thr or D < thr:
        raise CollisionError(f"collision: R={R:.3e}, Delta={D:.3e}")


def potential(cfg: SystemConfig, R, S, kind: str = "heliocentric"):
    """Force function ``gamma*M/R + gamma*m*(1/Delta - R cos S / r**2)``.

    ``kind="literal"`` drops the indirect term.
    """
    D = np.sqrt(R * R + cfg.r**2 - 2 * R * cfg.r * np.cos(S))
    U = cfg.gamma * cfg.M / R + cfg.gamma * cfg.m / D
    if kind == "heliocentric":
        U = U - cfg.gamma * cfg.m * R * np.cos(S) / cfg.r**2
    elif kind != "literal":
        raise ValueError(f"unknown potential {kind!r}")
    return U


def rhs(cfg: SystemConfig, t: float, state, kind: str = "heliocentric") -> np.ndarray:
    """Time derivative of ``(R, lambda, vR, L)``.

    Raises
    ------
    CollisionError
        If ``R`` or the mutual distance drops below ``1e-9 r``.
    """
    R, lam, vR, L = state
    S = lam - cfg.omega_s * t
    cS, sS = math.cos(S), math.sin(S)
    r = cfg.r
    D2 = R * R + r * r - 2 * R * r * cS
    D = math.sqrt(max(D2, 0.0))
    _check(cfg, R, D)
    gm = cfg.gamma * cfg.m
    D3 = D2 * D
    dU_dR = -cfg.gamma * cfg.M / (R * R) - gm * (R - r * cS) / D3
    dU_dl = -gm * R * r * sS / D3
    if kind == "heliocentric":
        dU_dR -= gm * cS / (r * r)
        dU_dl += gm * R * sS / (r * r)
    elif kind != "literal":
        raise ValueError(f"unknown potential {kind!r}")
    return np.array([vR, L / (R * R), L * L / (R * R * R) + dU_dR, dU_dl])


def jacobi_constant(cfg: SystemConfig, t, R, lam, vR, L, kind: str = "heliocentric"):
    """``C_J = 2 U_rot - v_rot**2 = 2U - v**2 + 2 omega_s L``."""
    S = lam - cfg.omega_s * t
    v2 = vR**2 + (L / R) ** 2
    return 2 * potential(cfg, R, S, kind) - v2 + 2 * cfg.omega_s * L


def osculating_elements(cfg: SystemConfig, R, vR, L):
    """Two-body ``(a, e)`` about the primary alone (``mu = gamma*M``)."""
    mu = cfg.gamma * cfg.M
    energy = 0.5 * (vR**2 + (L / R) ** 2) - mu / R
    a = -mu / (2 * energy)
    e = np.sqrt(np.maximum(1 - L**2 / (mu * a), 0.0))
    return a, e


def circular_state(cfg: SystemConfig, a: float, S0: float = 0.0) -> TrajectoryState:
    """Circular Kepler state at radius ``a`` and synodic angle ``S0`` at ``t = 0``."""
    return TrajectoryState(a, S0, 0.0, math.sqrt(cfg.gamma * cfg.M * a))


def kepler_state(cfg: SystemConfig, a: float, e: float = 0.0, S0: float = 0.0) -> TrajectoryState:
    """Pericenter state of a Kepler ellipse about the primary, at synodic angle ``S0``."""
    if not 0 <= e < 1:
        raise ValueError("eccentricity must lie in [0, 1)")
    return TrajectoryState(a * (1 - e), S0, 0.0, math.sqrt(cfg.gamma * cfg.M * a * (1 - e * e)))


def _state_array(state0):
    if isinstance(state0, TrajectoryState):
        return state0.as_array(), state0.t
    return np.array(state0, dtype=float), 0.0


def integrate(cfg: SystemConfig, state0, t_end: float, tol: float = 1e-12, *,
              samples: int | np.ndarray = 101, kind: str = "heliocentric",
              method: str = "DOP853", jacobi_bound: float | None = None) -> Trajectory:
    """Propagate a probe state to ``t_end`` with an adaptive embedded pair.

    Parameters
    ----------
    state0 : TrajectoryState or array-like
        Initial ``(R, lambda, vR, L)``; a bare array starts at ``t = 0``.
    t_end : float
        Final time; may be earlier than the start time (backward run).
    tol : float
        Relative tolerance, absolute tolerance ``tol * 1e-2``.
    samples : int or array
        Number of equally spaced output times, or the times themselves.
    jacobi_bound : float, optional
        Warn with :class:`JacobiDriftWarning` when the relative Jacobi
        drift exceeds this value.
    """
    y0, t0 = _state_array(state0)
    if t_end == t0:
        raise ValueError("t_end must differ from the start time")
    if kind not in POTENTIALS:
        raise ValueError(f"unknown potential {kind!r}")
    t_eval = np.linspace(t0, t_end, samples) if np.isscalar(samples) else np.asarray(samples)
    sol = solve_ivp(lambda t, s: rhs(cfg, t, s, kind), (t0, t_end), y0, method=method,
                    t_eval=t_eval, rtol=tol, atol=tol * 1e-2)
    if sol.status != 0:
        raise ArithmeticError(f"integration failed: {sol.message}")
    R, lam, vR, L = sol.y
    a, e = osculating_elements(cfg, R, vR, L)
    CJ = jacobi_constant(cfg, sol.t, R, lam, vR, L, kind)
    traj = Trajectory(sol.t, R, lam, vR, L, a, e, CJ)
    if jacobi_bound is not None and traj.jacobi_drift > jacobi_bound:
        warnings.warn(f"Jacobi constant drifted by {traj.jacobi_drift:.3e}", JacobiDriftWarning,
                      stacklevel=2)
    return traj


def _to_cartesian(s):
    R, lam, vR, L = s
    c, sn = math.cos(lam), math.sin(lam)
    vt = L / R
    return np.array([R * c, R * sn, vR * c - vt * sn, vR * sn + vt * c])


def _from_cartesian(c):
    x, y, vx, vy = c
    R = math.hypot(x, y)
    lam = math.atan2(y, x)
    return np.array([R, lam, (x * vx + y * vy) / R, x * vy - y * vx])


def divergence(cfg: SystemConfig, state0, delta0: float, horizon: float, *,
               tol: float = 1e-12, kind: str = "heliocentric") -> DivergenceResult:
    """Finite-time Lyapunov exponent by the two-trajectory method.

    The companion starts ``delta0`` away in position (radially outward).
    Both trajectories are integrated together; whenever their Cartesian
    phase-space separation reaches ``1e3 * delta0`` the companion is pulled
    back to distance ``delta0`` along the same direction and the growth
    factor is logged.  ``ftle = sum(log growth) / horizon``.
    """
    if not delta0 > 0:
        raise ValueError("delta0 must be positive")
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    y, t = _state_array(state0)
    if delta0 >= 1e-2 * y[0]:
        raise ValueError("delta0 must be much smaller than R")
    c2 = _to_cartesian(y)
    c2[:2] *= 1 + delta0 / y[0]
    y2 = _from_cartesian(c2)
    y2[1] = y[1] + math.remainder(y2[1] - y[1], 2 * math.pi)

    def f(t, s):
        return np.concatenate((rhs(cfg, t, s[:4], kind), rhs(cfg, t, s[4:], kind)))

    def separation(s):
        return float(np.linalg.norm(_to_cartesian(s[4:]) - _to_cartesian(s[:4])))

    def event(t, s):
        return separation(s) - 1e3 * delta0

    event.terminal = True
    event.direction = 1

    t_end = t + horizon
    s = np.concatenate((y, y2))
    log_sum, renorm = 0.0, 0
    while True:
        sol = solve_ivp(f, (t, t_end), s, method="DOP853", rtol=tol, atol=tol * 1e-2,
                        events=event)
        if sol.status == -1:
            raise ArithmeticError(sol.message)
        t, s = sol.t[-1], sol.y[:, -1]
        d = separation(s)
        log_sum += math.log(d / delta0)
        if sol.status == 0:
            break
        renorm += 1
        ca, cb = _to_cartesian(s[:4]), _to_cartesian(s[4:])
        y2 = _from_cartesian(ca + (cb - ca) * (delta0 / d))
        y2[1] = s[1] + math.remainder(y2[1] - s[1], 2 * math.pi)
        s = np.concatenate((s[:4], y2))
    return DivergenceResult(log_sum / horizon, renorm, horizon)
