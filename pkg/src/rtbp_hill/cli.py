"""Command-line front end: every subcommand writes one CSV document.

Each document opens with ``#`` comment lines (package version, config
hash, the full canonical config), then a header row, then data rows.
Exit status: 0 success, 1 configuration error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, config_hash, load_config, serialize_config
from .floquet import orbit_for_ratio, stability_scan
from .hillde import fourier_b, hill_amplitudes, hill_coefficients
from .kernel import ProbeOrbit, SystemConfig, mean_radius, series_order
from .rtbp import integrate, kepler_state
from .zones import (
    Resonance,
    center_semimajor_axis,
    critical_order,
    critical_order_raw,
    eccentricity_scan,
    instability_zone,
    overlap_margin,
    width_in_semimajor_axis,
    zone_width,
)

__all__ = [
    "TABLE1",
    "TABLE1_R",
    "NumericalFailure",
    "cmd_table1",
    "cmd_fig1",
    "cmd_scan",
    "cmd_coeffs",
    "cmd_critical_order",
    "main",
]

# Reference rows of the published zone table: order k, label, commensurability
# distance, b, width (e = 0).  The third row's distance corresponds to the
# 5:3 commensurability although it is labelled 3:2, so rows are driven by the
# ratio that reproduces the printed distance.
TABLE1 = (
    (3, "3:1", 3.0, 2.501120, 0.077800, 0.0120),
    (4, "2:1", 2.0, 3.277395, 0.107630, 0.0114),
    (6, "3:2", 5.0 / 3.0, 3.700976, 0.132076, 0.0108),
)
# perturber distance recovered by inverting a = r (q/p)**(2/3) on the table
TABLE1_R = 5.2025

SCAN_KINDS = ("zones", "floquet", "rtbp", "overlap")


class NumericalFailure(ArithmeticError):
    pass


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _csv(cfg: RunConfig, header, rows) -> str:
    buf = io.StringIO()
    buf.write(f"# rtbp_hill {__version__} config-sha256={config_hash(cfg)}\n")
    for line in serialize_config(cfg).splitlines():
        buf.write(f"# {line}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _orbit(cfg: RunConfig, sys_cfg: SystemConfig) -> ProbeOrbit:
    o = cfg.orbit
    if o.a is not None:
        return ProbeOrbit(o.a, o.e, o.phi)
    return orbit_for_ratio(sys_cfg, cfg.ratio, o.e, o.phi)


def cmd_table1(cfg: RunConfig) -> str:
    """Reproduce the zone table at ``r = 5.2025`` with the configured mass ratio."""
    s = cfg.system
    t1 = SystemConfig.physical(1.0, 1.0, s.m / s.M, TABLE1_R)
    n = cfg.numeric
    rows = []
    for k, label, ratio, _, b_table, w_table in TABLE1:
        a = center_semimajor_axis(t1, ratio)
        orbit = ProbeOrbit(a, cfg.orbit.e)
        pmax = max(k, n.pmax, series_order(mean_radius(orbit) / t1.r))
        b = fourier_b(t1, orbit, pmax, max(n.n_quad, 1 << (2 * pmax + 2).bit_length()))
        h = hill_amplitudes(t1, orbit, b, n.c_e)
        omega0 = math.sqrt(t1.gamma * t1.M / a**3 * (1 - n.c_e * orbit.e**4))
        eps1, _ = zone_width(omega0, k, abs(h[k]))
        rows.append((k, label, a, b[k], b_table, width_in_semimajor_axis(eps1, omega0, a), w_table))
    header = ("order_k", "resonance", "center_a", "b_computed", "b_paper", "width_a", "width_paper")
    return _csv(cfg, header, rows)


def cmd_fig1(cfg: RunConfig) -> str:
    """Zone width and spacing against eccentricity for zone ``fig1_n``."""
    g, n = cfg.grid, cfg.numeric
    e_grid = np.round(np.linspace(g.e_min, g.e_max, g.e_count), 12)
    rows = eccentricity_scan(cfg.system_config(), g.fig1_n, e_grid, n.b_ref,
                             n.eq23_c4, n.eq23_c8)
    return _csv(cfg, ("e", "width", "gap", "margin"), rows)


def _scan_zones(cfg, sc):
    n = cfg.numeric
    rows = []
    for order in range(cfg.grid.n_min, cfg.grid.n_max + 1):
        try:
            z = instability_zone(sc, order, cfg.orbit.e, alpha=n.alpha, c_e=n.c_e)
            rows.append((order, str(Resonance.from_order(order)), z.center_ratio, z.center_a,
                         z.width_eps1, z.width_eps2, z.width_a, z.e, ""))
        except (ArithmeticError, ValueError) as exc:
            rows.append((order, str(Resonance.from_order(order)), "", "", "", "", "", "", str(exc)))
    header = ("n", "resonance", "center_ratio", "center_a", "eps1", "eps2", "width_a", "e", "error")
    return header, rows


def _scan_overlap(cfg, sc):
    n = cfg.numeric
    rows = []
    for order in range(cfg.grid.n_min, cfg.grid.n_max + 1):
        rep = overlap_margin(sc, order, cfg.orbit.e, n.b_ref, n.eq23_c4, n.eq23_c8)
        rows.append((order, rep.gap, rep.width_term, rep.margin, rep.overlapped, ""))
    return ("n", "gap", "width_term", "margin", "overlapped", "error"), rows


def _scan_floquet(cfg, sc):
    g, n = cfg.grid, cfg.numeric
    grid = np.linspace(g.ratio_min, g.ratio_max, g.ratio_count)
    pts = stability_scan(sc, grid, cfg.orbit.e, None, n.c_e, n.floquet_tol)
    rows = [(p.ratio, p.trace, p.unstable, p.error) for p in pts]
    return ("ratio", "trace", "unstable", "error"), rows


def _scan_rtbp(cfg, sc):
    orbit = _orbit(cfg, sc)
    state0 = kepler_state(sc, orbit.a, orbit.e, orbit.phi)
    traj = integrate(sc, state0, cfg.grid.periods * sc.perturber_period, cfg.numeric.rtbp_tol,
                     samples=cfg.output.samples, kind=cfg.numeric.potential)
    return traj.COLUMNS + ("error",), [row + ("",) for row in traj.rows()]


def cmd_scan(cfg: RunConfig, kind: str) -> str:
    """Run one of the module scans and render it as CSV.

    Raises
    ------
    NumericalFailure
        When every row of the scan failed.
    """
    if kind not in SCAN_KINDS:
        raise ConfigError(f"unknown scan kind {kind!r}")
    sc = cfg.system_config()
    header, rows = {"zones": _scan_zones, "overlap": _scan_overlap,
                    "floquet": _scan_floquet, "rtbp": _scan_rtbp}[kind](cfg, sc)
    if rows and all(r[-1] for r in rows):
        raise NumericalFailure(f"all {len(rows)} points of the {kind} scan failed")
    return _csv(cfg, header, rows)


def cmd_coeffs(cfg: RunConfig) -> str:
    """Dump the Hill ladder of the configured orbit."""
    sc = cfg.system_config()
    orbit = _orbit(cfg, sc)
    n = cfg.numeric
    c = hill_coefficients(sc, orbit, n.pmax, n.c_e, n.n_quad)
    rows = [(p, c.b[p], c.h[p], c.omega0_sq, c.drive_freq, c.e_used) for p in range(c.b.size)]
    return _csv(cfg, ("p", "b", "h", "omega0_sq", "drive_freq", "e"), rows)


def cmd_critical_order(cfg: RunConfig) -> str:
    sc = cfg.system_config()
    b = cfg.numeric.b_ref
    return _csv(cfg, ("mass_ratio", "b", "n_raw", "n_critical"),
                [(sc.mass_ratio, b, critical_order_raw(sc, b), critical_order(sc, b))])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rtbp-hill", description=__doc__.splitlines()[0])
    p.add_argument("--config", metavar="PATH", help="configuration file (defaults if omitted)")
    p.add_argument("--out", metavar="PATH", help="output CSV path (stdout if omitted)")
    p.add_argument("--seed", type=int, default=None, help="reserved; all paths are deterministic")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("table1", help="reproduce the published zone table")
    sub.add_parser("fig1", help="zone width and spacing against eccentricity")
    scan = sub.add_parser("scan", help="module scans")
    scan.add_argument("--kind", choices=SCAN_KINDS, required=True)
    sub.add_parser("coeffs", help="dump Hill coefficients for the configured orbit")
    sub.add_parser("critical-order", help="lowest overlapping zone order")
    return p


def run(args, cfg: RunConfig) -> str:
    if args.command == "table1":
        return cmd_table1(cfg)
    if args.command == "fig1":
        return cmd_fig1(cfg)
    if args.command == "scan":
        return cmd_scan(cfg, args.kind)
    if args.command == "coeffs":
        return cmd_coeffs(cfg)
    if args.command == "critical-order":
        return cmd_critical_order(cfg)
    raise AssertionError(args.command)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        text = run(args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (ArithmeticError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    out = args.out or cfg.output.path
    if out != "-":
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0
