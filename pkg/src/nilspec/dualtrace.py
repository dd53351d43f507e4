"""Trace growth over the truncated dual region.

Integrating the per-representation eigenvalue count over the dual
parameters gives the trace of the spectral projection below s; these
routines estimate that integral on the region dictated by the scale s,
fit its growth exponent on geometric s-grids, and keep the arithmetic
deterministic regardless of worker count.

Convention recorded in every report: the density on the dual region is
taken as plain Lebesgue measure in (lam, mu, nu); the absolute constant
relating it to the true trace is absorbed into the reported values.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .groups import Group
from .representation import DualPoint
from .schrodinger import build_symbol_cartan, build_symbol_engel, count_at_dual_point, rescale
from .weyl import WeylSymbol, phase_space_volume

C_VOL = 1.0 / (2.0 * math.pi)

MEASURE_NOTE = (
    "dual measure taken as Lebesgue dlam dmu (dnu) on the truncated region; "
    "absolute density constants absorbed"
)

METHODS = ("volume_bound", "eigen_count")


@dataclass(frozen=True)
class DualRegion:
    """Box of dual parameters that carries the spectrum below scale s."""

    group: Group
    s: float
    lam_bounds: tuple[float, float]
    mu_bounds: tuple[float, float]
    nu_bounds: tuple[float, float] | None = None


def region_for(group: Group, s: float) -> DualRegion:
    """Truncated dual region at scale s (requires s > 1).

    Engel:  lam in (s^-1/2, s^1/2), mu in (-2s, 4s).
    Cartan: lam, mu in (s^-1/2, s^1/2), nu in (-2s, 2s).
    Only the positive-lam (and positive-mu) sheet is integrated; the
    mirror sheets contribute the same values and are absorbed into the
    absolute constant.
    """
    if not s > 1.0:
        raise ValueError(f"dual region needs s > 1, got {s}")
    lo, hi = s**-0.5, s**0.5
    if group is Group.ENGEL:
        return DualRegion(group, float(s), (lo, hi), (-2.0 * s, 4.0 * s))
    return DualRegion(group, float(s), (lo, hi), (lo, hi), (-2.0 * s, 2.0 * s))


@dataclass(frozen=True)
class TraceEstimate:
    """One quadrature estimate of the dual-region trace at scale s."""

    s: float
    value: float
    method: str
    nodes: tuple[int, ...]
    error_indicator: float


def pairwise_sum(values) -> float:
    """Pairwise reduction in fixed order; identical bits for any worker count."""
    vals = [float(v) for v in values]
    if not vals:
        return 0.0
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
    return vals[0]


def _axis_rule(lo: float, hi: float, n: int, rule: str):
    if n < 1:
        raise ValueError(f"need at least 1 node per axis, got {n}")
    if rule == "gauss":
        x, w = np.polynomial.legendre.leggauss(n)
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        return mid + half * x, half * w
    if rule == "midpoint":
        h = (hi - lo) / n
        return lo + (np.arange(n) + 0.5) * h, np.full(n, h)
    raise ValueError(f"quadrature rule must be 'gauss' or 'midpoint', got {rule!r}")


def _node_value(args) -> float:
    (group_name, method, s, lam, mu, nu, kappa, ppw, max_n, rel_tol) = args
    group = Group(group_name)
    point = DualPoint(group, lam, mu, nu)
    if method == "eigen_count":
        return float(count_at_dual_point(point, s, kappa=kappa, points_per_wave=ppw, max_n=max_n))
    if group is Group.ENGEL:
        op = build_symbol_engel(lam, mu)
        level = s
    else:
        c = point.c
        op = rescale(build_symbol_cartan(lam, mu, nu), c)
        level = c * s
    return C_VOL * phase_space_volume(WeylSymbol(op.potential), level, rel_tol=rel_tol)


def _grid_points(region: DualRegion, nodes: tuple[int, ...], rule: str):
    axes = [_axis_rule(*region.lam_bounds, nodes[0], rule), _axis_rule(*region.mu_bounds, nodes[1], rule)]
    if region.nu_bounds is not None:
        axes.append(_axis_rule(*region.nu_bounds, nodes[2], rule))
    coords = [a[0] for a in axes]
    weights = [a[1] for a in axes]
    pts = []
    if len(coords) == 2:
        for i, lam in enumerate(coords[0]):
            for j, mu in enumerate(coords[1]):
                pts.append((float(lam), float(mu), 0.0, float(weights[0][i] * weights[1][j])))
    else:
        for i, lam in enumerate(coords[0]):
            for j, mu in enumerate(coords[1]):
                for k, nu in enumerate(coords[2]):
                    w = weights[0][i] * weights[1][j] * weights[2][k]
                    pts.append((float(lam), float(mu), float(nu), float(w)))
    return pts


def trace_estimate(
    group: Group,
    s: float,
    method: str = "volume_bound",
    nodes: tuple[int, ...] | int | None = None,
    rule: str = "gauss",
    workers: int = 1,
    integrand=None,
    kappa: float = 4.0,
    points_per_wave: int = 10,
    max_n: int = 1 << 21,
    vol_rel_tol: float = 1e-8,
    compute_indicator: bool = True,
) -> TraceEstimate:
    """Quadrature of the per-point count (or its volume proxy) over the region.

    ``integrand`` may inject a custom callable (group, s, lam, mu, nu) -> float
    for testing; injected integrands run serially.  The error indicator
    is the difference against the same quadrature at half the nodes.
    """
    if method not in METHODS and integrand is None:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    region = region_for(group, s)
    naxes = 2 if group is Group.ENGEL else 3
    if nodes is None:
        nodes = (32, 32) if naxes == 2 else (16, 16, 16)
    elif isinstance(nodes, int):
        nodes = (nodes,) * naxes
    else:
        nodes = tuple(int(n) for n in nodes)
    if len(nodes) != naxes:
        raise ValueError(f"{group.value} region needs {naxes} node counts, got {nodes}")
    pts = _grid_points(region, nodes, rule)
    if integrand is not None:
        vals = [integrand(group, s, lam, mu, nu) for lam, mu, nu, _ in pts]
    else:
        arglist = [
            (group.value, method, float(s), lam, mu, nu, kappa, points_per_wave, max_n, vol_rel_tol)
            for lam, mu, nu, _ in pts
        ]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                chunk = max(1, len(arglist) // (workers * 4))
                vals = list(pool.map(_node_value, arglist, chunksize=chunk))
        else:
            vals = [_node_value(a) for a in arglist]
    value = pairwise_sum(v * w for v, (_, _, _, w) in zip(vals, pts))
    indicator = math.nan
    if compute_indicator:
        half = tuple(max(1, n // 2) for n in nodes)
        coarse = trace_estimate(
            group,
            s,
            method=method,
            nodes=half,
            rule=rule,
            workers=workers,
            integrand=integrand,
            kappa=kappa,
            points_per_wave=points_per_wave,
            max_n=max_n,
            vol_rel_tol=vol_rel_tol,
            compute_indicator=False,
        )
        indicator = abs(value - coarse.value)
    return TraceEstimate(float(s), value, method, nodes, indicator)


@dataclass(frozen=True)
class GrowthFit:
    """Power-law fit  value ~ exp(intercept) * s^slope  on a log-log grid."""

    s_grid: tuple[float, ...]
    values: tuple[float, ...]
    slope: float
    intercept: float
    residual: float


def slope_target(group: Group) -> float:
    """Homogeneous growth exponent of the trace: 3 (Engel), 4.5 (Cartan)."""
    return 3.0 if group is Group.ENGEL else 4.5


def check_geometric_grid(s_grid) -> list[float]:
    """Validate the fitting grid: geometric, >= 5 points, >= 2 decades."""
    s_grid = [float(s) for s in s_grid]
    if len(s_grid) < 5:
        raise ValueError(f"need at least 5 grid points, got {len(s_grid)}")
    if s_grid[0] <= 0 or s_grid[-1] < 100.0 * s_grid[0]:
        raise ValueError("s-grid must be positive and span at least two decades")
    ratios = [b / a for a, b in zip(s_grid[:-1], s_grid[1:])]
    if any(r <= 1.0 or abs(r - ratios[0]) > 1e-6 * ratios[0] for r in ratios):
        raise ValueError("s-grid must be geometric and increasing")
    return s_grid


def growth_exponent(
    group: Group,
    s_grid,
    method: str = "volume_bound",
    nodes: tuple[int, ...] | int | None = None,
    rule: str = "gauss",
    workers: int = 1,
    integrand=None,
    **kwargs,
) -> GrowthFit:
    """Fit the growth exponent of the trace over a geometric s-grid.

    The grid must be geometric with at least 5 points spanning at least
    two decades; the residual is the RMS misfit of log values.
    """
    s_grid = check_geometric_grid(s_grid)
    estimates = [
        trace_estimate(
            group, s, method=method, nodes=nodes, rule=rule, workers=workers,
            integrand=integrand, compute_indicator=False, **kwargs,
        )
        for s in s_grid
    ]
    return fit_values(s_grid, [e.value for e in estimates])


def fit_values(s_grid, values) -> GrowthFit:
    """Log-log least squares on precomputed (s, value) pairs."""
    values = [float(v) for v in values]
    if any(v <= 0.0 for v in values):
        raise ValueError("trace estimates must be positive for a log-log fit")
    lx = np.log(list(map(float, s_grid)))
    ly = np.log(values)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    return GrowthFit(tuple(map(float, s_grid)), tuple(values), float(slope), float(intercept), resid)


def fit_report(fit: GrowthFit, group: Group, slack: float = 0.3) -> dict:
    """JSON-ready summary of a growth fit against the group's target."""
    target = slope_target(group)
    return {
        "group": group.value,
        "s_grid": list(fit.s_grid),
        "values": list(fit.values),
        "slope": fit.slope,
        "intercept": fit.intercept,
        "residual": fit.residual,
        "target": target,
        "pass": fit.slope <= target + slack,
        "assumption": MEASURE_NOTE,
    }
