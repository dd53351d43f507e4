"""Classical phase-space volumes and Weyl-law diagnostics.

The classical symbol of a unit-kinetic Schrodinger operator is
xi^2 + V(u); the number of eigenvalues below s tracks the area of
{xi^2 + V(u) < s} divided by 2*pi.  This module computes those areas to
quadrature accuracy, cross-checks them by Monte Carlo, and packages the
count/volume comparison used in the counting-bound reports.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import Group
from .representation import DualPoint
from .schrodinger import (
    Potential,
    SchrodingerOp,
    auto_domain,
    count_at_dual_point,
    discretize,
    sturm_count,
)

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


@dataclass(frozen=True)
class WeylSymbol:
    """Classical symbol xi^2 + V(u); the kinetic factor is pinned to 1.

    Operators with a different kinetic coefficient should be rescaled
    before the phase-space comparison, which keeps every volume formula
    here free of stray constants.
    """

    potential: Potential
    kinetic: float = 1.0

    def __post_init__(self):
        if self.kinetic != 1.0:
            raise ValueError(
                f"WeylSymbol is normalized to unit kinetic term, got {self.kinetic}; rescale first"
            )


def _gl_panel(f, a: float, b: float) -> float:
    x = 0.5 * (b - a) * _GL_NODES + 0.5 * (a + b)
    return 0.5 * (b - a) * float(np.dot(_GL_WEIGHTS, f(x)))


def adaptive_quad(f, a: float, b: float, rel_tol: float = 1e-10, max_depth: int = 48) -> float:
    """Adaptive 20-point Gauss-Legendre on [a, b].

    The error budget is split proportionally to subinterval length, so
    the final sum meets rel_tol against the first whole-interval
    estimate's scale.
    """
    if b <= a:
        return 0.0
    whole = _gl_panel(f, a, b)
    scale = max(abs(whole), 1e-300)
    total = 0.0
    stack = [(a, b, whole, 0)]
    while stack:
        a0, b0, w, depth = stack.pop()
        m = 0.5 * (a0 + b0)
        left = _gl_panel(f, a0, m)
        right = _gl_panel(f, m, b0)
        if abs(left + right - w) <= rel_tol * scale * (b0 - a0) / (b - a) or depth >= max_depth:
            total += left + right
        else:
            stack.append((a0, m, left, depth + 1))
            stack.append((m, b0, right, depth + 1))
    return total


def sublevel_intervals(V: Potential, s: float) -> list[tuple[float, float]]:
    """Disjoint maximal intervals where V < s, endpoints to ~1e-12 relative.

    Dense scan (4096 samples per decade of span) for sign changes of
    V - s, then bisection on each bracket.  Tangential touch points have
    measure zero and are deliberately ignored.
    """
    vmin, _ = V.min_value()
    if s <= vmin:
        return []
    if V.degree < 2:
        raise ValueError("sublevel set is unbounded for a constant potential below s")
    span = max(1.0, 2.0 * V.critical_radius())
    for _ in range(200):
        if V(span) > s:
            break
        span *= 2.0
    else:
        raise ValueError("potential never exceeds s; not coercive?")
    n_samples = 4096 * max(1, int(math.ceil(math.log10(2.0 * span))))
    grid = np.linspace(-span, span, n_samples)
    vals = V(grid) - s
    roots: list[float] = []
    for i in np.nonzero((vals[:-1] * vals[1:] < 0.0) | (vals[:-1] == 0.0))[0]:
        a, b = float(grid[i]), float(grid[i + 1])
        fa = vals[i]
        if fa == 0.0:
            roots.append(a)
            continue
        for _ in range(200):
            m = 0.5 * (a + b)
            fm = V(m) - s
            if (fm < 0.0) == (fa < 0.0):
                a, fa = m, fm
            else:
                b = m
            if b - a <= 1e-12 * max(1.0, abs(a), abs(b)):
                break
        roots.append(0.5 * (a + b))
    pts = [float(-span)] + sorted(roots) + [float(span)]
    out = []
    for p, q in zip(pts[:-1], pts[1:]):
        if q > p and V(0.5 * (p + q)) < s:
            out.append((p, q))
    if out and (out[0][0] == -span or out[-1][1] == span):
        raise ValueError("sublevel set touches the scan boundary; potential not coercive?")
    return out


def phase_space_volume(sym: WeylSymbol, s: float, rel_tol: float = 1e-10) -> float:
    """Area of {xi^2 + V(u) < s} = integral of 2 sqrt((s - V)_+).

    Each sublevel interval is split at its midpoint and integrated in
    the variable w with u = endpoint +/- w^2, which removes the
    square-root singularity at the turning points.
    """
    V = sym.potential
    total = 0.0
    for a, b in sublevel_intervals(V, s):
        mid = 0.5 * (a + b)

        def from_left(w, a=a):
            return 4.0 * w * np.sqrt(np.maximum(s - V(a + w * w), 0.0))

        def from_right(w, b=b):
            return 4.0 * w * np.sqrt(np.maximum(s - V(b - w * w), 0.0))

        total += adaptive_quad(from_left, 0.0, math.sqrt(mid - a), rel_tol)
        total += adaptive_quad(from_right, 0.0, math.sqrt(b - mid), rel_tol)
    return total


def mc_volume(sym: WeylSymbol, s: float, n_samples: int = 100_000, seed: int | None = 0):
    """Monte Carlo cross-check of phase_space_volume: (estimate, stderr)."""
    intervals = sublevel_intervals(sym.potential, s)
    if not intervals:
        return (0.0, 0.0)
    u_max = max(abs(intervals[0][0]), abs(intervals[-1][1]))
    vmin, _ = sym.potential.min_value()
    xi_max = math.sqrt(max(s - vmin, 0.0))
    rng = np.random.default_rng(seed)
    u = rng.uniform(-u_max, u_max, n_samples)
    xi = rng.uniform(-xi_max, xi_max, n_samples)
    p = float(np.mean(xi * xi + sym.potential(u) < s))
    box = 4.0 * u_max * xi_max
    return (p * box, box * math.sqrt(max(p * (1.0 - p), 0.0) / n_samples))


def weyl_ratio(
    op: SchrodingerOp,
    s: float,
    kappa: float = 4.0,
    points_per_wave: int = 10,
    max_n: int = 1 << 21,
) -> float:
    """2*pi*N(s) / volume(s); tends to 1 as s grows."""
    if op.kinetic != 1.0:
        raise ValueError("weyl_ratio needs a unit kinetic term; rescale the operator first")
    dom_L, dom_n = auto_domain(op, s, kappa=kappa, points_per_wave=points_per_wave, max_n=max_n)
    count = sturm_count(discretize(op, dom_L, dom_n), s)
    vol = phase_space_volume(WeylSymbol(op.potential), s)
    if vol <= 0.0:
        raise ValueError(f"empty phase space at s={s}")
    return 2.0 * math.pi * count / vol


def _loglog_slope(xs, ys) -> float | None:
    """Least-squares slope of log y against log x, ignoring zero counts."""
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if y > 0]
    if len(pts) < 2:
        return None
    lx, ly = zip(*pts)
    return float(np.polyfit(lx, ly, 1)[0])


def counting_bound_check(
    group: Group,
    points: list[DualPoint],
    s_grid: list[float],
    kappa: float = 4.0,
    points_per_wave: int = 10,
    max_n: int = 1 << 21,
) -> dict:
    """Check eigenvalue counts against the homogeneous growth cap.

    For every dual point, N(s) is counted over the s-grid and compared
    with s^(3/2) (Engel) or s^(5/2) (Cartan): ratios must stay bounded
    with a non-increasing trend, and fitted slopes must stay below the
    cap.  Returns a JSON-ready report.
    """
    exponent = 1.5 if group is Group.ENGEL else 2.5
    slope_cap = exponent + 0.2
    rows = []
    all_ratios: list[float] = []
    ok = True
    for pt in points:
        counts = [
            count_at_dual_point(pt, s, kappa=kappa, points_per_wave=points_per_wave, max_n=max_n)
            for s in s_grid
        ]
        ratios = [n / s**exponent for n, s in zip(counts, s_grid)]
        slope = _loglog_slope(s_grid, counts)
        trend = _loglog_slope(s_grid, [r if r > 0 else 0 for r in ratios])
        if slope is not None and slope > slope_cap:
            ok = False
        if trend is not None and trend > 0.05:
            ok = False
        all_ratios.extend(r for r in ratios if r > 0)
        rows.append(
            {
                "lam": pt.lam,
                "mu": pt.mu,
                "nu": pt.nu,
                "counts": counts,
                "ratios": ratios,
                "slope": slope,
            }
        )
    return {
        "group": group.value,
        "s_grid": list(map(float, s_grid)),
        "exponent": exponent,
        "slope_cap": slope_cap,
        "points": rows,
        "empirical_constant": max(all_ratios) if all_ratios else 0.0,
        "pass": ok,
    }
