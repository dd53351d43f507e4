"""L^p - L^q bounds for spectral multipliers phi(operator).

The operating bound is  sup_{s>0} phi(s) * s^(e/r)  with e the group's
trace growth exponent (3 for Engel, 4.5 for Cartan) and 1/r = 1/p - 1/q
over 1 < p <= 2 <= q < infinity.  Heat kernels and power decays admit
closed forms; everything else goes through a scan plus golden-section
search that must reproduce the closed forms to high accuracy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .groups import Group
from .dualtrace import GrowthFit

SEARCH_LO = 1e-8
SEARCH_HI = 1e8
_LOG_FLOOR = -1500.0  # stand-in for log(0) in the search


@dataclass(frozen=True)
class ExponentPair:
    """Lebesgue exponents with 1 < p <= 2 <= q < infinity."""

    p: float
    q: float

    def __post_init__(self):
        if not (1.0 < self.p <= 2.0 <= self.q) or not math.isfinite(self.q):
            raise ValueError(f"need 1 < p <= 2 <= q < inf, got p={self.p}, q={self.q}")

    @property
    def inv_r(self) -> float:
        """1/r = 1/p - 1/q; zero exactly when p = q = 2."""
        return 1.0 / self.p - 1.0 / self.q


def group_exponent(group: Group) -> float:
    """Trace growth exponent entering the multiplier bounds."""
    return 3.0 if group is Group.ENGEL else 4.5


@dataclass(frozen=True)
class PhiFunction:
    """Multiplier profile phi with phi(0) = 1, non-increasing.

    Kinds: 'power' is (1+s)^-decay, 'heat' is exp(-time*s), 'custom'
    interpolates a table on a geometric s-grid (log-linear interp,
    constant extension outside).
    """

    kind: str
    decay: float = 0.0
    time: float = 0.0
    s_table: tuple[float, ...] = ()
    phi_table: tuple[float, ...] = ()

    @classmethod
    def power(cls, decay: float) -> "PhiFunction":
        if decay < 0:
            raise ValueError(f"power decay must be >= 0, got {decay}")
        return cls("power", decay=float(decay))

    @classmethod
    def heat(cls, time: float) -> "PhiFunction":
        if not time > 0:
            raise ValueError(f"heat time must be positive, got {time}")
        return cls("heat", time=float(time))

    @classmethod
    def custom(cls, s_table, phi_table) -> "PhiFunction":
        s = tuple(float(v) for v in s_table)
        f = tuple(float(v) for v in phi_table)
        if len(s) < 2 or len(s) != len(f):
            raise ValueError("custom table needs matching s/phi sequences, length >= 2")
        if s[0] <= 0 or any(b <= a for a, b in zip(s[:-1], s[1:])):
            raise ValueError("custom s-table must be positive and strictly increasing")
        ratios = [b / a for a, b in zip(s[:-1], s[1:])]
        if any(abs(r - ratios[0]) > 1e-6 * ratios[0] for r in ratios):
            raise ValueError("custom s-table must be geometric (log grid)")
        if any(b > a for a, b in zip(f[:-1], f[1:])):
            raise ValueError("custom phi-table must be non-increasing")
        if f[0] > 1.0 or f[-1] < 0.0:
            raise ValueError("custom phi values must stay within [0, 1]")
        return cls("custom", s_table=s, phi_table=f)

    def __call__(self, s: float) -> float:
        if self.kind == "power":
            return (1.0 + s) ** (-self.decay)
        if self.kind == "heat":
            return math.exp(-self.time * s)
        if s <= self.s_table[0]:
            return self.phi_table[0]
        if s >= self.s_table[-1]:
            return self.phi_table[-1]
        return float(np.interp(math.log(s), np.log(self.s_table), self.phi_table))

    def describe(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "decay": self.decay}
        if self.kind == "heat":
            return {"kind": "heat", "time": self.time}
        return {"kind": "custom", "points": len(self.s_table)}


def _sup_closed(phi: PhiFunction, beta: float) -> float | None:
    """Exact sup of phi(s) * s^beta when a closed form exists (beta > 0)."""
    if phi.kind == "power":
        d = phi.decay
        if d < beta:
            return math.inf
        if d == beta:
            return 1.0
        return beta**beta * (d - beta) ** (d - beta) / d**d
    if phi.kind == "heat":
        return beta**beta * math.exp(-beta) * phi.time ** (-beta)
    return None


def _golden_max(g, a: float, b: float, iters: int = 90) -> tuple[float, float]:
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iters):
        if gc >= gd:
            b, d, gd = d, c, gc
            c = b - inv * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + inv * (b - a)
            gd = g(d)
    x = 0.5 * (a + b)
    return x, g(x)


def _sup_numeric(
    phi: PhiFunction, beta: float, lo: float = SEARCH_LO, hi: float = SEARCH_HI
) -> tuple[float, bool]:
    """(sup estimate, still-growing-at-right-edge flag).

    Coarse scan at half-decade resolution over [lo, hi] followed by
    golden-section refinement of the best bracket, all in log s.
    """
    if phi.kind == "custom":
        lo = max(lo, phi.s_table[0])
        hi = min(hi, phi.s_table[-1])

    def g(x: float) -> float:
        v = phi(math.exp(x))
        return (math.log(v) if v > 0.0 else _LOG_FLOOR) + beta * x

    xlo, xhi = math.log(lo), math.log(hi)
    n = max(3, int(math.ceil((xhi - xlo) / (0.5 * math.log(10.0)))) + 1)
    xs = np.linspace(xlo, xhi, n)
    gs = [g(x) for x in xs]
    i = int(np.argmax(gs))
    growing = i == n - 1 and gs[-1] > gs[-2]
    _, gbest = _golden_max(g, xs[max(i - 1, 0)], xs[min(i + 1, n - 1)])
    return math.exp(max(gbest, max(gs))), growing


def sup_bound(phi: PhiFunction, group: Group, pq: ExponentPair) -> float:
    """sup_{s>0} phi(s) * s^(e/r); math.inf when the product diverges.

    p = q = 2 gives exactly 1 (the sup is phi(0) = 1).  Closed forms are
    used for power and heat profiles; custom tables are searched
    numerically, flagging divergence when the product is still growing
    at the right end of the data.
    """
    beta = group_exponent(group) * pq.inv_r
    if beta == 0.0:
        return 1.0
    closed = _sup_closed(phi, beta)
    if closed is not None:
        return closed
    val, growing = _sup_numeric(phi, beta)
    return math.inf if growing else val


def sup_bound_numeric(phi: PhiFunction, group: Group, pq: ExponentPair) -> float:
    """Search-only variant of sup_bound, used to cross-check closed forms."""
    beta = group_exponent(group) * pq.inv_r
    if beta == 0.0:
        return 1.0
    val, growing = _sup_numeric(phi, beta)
    return math.inf if growing else val


def sup_record(phi: PhiFunction, group: Group, pq: ExponentPair) -> dict:
    """JSON-ready record of one sup-bound evaluation."""
    beta = group_exponent(group) * pq.inv_r
    sup = sup_bound(phi, group, pq)
    closed = 1.0 if beta == 0.0 else _sup_closed(phi, beta)
    numeric = None
    rel_err = None
    if math.isfinite(sup):
        numeric = sup_bound_numeric(phi, group, pq)
        if closed is not None and math.isfinite(closed) and closed > 0.0:
            rel_err = abs(numeric - closed) / closed
    return {
        "group": group.value,
        "p": pq.p,
        "q": pq.q,
        "phi": phi.describe(),
        "beta": beta,
        "sup": sup,
        "finite": math.isfinite(sup),
        "closed_form": closed,
        "numeric": numeric,
        "rel_err": rel_err,
    }


def sobolev_check(group: Group, a: float, b: float, pq: ExponentPair) -> tuple[bool, float]:
    """Is a regularity drop of a - b enough for the L^p -> L^q embedding?

    Returns (ok, margin) with margin = (a - b) - e/r; the boundary case
    margin = 0 passes, matching the finiteness of the power-profile sup
    at the critical decay.
    """
    margin = (a - b) - group_exponent(group) * pq.inv_r
    return (margin >= 0.0, margin)


def heat_decay(group: Group, pq: ExponentPair) -> tuple[float, float]:
    """Constants (C, beta) with  ||exp(-t op)||_{p->q} bound = C * t^-beta.

    beta = e/r and C = beta^beta * exp(-beta); C = 1 when p = q = 2.
    """
    beta = group_exponent(group) * pq.inv_r
    return (beta**beta * math.exp(-beta), beta)


def end_to_end_bound(phi: PhiFunction, group: Group, pq: ExponentPair, fit: GrowthFit) -> float:
    """Multiplier bound with the measured trace growth in place of s^e.

    Replaces s^e by the fitted exp(intercept) * s^slope, so the result
    is sup phi(s) * (fitted trace)^(1/r).  With slope equal to the
    group exponent and zero intercept this reduces to sup_bound exactly.
    """
    inv_r = pq.inv_r
    if inv_r == 0.0:
        return 1.0
    beta = fit.slope * inv_r
    scale = math.exp(fit.intercept * inv_r)
    if beta <= 0.0:
        raise ValueError(f"fitted slope {fit.slope} gives non-positive weight exponent")
    closed = _sup_closed(phi, beta)
    if closed is not None:
        return scale * closed
    val, growing = _sup_numeric(phi, beta)
    return math.inf if growing else scale * val
