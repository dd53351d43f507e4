"""One-dimensional Schrodinger reductions  -a d^2/du^2 + V(u).

Each dual point of the Engel or Cartan group turns the model operator
into an operator of this form on L^2(R); the builders below produce the
exact polynomial potentials.  The rest of the module is the counting
machinery: symmetric finite differences with Dirichlet truncation,
Sturm bisection for eigenvalue counts, and automatic domain selection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .groups import Group
from .representation import EPS_DUAL, DualPoint


@dataclass(frozen=True)
class Potential:
    """Even real polynomial V(u) >= its minimum, coefficients ascending."""

    coeffs: tuple[float, ...]

    def __post_init__(self):
        cs = [float(c) for c in self.coeffs]
        while cs and cs[-1] == 0.0:
            cs.pop()
        if not cs:
            cs = [0.0]
        for k in range(1, len(cs), 2):
            if cs[k] != 0.0:
                raise ValueError(f"potential must be even; coefficient of u^{k} is {cs[k]}")
        if len(cs) > 1 and cs[-1] < 0.0:
            raise ValueError(f"leading coefficient must be positive, got {cs[-1]}")
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, u):
        if isinstance(u, np.ndarray):
            acc = np.zeros_like(u, dtype=float)
        else:
            acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def _real_critical_points(self) -> list[float]:
        if self.degree <= 0:
            return [0.0]
        der = npoly.polyder(np.asarray(self.coeffs))
        out = [0.0]
        for r in npoly.polyroots(der):
            if abs(r.imag) <= 1e-9 * max(1.0, abs(r)):
                out.append(float(r.real))
        return out

    def min_value(self) -> tuple[float, float]:
        """(min V, the nonnegative u where it is attained)."""
        best = min(self._real_critical_points(), key=lambda u: self(u))
        return (float(self(best)), abs(best))

    def critical_radius(self) -> float:
        """Largest |u| of any real critical point; V is monotone beyond it."""
        return max(abs(u) for u in self._real_critical_points())


@dataclass(frozen=True)
class SchrodingerOp:
    """-kinetic * d^2/du^2 + potential(u)."""

    kinetic: float
    potential: Potential

    def __post_init__(self):
        if not self.kinetic > 0:
            raise ValueError(f"kinetic coefficient must be positive, got {self.kinetic}")
        object.__setattr__(self, "kinetic", float(self.kinetic))


def rescale(op: SchrodingerOp, c: float) -> SchrodingerOp:
    """Multiply the whole operator by c > 0.

    Spectra scale exactly: an eigenvalue E of op becomes c*E, so
    counting below s for op equals counting below c*s for the rescaled
    operator.  Used to bring the Cartan reduction to unit kinetic term.
    """
    if not c > 0:
        raise ValueError(f"rescaling factor must be positive, got {c}")
    return SchrodingerOp(c * op.kinetic, Potential(tuple(c * v for v in op.potential.coeffs)))


def build_symbol_engel(lam: float, mu: float) -> SchrodingerOp:
    """Schrodinger reduction of the Engel model operator at (lam, mu).

    V(u) = (lam u^2 / 2 - mu / (2 lam))^2 + (lam u)^2 + lam^2 + lam^-2.
    """
    lam = float(lam)
    mu = float(mu)
    if abs(lam) < EPS_DUAL:
        raise ValueError(f"|lam| must be >= {EPS_DUAL} (lam^-2 term), got {lam}")
    coeffs = (
        mu * mu / (4.0 * lam * lam) + lam * lam + 1.0 / (lam * lam),
        0.0,
        lam * lam - mu / 2.0,
        0.0,
        lam * lam / 4.0,
    )
    return SchrodingerOp(1.0, Potential(coeffs))


def build_symbol_cartan(lam: float, mu: float, nu: float) -> SchrodingerOp:
    """Schrodinger reduction of the Cartan model operator at (lam, mu, nu).

    With c = lam^2 + mu^2:
    -(1/c) d^2/du^2 + (nu + c^2 u^2)^2/(4c) + c^2 u^2 + c + lam^-2 + mu^-2.
    Both lam and mu must be nonzero because of the inverse-square terms.
    """
    lam = float(lam)
    mu = float(mu)
    nu = float(nu)
    if abs(lam) < EPS_DUAL or abs(mu) < EPS_DUAL:
        raise ValueError(
            f"|lam| and |mu| must both be >= {EPS_DUAL} (inverse-square terms), "
            f"got lam={lam}, mu={mu}"
        )
    c = lam * lam + mu * mu
    coeffs = (
        nu * nu / (4.0 * c) + c + 1.0 / (lam * lam) + 1.0 / (mu * mu),
        0.0,
        nu * c / 2.0 + c * c,
        0.0,
        c**3 / 4.0,
    )
    return SchrodingerOp(1.0 / c, Potential(coeffs))


def signs_for_exponents(exponents) -> tuple[int, ...]:
    """Sign attached to each raised term: + for odd n (n = 1 + 2k), - for even."""
    return tuple(1 if n % 2 == 1 else -1 for n in exponents)


def build_symbol_generalized(
    group: Group, exponents, lam: float, mu: float, nu: float = 0.0
) -> SchrodingerOp:
    """Reduction of the generalized model family with raised powers.

    ``exponents`` are the integers n_j >= 1 attached, in order, to
      Engel:  X2^(2n), X3^(2n), X4^(2n), X4^(-2n)           (4 entries)
      Cartan: X3^(2n), X4^(2n), X5^(2n), X4^(-2n), X5^(-2n) (5 entries)
    Signs follow the parity rule (see signs_for_exponents); every raised
    term then contributes a nonnegative potential term, so V >= 0.

    The derivative-carrying directions (X1, and X2 on the Cartan group)
    stay at power two: raising them would leave the -a d^2/du^2 + V(u)
    class entirely.  All exponents equal to 1 reproduces the base
    builders exactly.
    """
    want = 4 if group is Group.ENGEL else 5
    exponents = tuple(int(n) for n in exponents)
    if len(exponents) != want:
        raise ValueError(f"{group.value} family takes {want} exponents, got {len(exponents)}")
    if any(n < 1 for n in exponents):
        raise ValueError(f"exponents must be integers >= 1, got {exponents}")
    lam = float(lam)
    mu = float(mu)
    nu = float(nu)

    def raised(m_coeffs, n):
        return npoly.polypow(np.asarray(m_coeffs, float), 2 * n, maxpower=max(16, 2 * n))

    if group is Group.ENGEL:
        if abs(lam) < EPS_DUAL:
            raise ValueError(f"|lam| must be >= {EPS_DUAL}, got {lam}")
        n2, n3, n4, n5 = exponents
        v = raised([-mu / (2.0 * lam), 0.0, lam / 2.0], n2)
        v = npoly.polyadd(v, raised([0.0, -lam], n3))
        v = npoly.polyadd(v, [lam ** (2 * n4) + lam ** (-2 * n5)])
        return SchrodingerOp(1.0, Potential(tuple(v)))

    if abs(lam) < EPS_DUAL or abs(mu) < EPS_DUAL:
        raise ValueError(
            f"|lam| and |mu| must both be >= {EPS_DUAL} (inverse terms), got lam={lam}, mu={mu}"
        )
    n3, n4, n5, n6, n7 = exponents
    c = lam * lam + mu * mu
    # fixed X1^2 + X2^2 block: kinetic 1/c plus the quartic well
    v = np.asarray([nu * nu / (4.0 * c), 0.0, nu * c / 2.0, 0.0, c**3 / 4.0])
    v = npoly.polyadd(v, raised([0.0, -c], n3))
    v = npoly.polyadd(v, [lam ** (2 * n4) + mu ** (2 * n5) + lam ** (-2 * n6) + mu ** (-2 * n7)])
    return SchrodingerOp(1.0 / c, Potential(tuple(v)))


@dataclass(frozen=True, eq=False)
class TridiagSystem:
    """Symmetric tridiagonal matrix: diagonal plus one off-diagonal band."""

    diag: np.ndarray
    off: np.ndarray
    half_width: float | None = None
    step: float | None = None

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.off, dtype=float)
        if d.ndim != 1 or d.size < 1:
            raise ValueError("diag must be a nonempty 1-d array")
        if e.shape != (d.size - 1,):
            raise ValueError(f"off-diagonal must have length {d.size - 1}, got {e.shape}")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "off", e)

    @property
    def n(self) -> int:
        return self.diag.size


def discretize(op: SchrodingerOp, half_width: float, n: int) -> TridiagSystem:
    """Symmetric second differences on n points of [-L, L], Dirichlet outside.

    diag_k = 2a/h^2 + V(u_k), off = -a/h^2, h = 2L/(n-1); the grid
    includes both endpoints, with the function taken to vanish beyond.
    """
    if n < 3:
        raise ValueError(f"need at least 3 grid points, got {n}")
    if not half_width > 0:
        raise ValueError(f"half_width must be positive, got {half_width}")
    h = 2.0 * half_width / (n - 1)
    u = np.linspace(-half_width, half_width, n)
    a_h2 = op.kinetic / (h * h)
    diag = 2.0 * a_h2 + op.potential(u)
    off = np.full(n - 1, -a_h2)
    return TridiagSystem(diag, off, half_width=half_width, step=h)


def _pivmin(e2_max: float) -> float:
    # LAPACK-style floor keeps the LDL^T recurrence away from 1/0
    return np.finfo(float).tiny * max(1.0, e2_max)


def sturm_count(T: TridiagSystem, s: float) -> int:
    """Number of eigenvalues strictly below s (Sturm / LDL^T sign count)."""
    ds = (T.diag - float(s)).tolist()
    if T.off.size:
        e2 = (T.off * T.off).tolist()
        pivmin = _pivmin(max(e2))
    else:
        e2 = []
        pivmin = _pivmin(0.0)
    piv = ds[0]
    if abs(piv) < pivmin:
        piv = -pivmin
    count = 1 if piv < 0.0 else 0
    for k in range(1, len(ds)):
        piv = ds[k] - e2[k - 1] / piv
        if abs(piv) < pivmin:
            piv = -pivmin
        if piv < 0.0:
            count += 1
    return count


def sturm_counts(T: TridiagSystem, shifts) -> np.ndarray:
    """Vectorized sturm_count over an array of shifts."""
    shifts = np.asarray(shifts, dtype=float)
    d = T.diag
    e2 = T.off * T.off
    pivmin = _pivmin(float(e2.max()) if e2.size else 0.0)
    piv = d[0] - shifts
    piv = np.where(np.abs(piv) < pivmin, -pivmin, piv)
    counts = (piv < 0.0).astype(np.int64)
    for k in range(1, d.size):
        piv = d[k] - shifts - e2[k - 1] / piv
        piv = np.where(np.abs(piv) < pivmin, -pivmin, piv)
        counts += piv < 0.0
    return counts


def eigenvalues_below(T: TridiagSystem, s: float, tol: float = 1e-8) -> np.ndarray:
    """All eigenvalues below s, each bracketed to width <= tol, ascending.

    Synchronized bisection: every iteration runs one vectorized Sturm
    pass at the current midpoints of all open brackets.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    m = sturm_count(T, s)
    if m == 0:
        return np.empty(0)
    lo_bound = float(np.min(T.diag)) - 2.0 * (float(np.max(np.abs(T.off))) if T.off.size else 0.0)
    lo = np.full(m, lo_bound)
    hi = np.full(m, float(s))
    ranks = np.arange(1, m + 1)
    for _ in range(200):
        if float(np.max(hi - lo)) <= tol:
            break
        mid = 0.5 * (lo + hi)
        counts = sturm_counts(T, mid)
        above = counts >= ranks
        hi = np.where(above, mid, hi)
        lo = np.where(above, lo, mid)
    return np.sort(0.5 * (lo + hi))


def auto_domain(
    op: SchrodingerOp,
    s: float,
    kappa: float = 4.0,
    points_per_wave: int = 10,
    max_n: int = 1 << 21,
) -> tuple[float, int]:
    """Pick (L, n) so Dirichlet truncation does not disturb counts below s.

    L is the outermost solution of V(L) = kappa*s, found by doubling and
    bisection; the step resolves the shortest wavelength sqrt(s/a) with
    ``points_per_wave`` points; n then doubles until the count below s
    is identical across two successive refinements.
    """
    if kappa <= 1.0:
        raise ValueError(f"kappa must exceed 1, got {kappa}")
    vmin, _ = op.potential.min_value()
    if s <= vmin:
        # nothing below s; any admissible grid counts zero
        return (1.0, 33)
    target = kappa * s
    crit = op.potential.critical_radius()
    if op.potential(crit) >= target:
        # already deep in the forbidden region beyond the last critical point
        half_width = 1.25 * crit + 1.0
    else:
        u_lo = crit
        u_hi = max(1.0, 2.0 * crit)
        for _ in range(200):
            if op.potential(u_hi) >= target:
                break
            u_hi *= 2.0
        else:
            raise ValueError("potential never reaches kappa*s; not coercive?")
        for _ in range(100):
            mid = 0.5 * (u_lo + u_hi)
            if op.potential(mid) < target:
                u_lo = mid
            else:
                u_hi = mid
            if u_hi - u_lo <= 1e-12 * max(1.0, u_hi):
                break
        half_width = u_hi
    h_max = math.pi / (points_per_wave * math.sqrt(s / op.kinetic))
    n = max(33, int(math.ceil(2.0 * half_width / h_max)) + 1)
    history: list[tuple[int, int]] = []
    while True:
        c = sturm_count(discretize(op, half_width, n), s)
        history.append((n, c))
        if len(history) >= 3 and history[-1][1] == history[-2][1] == history[-3][1]:
            return (half_width, history[-3][0])
        if n >= max_n:
            return (half_width, n)
        n *= 2


def count_at_dual_point(
    point: DualPoint,
    s: float,
    kappa: float = 4.0,
    points_per_wave: int = 10,
    max_n: int = 1 << 21,
) -> int:
    """Eigenvalue count below s for the model operator at one dual point.

    Cartan points go through the exact rescaling to unit kinetic term:
    counting the rescaled operator below c*s equals counting the raw
    reduction below s.
    """
    if point.group is Group.ENGEL:
        op = build_symbol_engel(point.lam, point.mu)
        level = float(s)
    else:
        c = point.c
        op = rescale(build_symbol_cartan(point.lam, point.mu, point.nu), c)
        level = float(c * s)
    dom_L, dom_n = auto_domain(op, level, kappa=kappa, points_per_wave=points_per_wave, max_n=max_n)
    return sturm_count(discretize(op, dom_L, dom_n), level)
