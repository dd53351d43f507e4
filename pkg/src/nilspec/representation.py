"""Irreducible unitary actions on L^2(R), sampled on a uniform grid.

A ``DualPoint`` selects one representation from the generic family of
the Engel group (parameters lam, mu) or the Cartan group (lam, mu, nu).
Group elements act by a phase factor times a translation; the phase and
shift are assembled factor by factor from the coordinates of the second
kind, so the action is an exact homomorphism up to rounding.

Translations only make sense on the grid when the shift is a whole
number of steps, which is why callers pick grids whose step divides the
shifts they care about.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .groups import Group, GroupElement, basis_element, second_kind_coords

EPS_DUAL = 1e-6


@dataclass(frozen=True)
class DualPoint:
    """Parameters of one irreducible representation.

    Engel points use (lam, mu) with |lam| bounded away from zero; nu is
    unused and must stay 0.  Cartan points use (lam, mu, nu) and need
    lam^2 + mu^2 bounded away from zero.
    """

    group: Group
    lam: float
    mu: float = 0
    nu: float = 0

    def __post_init__(self):
        if self.group is Group.ENGEL:
            if abs(self.lam) < EPS_DUAL:
                raise ValueError(f"Engel dual point needs |lam| >= {EPS_DUAL}, got lam={self.lam}")
            if self.nu != 0:
                raise ValueError("Engel dual points have no nu parameter; leave it 0")
        else:
            if self.lam * self.lam + self.mu * self.mu < EPS_DUAL**2:
                raise ValueError(
                    f"Cartan dual point needs lam^2 + mu^2 >= {EPS_DUAL**2}, "
                    f"got lam={self.lam}, mu={self.mu}"
                )

    @property
    def c(self):
        """lam^2 + mu^2, the Cartan coupling constant."""
        return self.lam * self.lam + self.mu * self.mu


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples on the symmetric uniform grid u_k = -L + k * 2L/(n-1).

    ``boundary_loss`` records the fraction of squared mass a translation
    pushed off the grid; ``boundary_warning`` is set when that exceeded
    the tolerance of the call that produced this function.
    """

    half_width: float
    values: np.ndarray
    boundary_loss: float = 0.0
    boundary_warning: bool = False

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        if vals.ndim != 1 or vals.size < 2:
            raise ValueError("values must be a 1-d array with at least 2 samples")
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def step(self) -> float:
        return 2.0 * self.half_width / (self.n - 1)

    def u(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.n)

    def norm(self) -> float:
        """Trapezoid L^2 norm."""
        return float(np.sqrt(np.trapezoid(np.abs(self.values) ** 2, dx=self.step)))

    @classmethod
    def from_callable(cls, half_width: float, n: int, fn: Callable) -> "GridFunction":
        u = np.linspace(-half_width, half_width, n)
        return cls(half_width, np.asarray(fn(u), dtype=complex))


def gaussian(half_width: float, n: int, width: float = 1.0, center: float = 0.0) -> GridFunction:
    """Normalized Gaussian bump, the workhorse test state."""
    g = GridFunction.from_callable(
        half_width, n, lambda u: np.exp(-((u - center) ** 2) / (2.0 * width**2))
    )
    nrm = g.norm()
    return GridFunction(half_width, g.values / nrm)


@dataclass(frozen=True)
class FirstOrderSymbol:
    """Operator  deriv * d/du + i * m(u)  with m a real polynomial.

    ``mult`` lists the coefficients of m in ascending powers of u.  With
    exact (Fraction) dual parameters the coefficients stay exact.
    """

    deriv: object
    mult: tuple

    def m(self, u):
        """Evaluate m at u; Horner, exact for scalar exact inputs."""
        if isinstance(u, np.ndarray):
            acc = np.zeros_like(u, dtype=float)
            for c in reversed(self.mult):
                acc = acc * u + float(c)
            return acc
        acc = 0
        for c in reversed(self.mult):
            acc = acc * u + c
        return acc

    def apply(self, h: GridFunction, dh: GridFunction | None = None) -> GridFunction:
        u = h.u()
        vals = 1j * self.m(u) * h.values
        a = float(self.deriv)
        if a != 0.0:
            dv = dh.values if dh is not None else grid_derivative(h).values
            vals = vals + a * dv
        return GridFunction(h.half_width, vals)


def symbol_vector_field(point: DualPoint, i: int) -> FirstOrderSymbol:
    """Infinitesimal action of X_i in the representation at ``point``.

    The symbols close the same positive bracket table as the fields and
    their squares over the first layer reproduce the one-dimensional
    Schrodinger reductions used downstream.  Exact inputs (Fractions)
    give exact coefficients.
    """
    lam, mu, nu = point.lam, point.mu, point.nu
    if point.group is Group.ENGEL:
        if i == 1:
            return FirstOrderSymbol(1, ())
        if i == 2:
            return FirstOrderSymbol(0, (-(mu / 2) / lam, 0, lam / 2))
        if i == 3:
            return FirstOrderSymbol(0, (0, -lam))
        if i == 4:
            return FirstOrderSymbol(0, (lam,))
        raise ValueError(f"Engel symbol index must be in 1..4, got {i}")
    c = point.c
    if i == 1:
        return FirstOrderSymbol(lam / c, (-(nu * mu / 2) / c, 0, -(c * mu) / 2))
    if i == 2:
        return FirstOrderSymbol(mu / c, ((nu * lam / 2) / c, 0, (c * lam) / 2))
    if i == 3:
        return FirstOrderSymbol(0, (0, -c))
    if i == 4:
        return FirstOrderSymbol(0, (lam,))
    if i == 5:
        return FirstOrderSymbol(0, (mu,))
    raise ValueError(f"Cartan symbol index must be in 1..5, got {i}")


def phase_shift(point: DualPoint, g: GroupElement) -> tuple[float, tuple[float, float, float]]:
    """Shift and quadratic phase of the action of ``g``.

    pi(g) h (u) = exp(i (c0 + c1 u + c2 u^2)) * h(u + shift).

    Built by composing the one-parameter factors exp(a_i S_i) in the
    order given by the coordinates of the second kind; each factor
    exp(t (alpha d/du + i q(u))) contributes the phase
    integral_0^t q(u + alpha s) ds and the shift alpha t.
    """
    if point.group is not g.group:
        raise ValueError(f"dual point is {point.group.value}, element is {g.group.value}")
    a = [float(v) for v in second_kind_coords(g)]
    shift = 0.0
    c0 = c1 = c2 = 0.0
    for i in range(1, point.group.dim + 1):
        sym = symbol_vector_field(point, i)
        alpha = float(sym.deriv)
        q = [float(v) for v in sym.mult] + [0.0] * (3 - len(sym.mult))
        t = a[i - 1]
        f0 = q[0] * t + q[1] * alpha * t * t / 2.0 + q[2] * alpha * alpha * t**3 / 3.0
        f1 = q[1] * t + q[2] * alpha * t * t
        f2 = q[2] * t
        # this factor acts after the shift accumulated so far: u -> u + shift
        c0 += f0 + f1 * shift + f2 * shift * shift
        c1 += f1 + 2.0 * f2 * shift
        c2 += f2
        shift += alpha * t
    return shift, (c0, c1, c2)


class ShiftAlignmentError(ValueError):
    """Raised when a group element shifts by a non-integer number of grid steps."""

    def __init__(self, msg: str, suggested: GroupElement | None = None):
        super().__init__(msg)
        self.suggested = suggested


def _nearest_aligned(point: DualPoint, g: GroupElement, target_shift: float) -> GroupElement | None:
    """Nudge the first-layer coordinates of g so its shift equals target_shift."""
    s1 = float(symbol_vector_field(point, 1).deriv)
    s2 = float(symbol_vector_field(point, 2).deriv)
    coords = [float(c) for c in g.coords]
    if s1 != 0.0:
        coords[0] = (target_shift - s2 * coords[1]) / s1
    elif s2 != 0.0:
        coords[1] = (target_shift - s1 * coords[0]) / s2
    else:
        return None
    return GroupElement(g.group, tuple(coords))


def apply_rep(
    point: DualPoint,
    g: GroupElement,
    h: GridFunction,
    align_tol: float = 1e-9,
    boundary_tol: float = 1e-10,
) -> GridFunction:
    """Act by the group element ``g`` on the grid function ``h``.

    The translation must land on the grid: if the shift is not within
    ``align_tol`` steps of an integer, a ShiftAlignmentError carrying the
    nearest admissible element is raised.  Samples translated past the
    edge are dropped (zero extension); the dropped fraction of squared
    mass is recorded as ``boundary_loss`` on the result and flagged when
    it exceeds ``boundary_tol``.
    """
    shift, (c0, c1, c2) = phase_shift(point, g)
    step = h.step
    m = shift / step
    m_int = int(round(m))
    if abs(m - m_int) > align_tol * max(1.0, abs(m)):
        suggested = _nearest_aligned(point, g, m_int * step)
        hint = f"; nearest admissible element: {suggested.coords}" if suggested else ""
        raise ShiftAlignmentError(
            f"shift {shift:.6g} is {m:.9g} steps of {step:.6g}, not an integer{hint}",
            suggested,
        )
    vals = h.values
    n = vals.size
    out = np.zeros(n, dtype=complex)
    k0 = max(0, -m_int)
    k1 = min(n, n - m_int)
    if k1 > k0:
        out[k0:k1] = vals[k0 + m_int : k1 + m_int]
    total = float(np.sum(np.abs(vals) ** 2))
    if total > 0.0 and k1 > k0:
        kept = float(np.sum(np.abs(vals[k0 + m_int : k1 + m_int]) ** 2))
        loss = max(0.0, 1.0 - kept / total)
    elif total > 0.0:
        loss = 1.0
    else:
        loss = 0.0
    u = h.u()
    out *= np.exp(1j * (c0 + (c1 + c2 * u) * u))
    return GridFunction(h.half_width, out, boundary_loss=loss, boundary_warning=loss > boundary_tol)


def grid_derivative(h: GridFunction) -> GridFunction:
    """Five-point centered d/du with zero extension past the edges."""
    v = np.concatenate([np.zeros(2, complex), h.values, np.zeros(2, complex)])
    d = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h.step)
    return GridFunction(h.half_width, d)


def infinitesimal_check(
    point: DualPoint,
    i: int,
    h: GridFunction,
    t: float,
    dh: GridFunction | None = None,
) -> float:
    """Residual of the symmetric difference quotient against the symbol.

    Returns || (pi(t e_i) - pi(-t e_i)) h / (2t) - S_i h ||_2.  Decays
    at second order in t while the quotient's own discretization error
    stays subordinate, which is what the convergence tests pin down.
    """
    gp = basis_element(point.group, i, t)
    gm = basis_element(point.group, i, -t)
    lhs = (apply_rep(point, gp, h).values - apply_rep(point, gm, h).values) / (2.0 * t)
    rhs = symbol_vector_field(point, i).apply(h, dh).values
    return GridFunction(h.half_width, lhs - rhs).norm()


def grid_to_csv(h: GridFunction, path) -> None:
    """Write (u, re, im) rows; metadata rides in '#' comment lines."""
    with open(path, "w") as f:
        f.write(f"# half_width={h.half_width:.17g} n={h.n} boundary_loss={h.boundary_loss:.17g}\n")
        f.write("u,re,im\n")
        for u, v in zip(h.u(), h.values):
            f.write(f"{u:.17g},{v.real:.17g},{v.imag:.17g}\n")


def grid_from_csv(path) -> GridFunction:
    us: list[float] = []
    vs: list[complex] = []
    loss = 0.0
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("u,"):
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("boundary_loss="):
                        loss = float(tok.split("=", 1)[1])
                continue
            u, re, im = line.split(",")
            us.append(float(u))
            vs.append(complex(float(re), float(im)))
    if len(us) < 2:
        raise ValueError(f"{path}: no grid data found")
    return GridFunction(abs(us[0]), np.asarray(vs), boundary_loss=loss)
