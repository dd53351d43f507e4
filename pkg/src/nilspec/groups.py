"""The Engel and Cartan groups.

Both are realized on R^4 / R^5 in exponential coordinates with a
polynomial group law, graded dilations, and an explicit left-invariant
frame X_1..X_dim.  Coordinate arithmetic is generic: Fractions give
exact results, floats work, and Poly coordinates let the tests treat
the law symbolically.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .diffops import Poly, PolyDiffOp

HALF = Fraction(1, 2)


class Group(enum.Enum):
    """Which of the two model groups, with its grading data."""

    ENGEL = "engel"
    CARTAN = "cartan"

    @property
    def dim(self) -> int:
        return 4 if self is Group.ENGEL else 5

    @property
    def weights(self) -> tuple[int, ...]:
        if self is Group.ENGEL:
            return (1, 1, 2, 3)
        return (1, 1, 2, 3, 3)

    @property
    def homogeneous_dim(self) -> int:
        return sum(self.weights)

    @property
    def step(self) -> int:
        return max(self.weights)


@dataclass(frozen=True)
class GroupElement:
    group: Group
    coords: tuple

    def __post_init__(self):
        coords = tuple(self.coords)
        if len(coords) != self.group.dim:
            raise ValueError(
                f"{self.group.value} element needs {self.group.dim} coordinates, got {len(coords)}"
            )
        object.__setattr__(self, "coords", coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k):
        return self.coords[k]


def identity(group: Group) -> GroupElement:
    return GroupElement(group, (0,) * group.dim)


def basis_element(group: Group, i: int, t=1) -> GroupElement:
    """t * e_i in coordinates (exp of t X_i through the origin)."""
    if not 1 <= i <= group.dim:
        raise ValueError(f"basis index must be in 1..{group.dim}, got {i}")
    coords = [0] * group.dim
    coords[i - 1] = t
    return GroupElement(group, tuple(coords))


def _check_same_group(g: GroupElement, h: GroupElement) -> None:
    if g.group is not h.group:
        raise ValueError(f"cannot combine {g.group.value} and {h.group.value} elements")


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    """Group product g * h."""
    _check_same_group(g, h)
    x, y = g.coords, h.coords
    if g.group is Group.ENGEL:
        return GroupElement(
            Group.ENGEL,
            (
                x[0] + y[0],
                x[1] + y[1],
                x[2] + y[2] - x[0] * y[1],
                x[3] + y[3] + HALF * x[0] * x[0] * y[1] - x[0] * y[2],
            ),
        )
    return GroupElement(
        Group.CARTAN,
        (
            x[0] + y[0],
            x[1] + y[1],
            x[2] + y[2] - x[0] * y[1],
            x[3] + y[3] + HALF * x[0] * x[0] * y[1] - x[0] * y[2],
            x[4] + y[4] + HALF * x[0] * y[1] * y[1] - x[1] * y[2] + x[0] * x[1] * y[1],
        ),
    )


def inverse(g: GroupElement) -> GroupElement:
    """Group inverse, solved coordinate by coordinate.

    The law is graded triangular: coordinate i of g*h is
    g_i + h_i + (terms in lower-index coordinates), so h = g^{-1} can be
    read off by back substitution without any division.
    """
    coords: list = [0] * g.group.dim
    for i in range(g.group.dim):
        prod = multiply(g, GroupElement(g.group, tuple(coords)))
        coords[i] = coords[i] - prod.coords[i]
    out = GroupElement(g.group, tuple(coords))
    return out


def dilate(r, g: GroupElement) -> GroupElement:
    """Anisotropic dilation: coordinate i scales by r**weight_i."""
    coords = tuple(c * r**w for c, w in zip(g.coords, g.group.weights))
    return GroupElement(g.group, coords)


def _symbolic_point(group: Group) -> GroupElement:
    n = group.dim
    return GroupElement(group, tuple(Poly.variable(n, k) for k in range(n)))


def left_translation_polys(g: GroupElement) -> list[Poly]:
    """Coordinates of g * x as polynomials in x (g numeric)."""
    n = g.group.dim
    gg = GroupElement(g.group, tuple(Poly.constant(n, c) for c in g.coords))
    return list(multiply(gg, _symbolic_point(g.group)).coords)


def vector_field(group: Group, i: int) -> PolyDiffOp:
    """Left-invariant field X_i as an exact differential operator.

    The frame is normalized so X_i agrees with d/dx_i at the origin.
    Nonzero brackets (see diffops.commutator): [X1,X2]=X3, [X1,X3]=X4,
    and on the Cartan group also [X2,X3]=X5.
    """
    n = group.dim
    if not 1 <= i <= n:
        raise ValueError(f"field index must be in 1..{n}, got {i}")
    x1 = Poly.variable(n, 0)
    one = Fraction(1)

    def d(k: int, coeff=one) -> PolyDiffOp:
        c = coeff if isinstance(coeff, Poly) else Poly.constant(n, coeff)
        return PolyDiffOp.partial(n, k, c)

    if group is Group.ENGEL:
        if i == 1:
            return d(0)
        if i == 2:
            return d(1) + d(2, -x1) + d(3, HALF * x1 * x1)
        if i == 3:
            return d(2) + d(3, -x1)
        return d(3)

    x2 = Poly.variable(n, 1)
    if i == 1:
        return d(0)
    if i == 2:
        return d(1) + d(2, -x1) + d(3, HALF * x1 * x1) + d(4, x1 * x2)
    if i == 3:
        return d(2) + d(3, -x1) + d(4, -x2)
    if i == 4:
        return d(3)
    return d(4)


def second_kind_coords(g: GroupElement) -> tuple:
    """Coordinates (a_1..a_dim) with g = exp(a_1 X_1) * ... * exp(a_dim X_dim).

    These drive the one-factor-at-a-time action of a group element in the
    irreducible representations; exp(a_i X_i) passes through basis_element.
    """
    x = g.coords
    if g.group is Group.ENGEL:
        x1, x2, x3, x4 = x
        return (
            x1,
            x2,
            x3 + x1 * x2,
            x4 + x1 * x3 + HALF * x1 * x1 * x2,
        )
    x1, x2, x3, x4, x5 = x
    return (
        x1,
        x2,
        x3 + x1 * x2,
        x4 + x1 * x3 + HALF * x1 * x1 * x2,
        x5 + x2 * x3 + HALF * x1 * x2 * x2,
    )


def parse_coords(text: str, group: Group) -> GroupElement:
    """Parse 'a,b,c,...' with exact rational entries."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != group.dim:
        raise ValueError(
            f"{group.value} element needs {group.dim} comma-separated coordinates, got {len(parts)}"
        )
    return GroupElement(group, tuple(Fraction(p) for p in parts))


def format_coords(g: GroupElement) -> str:
    return ",".join(str(c) for c in g.coords)


def bracket_table(group: Group) -> dict[tuple[int, int], int]:
    """Nonzero brackets as (i, j) -> k meaning [X_i, X_j] = X_k, i < j."""
    table = {(1, 2): 3, (1, 3): 4}
    if group is Group.CARTAN:
        table[(2, 3)] = 5
    return table
