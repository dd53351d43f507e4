from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nilspec.diffops import Poly, commutator
from nilspec.groups import (
    Group,
    GroupElement,
    basis_element,
    bracket_table,
    dilate,
    format_coords,
    identity,
    inverse,
    left_translation_polys,
    multiply,
    parse_coords,
    second_kind_coords,
    vector_field,
)

GROUPS = [Group.ENGEL, Group.CARTAN]


def coords_strategy(group):
    frac = st.fractions(min_value=-4, max_value=4, max_denominator=8)
    return st.tuples(*[frac] * group.dim).map(lambda c: GroupElement(group, c))


def test_grading_data():
    assert Group.ENGEL.dim == 4
    assert Group.ENGEL.weights == (1, 1, 2, 3)
    assert Group.ENGEL.homogeneous_dim == 7
    assert Group.CARTAN.dim == 5
    assert Group.CARTAN.weights == (1, 1, 2, 3, 3)
    assert Group.CARTAN.homogeneous_dim == 10
    assert Group.ENGEL.step == 3 and Group.CARTAN.step == 3


def test_product_pinned_values():
    g = GroupElement(Group.ENGEL, (1, 0, 0, 0))
    h = GroupElement(Group.ENGEL, (0, 1, 0, 0))
    assert multiply(g, h).coords == (1, 1, -1, Fraction(1, 2))
    gc = GroupElement(Group.CARTAN, (1, 0, 0, 0, 0))
    hc = GroupElement(Group.CARTAN, (0, 1, 0, 0, 0))
    assert multiply(gc, hc).coords == (1, 1, -1, Fraction(1, 2), Fraction(1, 2))


def test_dilation_pinned_values():
    assert dilate(2, GroupElement(Group.ENGEL, (1, 1, 1, 1))).coords == (2, 2, 4, 8)
    assert dilate(2, GroupElement(Group.CARTAN, (1, 1, 1, 1, 1))).coords == (2, 2, 4, 8, 8)


def test_group_mismatch_rejected():
    g = GroupElement(Group.ENGEL, (1, 0, 0, 0))
    h = GroupElement(Group.CARTAN, (0, 1, 0, 0, 0))
    with pytest.raises(ValueError):
        multiply(g, h)
    with pytest.raises(ValueError):
        GroupElement(Group.ENGEL, (1, 2, 3))


def test_parse_and_format_roundtrip():
    g = parse_coords("1/2,-3,0,7/3", Group.ENGEL)
    assert g.coords == (Fraction(1, 2), -3, 0, Fraction(7, 3))
    assert format_coords(g) == "1/2,-3,0,7/3"
    with pytest.raises(ValueError):
        parse_coords("1,2,3", Group.CARTAN)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_associativity_exact(data):
    for group in GROUPS:
        g = data.draw(coords_strategy(group))
        h = data.draw(coords_strategy(group))
        k = data.draw(coords_strategy(group))
        assert multiply(multiply(g, h), k).coords == multiply(g, multiply(h, k)).coords


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_identity_and_inverse_exact(data):
    for group in GROUPS:
        g = data.draw(coords_strategy(group))
        e = identity(group)
        assert multiply(g, e).coords == g.coords
        assert multiply(e, g).coords == g.coords
        gi = inverse(g)
        assert multiply(g, gi).coords == e.coords
        assert multiply(gi, g).coords == e.coords


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_dilation_is_automorphism(data):
    r = Fraction(3, 2)
    for group in GROUPS:
        g = data.draw(coords_strategy(group))
        h = data.draw(coords_strategy(group))
        lhs = dilate(r, multiply(g, h)).coords
        rhs = multiply(dilate(r, g), dilate(r, h)).coords
        assert lhs == rhs


def _field_entry_oracle(group, i, x, k):
    """d/dt of coordinate k of x * (t e_i) at t=0; exact for cubics in t."""

    def f(t):
        return multiply(GroupElement(group, x), basis_element(group, i, t)).coords[k]

    p = [f(Fraction(t)) for t in range(4)]
    return (-11 * p[0] + 18 * p[1] - 9 * p[2] + 2 * p[3]) / 6


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_vector_field_coefficients_match_law(data):
    for group in GROUPS:
        x = data.draw(coords_strategy(group)).coords
        for i in range(1, group.dim + 1):
            op = vector_field(group, i)
            for k in range(group.dim):
                alpha = tuple(1 if j == k else 0 for j in range(group.dim))
                poly = op.terms.get(alpha, Poly(group.dim))
                assert poly.eval(x) == _field_entry_oracle(group, i, x, k)


def test_vector_field_pinned_tables():
    # Engel X2 = d2 - x1 d3 + (x1^2/2) d4
    op = vector_field(Group.ENGEL, 2)
    x1 = Poly.variable(4, 0)
    assert op.terms[(0, 1, 0, 0)] == Poly.constant(4, Fraction(1))
    assert op.terms[(0, 0, 1, 0)] == -x1
    assert op.terms[(0, 0, 0, 1)] == Fraction(1, 2) * x1 * x1
    # Cartan X3 = d3 - x1 d4 - x2 d5
    opc = vector_field(Group.CARTAN, 3)
    assert opc.terms[(0, 0, 0, 1, 0)] == -Poly.variable(5, 0)
    assert opc.terms[(0, 0, 0, 0, 1)] == -Poly.variable(5, 1)


def test_bracket_table_exact():
    for group in GROUPS:
        table = bracket_table(group)
        for i in range(1, group.dim + 1):
            for j in range(i + 1, group.dim + 1):
                br = commutator(vector_field(group, i), vector_field(group, j))
                k = table.get((i, j))
                if k is None:
                    assert br.is_zero(), (group, i, j)
                else:
                    assert br == vector_field(group, k), (group, i, j)


def test_stratification():
    # layer-1 fields and their brackets span every direction at the origin
    for group in GROUPS:
        seen = set()
        ops = {1: vector_field(group, 1), 2: vector_field(group, 2)}
        frontier = list(ops.values())
        for op in frontier:
            for alpha, p in op.terms.items():
                if p.eval([0] * group.dim) != 0:
                    seen.add(alpha)
        for _ in range(group.step - 1):
            frontier = [
                commutator(a, b) for a in (ops[1], ops[2]) for b in frontier
            ]
            for op in frontier:
                for alpha, p in op.terms.items():
                    if p.eval([0] * group.dim) != 0:
                        seen.add(alpha)
        assert len(seen) == group.dim


def _monomials(nvars, max_deg):
    out = []
    for k in range(nvars):
        e = [0] * nvars
        e[k] = 1
        out.append(tuple(e))
    out.append((2, 1) + (0,) * (nvars - 2))
    out.append((1, 0, 1) + (0,) * (nvars - 3))
    out.append((0, 2, 0, 1) + (0,) * (nvars - 4))
    return [m for m in out if sum(m) <= max_deg]


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_left_invariance_exact(data):
    for group in GROUPS:
        g = data.draw(coords_strategy(group))
        law = left_translation_polys(g)
        mono = data.draw(st.sampled_from(_monomials(group.dim, 4)))
        f = Poly(group.dim, {mono: Fraction(1)})
        for i in (1, 2, group.dim):
            op = vector_field(group, i)
            lhs = op.apply(f.subs(law))
            rhs = op.apply(f).subs(law)
            assert lhs == rhs, (group, i, mono)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_field_dilation_homogeneity(data):
    r = Fraction(2)
    for group in GROUPS:
        w = group.weights
        scaled = [Fraction(r) ** wj * Poly.variable(group.dim, j) for j, wj in enumerate(w)]
        mono = data.draw(st.sampled_from(_monomials(group.dim, 4)))
        f = Poly(group.dim, {mono: Fraction(1)})
        for i in range(1, group.dim + 1):
            op = vector_field(group, i)
            # X_i (f o delta_r) = r^{w_i} (X_i f) o delta_r
            lhs = op.apply(f.subs(scaled))
            rhs = Fraction(r) ** w[i - 1] * op.apply(f).subs(scaled)
            assert lhs == rhs, (group, i)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_second_kind_factorization(data):
    for group in GROUPS:
        g = data.draw(coords_strategy(group))
        a = second_kind_coords(g)
        prod = identity(group)
        for i, ai in enumerate(a, start=1):
            prod = multiply(prod, basis_element(group, i, ai))
        assert prod.coords == g.coords
