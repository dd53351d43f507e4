import math

import numpy as np
import pytest
import scipy.linalg as sla

from nilspec.groups import Group
from nilspec.representation import DualPoint
from nilspec.schrodinger import (
    Potential,
    SchrodingerOp,
    TridiagSystem,
    auto_domain,
    build_symbol_cartan,
    build_symbol_engel,
    build_symbol_generalized,
    count_at_dual_point,
    discretize,
    eigenvalues_below,
    rescale,
    signs_for_exponents,
    sturm_count,
    sturm_counts,
)

# compact dense-spectrum oracle used throughout this module
def dense_eigs(T):
    return sla.eigh_tridiagonal(T.diag, T.off, eigvals_only=True)


def test_potential_validation():
    with pytest.raises(ValueError):
        Potential((0.0, 1.0))  # odd term
    with pytest.raises(ValueError):
        Potential((0.0, 0.0, -1.0))  # not coercive
    p = Potential((1.0, 0.0, 2.0, 0.0, 0.0))  # trailing zeros stripped
    assert p.coeffs == (1.0, 0.0, 2.0)
    assert p.degree == 2
    assert p(2.0) == 9.0


def test_potential_min_and_critical_radius():
    # double well u^4/4 - 2 u^2 + 11: minima at u = +/-2
    p = Potential((11.0, 0.0, -2.0, 0.0, 0.25))
    vmin, where = p.min_value()
    assert abs(vmin - 7.0) < 1e-12
    assert abs(where - 2.0) < 1e-12
    assert abs(p.critical_radius() - 2.0) < 1e-12
    flat = Potential((3.0,))
    assert flat.min_value() == (3.0, 0.0)


def test_engel_symbol_pinned_coeffs():
    op = build_symbol_engel(1.0, 0.0)
    assert op.kinetic == 1.0
    assert op.potential.coeffs == (2.0, 0.0, 1.0, 0.0, 0.25)
    op2 = build_symbol_engel(1.0, 2.0)
    assert op2.potential.coeffs == (3.0, 0.0, 0.0, 0.0, 0.25)
    assert op2.potential(0.0) == 3.0


def test_cartan_symbol_pinned_coeffs():
    op = build_symbol_cartan(1.0, 1.0, 0.0)
    assert op.kinetic == 0.5
    assert op.potential.coeffs == (4.0, 0.0, 4.0, 0.0, 2.0)
    op2 = build_symbol_cartan(1.0, 1.0, -4.0)
    assert op2.potential(0.0) == 6.0


def test_symbol_builders_reject_degenerate_parameters():
    with pytest.raises(ValueError):
        build_symbol_engel(0.0, 1.0)
    with pytest.raises(ValueError):
        build_symbol_cartan(1.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        build_symbol_cartan(0.0, 1.0, 0.0)


def test_generalized_reduces_to_base():
    for lam, mu in ((1.0, 2.0), (1.3, -0.7)):
        base = build_symbol_engel(lam, mu)
        gen = build_symbol_generalized(Group.ENGEL, (1, 1, 1, 1), lam, mu)
        assert gen.kinetic == base.kinetic
        np.testing.assert_allclose(gen.potential.coeffs, base.potential.coeffs, rtol=1e-13)
    base = build_symbol_cartan(1.0, 1.0, 2.0)
    gen = build_symbol_generalized(Group.CARTAN, (1, 1, 1, 1, 1), 1.0, 1.0, 2.0)
    assert gen.kinetic == base.kinetic
    np.testing.assert_allclose(gen.potential.coeffs, base.potential.coeffs, rtol=1e-13)


def test_generalized_raised_term_expansion():
    # Engel with the second direction raised to the 4th power at (1, 0):
    # (u^2/2)^4 = u^8/16 on top of u^2 + 1 + 1
    op = build_symbol_generalized(Group.ENGEL, (2, 1, 1, 1), 1.0, 0.0)
    want = (2.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0 / 16.0)
    np.testing.assert_allclose(op.potential.coeffs, want, rtol=0, atol=0)


def test_generalized_sign_rule_and_validation():
    assert signs_for_exponents((1, 2, 3, 4)) == (1, -1, 1, -1)
    with pytest.raises(ValueError):
        build_symbol_generalized(Group.ENGEL, (0, 1, 1, 1), 1.0, 0.0)
    with pytest.raises(ValueError):
        build_symbol_generalized(Group.ENGEL, (1, 1, 1), 1.0, 0.0)
    with pytest.raises(ValueError):
        build_symbol_generalized(Group.CARTAN, (1, 1, 1, 1), 1.0, 1.0)


def test_generalized_potential_nonnegative():
    rng = np.random.default_rng(5)
    u = np.linspace(-6.0, 6.0, 4001)
    for _ in range(20):
        ns = tuple(int(n) for n in rng.integers(1, 4, size=4))
        lam = rng.uniform(0.3, 2.0) * rng.choice([-1.0, 1.0])
        mu = rng.uniform(-2.0, 2.0)
        op = build_symbol_generalized(Group.ENGEL, ns, lam, mu)
        assert float(np.min(op.potential(u))) >= 0.0
        ns5 = tuple(int(n) for n in rng.integers(1, 4, size=5))
        mu_c = rng.uniform(0.3, 2.0)
        nu = rng.uniform(-3.0, 3.0)
        opc = build_symbol_generalized(Group.CARTAN, ns5, lam, mu_c, nu)
        assert float(np.min(opc.potential(u))) >= 0.0


def test_discretize_shape_and_values():
    op = SchrodingerOp(2.0, Potential((1.0, 0.0, 1.0)))
    T = discretize(op, 4.0, 9)
    h = 1.0
    assert T.step == h and T.half_width == 4.0
    assert T.n == 9
    np.testing.assert_allclose(T.off, -2.0)
    np.testing.assert_allclose(T.diag, 4.0 + 1.0 + np.linspace(-4, 4, 9) ** 2)
    with pytest.raises(ValueError):
        discretize(op, 4.0, 2)
    with pytest.raises(ValueError):
        TridiagSystem(np.ones(5), np.ones(3))


def test_dirichlet_laplacian_closed_form():
    # V = 0: eigenvalues are (2a/h^2)(1 - cos(k pi / (n+1)))
    a, L, n = 1.7, 3.0, 500
    T = discretize(SchrodingerOp(a, Potential((0.0,))), L, n)
    h = T.step
    k = np.arange(1, n + 1)
    formula = 2.0 * a / h**2 * (1.0 - np.cos(k * math.pi / (n + 1)))
    s = float(formula[40]) + 1e-3
    got = eigenvalues_below(T, s, tol=1e-10)
    assert got.size == 41
    np.testing.assert_allclose(got, formula[:41], atol=1e-8 * formula[-1])


def test_sturm_matches_dense_on_random_matrices():
    rng = np.random.default_rng(17)
    for _ in range(25):
        n = int(rng.integers(3, 300))
        T = TridiagSystem(rng.normal(size=n) * 3, rng.normal(size=n - 1))
        w = dense_eigs(T)
        for s in rng.normal(size=4) * 4:
            assert sturm_count(T, s) == int(np.sum(w < s))


def test_sturm_counts_vectorized_consistent():
    rng = np.random.default_rng(23)
    T = TridiagSystem(rng.normal(size=130), rng.normal(size=129))
    shifts = rng.normal(size=40) * 3
    vec = sturm_counts(T, shifts)
    assert list(vec) == [sturm_count(T, s) for s in shifts]


def test_eigenvalues_below_vs_dense():
    op = build_symbol_engel(1.0, 0.0)
    T = discretize(op, 12.0, 2000)
    w = dense_eigs(T)
    got = eigenvalues_below(T, 20.0, tol=1e-9)
    want = w[w < 20.0]
    assert got.size == want.size
    np.testing.assert_allclose(got, want, atol=1e-6)


def test_engel_frozen_spectrum():
    # reference values from a dense solve at (L, n) = (12, 8192)
    T = discretize(build_symbol_engel(1.0, 0.0), 12.0, 8192)
    got = eigenvalues_below(T, 20.0, tol=1e-10)
    frozen = [3.141901, 5.639477, 8.500891, 11.633595, 14.990966, 18.542903]
    np.testing.assert_allclose(got, frozen, atol=5e-6)


def test_harmonic_oscillator_accuracy():
    # odd integers 1, 3, 5, ...; coarse grid lands near 1e-3, finer near 1e-5
    op = SchrodingerOp(1.0, Potential((0.0, 0.0, 1.0)))
    want = 2.0 * np.arange(10) + 1.0
    coarse = eigenvalues_below(discretize(op, 10.0, 2000), 20.0, tol=1e-10)
    assert coarse.size == 10
    assert float(np.max(np.abs(coarse - want))) < 2e-3
    fine = eigenvalues_below(discretize(op, 12.0, 8192), 20.0, tol=1e-10)
    assert float(np.max(np.abs(fine - want))) < 1e-4


def test_rescaling_identity():
    op = build_symbol_cartan(1.0, 1.0, 0.0)
    c = 2.0
    scaled = rescale(op, c)
    assert scaled.kinetic == 1.0
    L, n = 8.0, 1200
    s = 25.0
    assert sturm_count(discretize(scaled, L, n), c * s) == sturm_count(discretize(op, L, n), s)
    w = dense_eigs(discretize(op, L, n))
    w2 = dense_eigs(discretize(scaled, L, n))
    np.testing.assert_allclose(w2, c * w, rtol=1e-12)
    with pytest.raises(ValueError):
        rescale(op, 0.0)


def test_auto_domain_harmonic_example():
    op = SchrodingerOp(1.0, Potential((0.0, 0.0, 1.0)))
    L, n = auto_domain(op, 100.0)
    assert abs(L - 20.0) < 1e-6
    # count stable across one more refinement
    c1 = sturm_count(discretize(op, L, n), 100.0)
    c2 = sturm_count(discretize(op, L, 2 * n), 100.0)
    assert c1 == c2 == 50


def test_auto_domain_below_ground_state():
    op = build_symbol_engel(1.0, 0.0)
    L, n = auto_domain(op, 1.0)  # min V = 2 > 1
    assert sturm_count(discretize(op, L, n), 1.0) == 0


def test_auto_domain_rejects_bad_kappa():
    with pytest.raises(ValueError):
        auto_domain(build_symbol_engel(1.0, 0.0), 10.0, kappa=1.0)


def test_count_at_dual_point_engel():
    pt = DualPoint(Group.ENGEL, 1.0, 0.0)
    assert count_at_dual_point(pt, 20.0) == 6


def test_count_at_dual_point_cartan_matches_unscaled_dense():
    pt = DualPoint(Group.CARTAN, 1.0, 1.0, 0.0)
    got = count_at_dual_point(pt, 20.0)
    op = build_symbol_cartan(1.0, 1.0, 0.0)
    L, n = auto_domain(op, 20.0)
    w = dense_eigs(discretize(op, L, n))
    assert got == int(np.sum(w < 20.0))
    assert got > 0
