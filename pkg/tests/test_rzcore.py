import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from eulerroots import rzcore as rz
from eulerroots.eulerpoly import UniPoly, multivariate_eulerian, univariate_eulerian
from eulerroots.oracle import real_roots, pencil_line_interval

A2 = {(): 1, (1,): 4, (1, 1): 1}


def test_lform_from_coeffs_univariate():
    L = rz.lform_from_coeffs(A2, (1,), 2)
    assert (L(), L(1), L(1, 1), L(1, 1, 1)) == (2, 4, 14, 52)


def test_lform_from_coeffs_multivariate():
    P = rz.poly_from_multiaffine(multivariate_eulerian(2))
    L = rz.lform_from_coeffs(P, (2, 3), 2)
    assert (L(2), L(3), L(2, 3)) == (1, 3, 2)


def test_lform_vanishing_square():
    L = rz.lform_from_coeffs({(): 1, (2,): 5}, (1, 2), 2)
    assert L(1, 1) == 0


def test_lform_normalisation():
    with pytest.raises(rz.NormalizationError):
        rz.lform_from_coeffs({(): 2, (1,): 1}, (1,), 1)


def test_lform_formulas_match_log_series():
    rng = random.Random(3)
    for _ in range(20):
        p = {(): 1}
        for key in rz._monomials((1, 2, 3), 3):
            if rng.random() < 0.6:
                p[key] = F(rng.randint(-6, 6), rng.randint(1, 3))
        a = rz.lform_from_coeffs(p, (1, 2, 3), 3)
        b = rz.lform_from_series(p, (1, 2, 3), 3, 3)
        assert a.same_values(b)


def test_mixed_cubic_sign():
    # 1 + x1 + x1^2 x2 has a nonzero x1^2 x2 coefficient and nothing else mixed
    p = {(): 1, (1,): 1, (1, 1, 2): 1}
    L = rz.lform_from_series(p, (1, 2), 3, 3)
    assert L(1, 1, 2) == 1
    assert rz.lform_from_coeffs(p, (1, 2), 3)(1, 1, 2) == 1


def test_lform_eulerian_values():
    L = rz.lform_eulerian(3)
    assert (L(2), L(3), L(4)) == (1, 3, 7)
    assert L(2, 3) == 2
    assert L(1) == 0 and L(1, 3) == 0
    assert rz.lform_eulerian(4).same_values(rz.lform_eulerian_generic(4))


@pytest.mark.parametrize("n", range(1, 13))
def test_lform_eulerian_closed_equals_generic(n):
    assert rz.lform_eulerian(n).same_values(rz.lform_eulerian_generic(n))


def test_lform_univariate_and_bivariate():
    u = rz.lform_univariate_eulerian(2)
    assert (u(), u(1), u(1, 1), u(1, 1, 1)) == (2, 4, 14, 52)
    for n in range(1, 15):
        assert rz.lform_univariate_eulerian(n).same_values(
            rz.lform_from_coeffs(rz.poly_from_uni(univariate_eulerian(n)), (1,), n))
        b = rz.lform_bivariate(n)
        assert (b(2), b(2, 2), b(2, 2, 2)) == (1, 1, 1)
        assert b(1, 2) == 2 ** n - 1
        assert b.same_values(rz.lform_from_coeffs(rz.poly_from_bipoly(rz.bivariate_eulerian(n)), (1, 2), n))


def test_lform_dlg_against_generic():
    for k in range(1, 16):
        b = rz.dlg_coefficients(k)
        p = {(): 1, (1,): b[0], (1, 1): b[1], (1, 1, 1): b[2]}
        assert rz.lform_dlg(k).same_values(rz.lform_from_coeffs(p, (1,), k))
    assert rz.dlg_coefficients(3) == (-99, 99, -1)


def test_pencil_univariate_n2():
    P = rz.pencil_from_lform(rz.lform_univariate_eulerian(2))
    assert P.A0 == ((2, 4), (4, 14))
    assert P.A[1] == ((4, 14), (14, 52))
    assert rz.det_pencil_line(P.A0, P.A[1]) == UniPoly((12, 48, 12))


def test_pencil_ghost_rows_vanish():
    P = rz.pencil_from_lform(rz.lform_eulerian(4))
    g = P.mold.index((1,))
    for M in (P.A0,) + tuple(P.A.values()):
        assert all(x == 0 for x in M[g])
    assert rz.pencil_from_lform(rz.lform_eulerian(4), "simplified").size == P.size - 1
    with pytest.raises(ValueError):
        rz.pencil_from_lform(rz.lform_eulerian(4), "other")


def test_is_psd_examples():
    assert rz.is_psd([[2, 4], [4, 14]])
    assert not rz.is_psd([[1, 2], [2, 1]])
    assert rz.is_psd([[0, 0], [0, 0]])
    assert rz.is_psd([[F(2), F(4)], [F(4), F(14)]], mode="interval", precision=64)
    with pytest.raises(ValueError):
        rz.is_psd([[1, 2], [3, 1]])
    with pytest.raises(rz.PSDIndeterminate):
        rz.is_psd([[1, 1], [1, 1]], mode="interval")


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=6, max_size=6))
def test_is_psd_agrees_with_gram(xs):
    # B^T B is always PSD; B^T B - I is PSD exactly when every eigenvalue of B^T B is >= 1
    B = [xs[0:3], xs[3:6]]
    G = [[sum(B[k][i] * B[k][j] for k in range(2)) for j in range(3)] for i in range(3)]
    assert rz.is_psd(G)
    assert not rz.is_psd([[G[i][j] - (i == j) for j in range(3)] for i in range(3)])


def test_quadratic_form_line():
    P = rz.pencil_from_lform(rz.lform_univariate_eulerian(2))
    assert rz.quadratic_form_line(P, (1, 1), (1,)) == (24, 84)
    assert rz.quadratic_form_line(P, (0, 0), (1,)) == (0, 0)
    for n in (3, 6):
        E = rz.pencil_from_lform(rz.lform_eulerian(n))
        e1 = [1] + [0] * (E.size - 1)
        c0, c1 = rz.quadratic_form_line(E, e1, [1] * n)
        assert (c0, c1) == (n, 2 ** (n + 1) - 2 - n)


def test_renegar_derivative():
    assert rz.renegar_derivative(A2, 1) == {(): 2, (1,): 4}
    assert rz.renegar_derivative(A2, 0) == A2
    assert rz.renegar_derivative(A2, 2) == {(): 2}
    with pytest.raises(ValueError):
        rz.renegar_derivative(A2, 3)


def test_renegar_invariance_small():
    assert rz.renegar_invariance_check({(): 1, (1,): 1}, [(F(k, 2),) for k in range(-6, 7)])
    B2 = rz.poly_from_bipoly(rz.bivariate_eulerian(2))
    grid = [(F(a, 3), F(b, 3)) for a in range(-6, 4) for b in range(-6, 4)]
    assert rz.renegar_invariance_check(B2, grid)


def test_renegar_invariance_seed0():
    _, p = rz.random_detrep(2, 3, 0)
    rng = random.Random(0)
    grid = [(F(rng.randint(-40, 40), 40), F(rng.randint(-40, 40), 40)) for _ in range(100)]
    assert rz.renegar_invariance_check(p, grid)


def test_extended_mold_matrix():
    M = rz.extended_mold_matrix(A2, 1)
    assert len(M) == 3
    assert M[0] == (2, 4, 14)
    assert M[2][2] == rz.lform_from_series(A2, (1,), 2, 4)(1, 1, 1, 1)
    assert rz.is_psd(M)
    assert rz.is_psd(rz.extended_mold_matrix({(): 1}, 1, variables=(1,), d=1))
    _, p = rz.random_detrep(2, 3, 0)
    assert rz.is_psd(rz.extended_mold_matrix(p, 1))
    with pytest.raises(ValueError):
        rz.extended_mold_matrix(A2, 2)


def test_trace_check_examples():
    diag = rz.DetRep(2, (((F(1), F(0)), (F(0), F(2))),))
    p = rz.expand_detrep(diag)
    assert p == {(): 1, (1,): 3, (1, 1): 2}
    assert rz.lform_from_coeffs(p, (1,), 2)(1) == 3
    I = ((F(1), F(0)), (F(0), F(1)))
    both = rz.DetRep(2, (I, I))
    assert rz.lform_from_coeffs(rz.expand_detrep(both), (1, 2), 2)(1, 2) == 2
    assert rz.trace_check(both)
    rep, p = rz.random_detrep(2, 3, 7)
    assert rz.trace_check(rep, p)


def test_random_detrep_limits():
    with pytest.raises(ValueError):
        rz.random_detrep(5, 2, 0)
    with pytest.raises(ValueError):
        rz.random_detrep(2, 9, 0)


def test_n2_det_roots():
    P = rz.pencil_from_lform(rz.lform_univariate_eulerian(2))
    roots = real_roots(rz.det_pencil_line(P.A0, P.A[1]), 100)
    ref = real_roots(UniPoly((1, 4, 1)), 100)
    for r, s in zip(roots, ref):
        assert r.lo <= s.hi and s.lo <= r.hi and r.width <= F(1, 2 ** 100)


@pytest.mark.parametrize("n", [1, 4, 9, 14])
def test_relaxation_contains_true_roots(n):
    P = rz.pencil_from_lform(rz.lform_eulerian(n))
    sec = pencil_line_interval(P, [1] * n, 64)
    # the PSD section contains [r, 0] for the root r nearest the origin, r = 1/q with q extreme
    r = real_roots(univariate_eulerian(n), 64)[-1]
    assert sec.lower.hi <= r.lo and sec.upper is None


@pytest.mark.parametrize("n", [10, 20, 30])
def test_eulerian_a0_psd(n):
    P = rz.pencil_from_lform(rz.lform_eulerian(n))
    assert rz.is_psd(P.A0)
