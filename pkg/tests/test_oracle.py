from fractions import Fraction as F

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from eulerroots import oracle as orc
from eulerroots import rzcore as rz
from eulerroots.eulerpoly import UniPoly, univariate_eulerian
from eulerroots.oracle import CertifiedInterval

TIGHT = F(1, 2 ** 100)


def encloses(ci, exact):
    lo = sympy.Rational(ci.lo.numerator, ci.lo.denominator)
    hi = sympy.Rational(ci.hi.numerator, ci.hi.denominator)
    return bool(lo <= exact) and bool(exact <= hi)


def test_certified_interval_basics():
    a = CertifiedInterval(F(1), F(2))
    assert a.width == 1 and a.mid == F(3, 2)
    assert a.contains(F(3, 2)) and not a.contains(3)
    assert a.certainly_lt(3) and a.certainly_le(2) and not a.certainly_lt(2)
    assert (-a) == CertifiedInterval(F(-2), F(-1))
    assert CertifiedInterval(F(-1), F(3)).abs() == CertifiedInterval(F(0), F(3))
    assert a.reciprocal() == CertifiedInterval(F(1, 2), F(1))
    with pytest.raises(ZeroDivisionError):
        CertifiedInterval(F(-1), F(1)).reciprocal()
    with pytest.raises(ValueError):
        CertifiedInterval(F(2), F(1))


def test_iv_round_trip():
    with orc.interval_precision(80):
        x = orc.to_iv(F(1, 3))
        back = orc.from_iv(x)
    assert back.contains(F(1, 3)) and back.width < F(1, 2 ** 75)


def test_real_roots_quadratic():
    r = orc.real_roots(UniPoly((1, 4, 1)), 100)
    assert len(r) == 2
    assert encloses(r[0], -2 - sympy.sqrt(3)) and encloses(r[1], -2 + sympy.sqrt(3))
    assert all(x.width <= TIGHT for x in r)


def test_real_roots_a3():
    r = orc.real_roots(univariate_eulerian(3), 100)
    assert encloses(r[0], -(5 + 2 * sympy.sqrt(6)))
    assert r[1] == CertifiedInterval.point(-1, 100)
    assert encloses(r[2], -(5 - 2 * sympy.sqrt(6)))


def test_real_roots_failures():
    with pytest.raises(orc.NotRealRooted):
        orc.real_roots(UniPoly((1, 0, 1)))
    assert orc.real_roots(UniPoly((3,))) == []


def test_repeated_roots():
    r = orc.real_roots(UniPoly((1, -2, 1)) * UniPoly((2, 1)), 60)
    assert [x.contains(v) for x, v in zip(r, (-2, 1))] == [True, True]


def test_extreme_abs_root():
    assert encloses(orc.extreme_abs_root(UniPoly((1, 4, 1)), 100), 2 + sympy.sqrt(3))
    assert encloses(orc.extreme_abs_root(univariate_eulerian(3), 100), 5 + 2 * sympy.sqrt(6))
    assert orc.extreme_abs_root(UniPoly((1, 1))).contains(1)


@pytest.mark.parametrize("n", [5, 11, 17])
def test_roots_against_mpmath(n):
    ours = orc.real_roots(univariate_eulerian(n), 80)
    ref = sorted(mpmath.polyroots(list(reversed(univariate_eulerian(n).coeffs)), maxsteps=400,
                                  extraprec=400))
    for a, b in zip(ours, ref):
        assert abs(float(a) - float(mpmath.re(b))) <= 1e-9 * max(1, abs(float(a)))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6, unique=True))
def test_sturm_isolation_on_products(roots):
    p = UniPoly((1,))
    for r in roots:
        p = p * UniPoly((-r, 1))
    out = orc.real_roots(p, 40)
    assert [x.contains(r) for x, r in zip(out, sorted(roots))] == [True] * len(roots)
    assert orc.sturm_count(p, F(-21), F(21)) == len(roots)


def test_interlaces():
    assert orc.interlaces(univariate_eulerian(2), univariate_eulerian(3))
    assert not orc.interlaces(UniPoly((-5, 1)), UniPoly((2, -3, 1)))


def test_pencil_line_interval_n2():
    P = rz.pencil_from_lform(rz.lform_univariate_eulerian(2))
    sec = orc.pencil_line_interval(P, (1,), 100)
    assert encloses(sec.lower, -2 + sympy.sqrt(3))
    assert sec.upper_unbounded and not sec.lower_unbounded


def test_pencil_line_interval_zero_pencil():
    zero = ((F(0), F(0)), (F(0), F(0)))
    P = rz.Pencil(((), (1,)), ((F(1), F(0)), (F(0), F(1))), {1: zero})
    sec = orc.pencil_line_interval(P, (1,))
    assert sec.lower_unbounded and sec.upper_unbounded


def test_pencil_line_interval_precondition():
    P = rz.Pencil(((), (1,)), ((F(1), F(2)), (F(2), F(1))), {1: ((F(1), F(0)), (F(0), F(1)))})
    with pytest.raises(orc.PreconditionError):
        orc.pencil_line_interval(P, (1,))


def test_kernel_vector():
    v = orc.kernel_vector([[0, 0], [0, 1]])
    assert abs(v[0] - 1) < 1e-30 and abs(v[1]) < 1e-30
    with pytest.raises(orc.NotNearSingular):
        orc.kernel_vector([[1, 0], [0, 1]])


def test_kernel_vector_at_pencil_endpoint():
    P = rz.pencil_from_lform(rz.lform_univariate_eulerian(2))
    t = orc.pencil_line_interval(P, (1,), 200).lower.mid
    M = P.at((t,))
    v = orc.kernel_vector(M, 200)
    with mpmath.workprec(200):
        res = [sum(mpmath.mpf(M[r][c].numerator) / M[r][c].denominator * v[c] for c in range(2))
               for r in range(2)]
        assert max(abs(x) for x in res) < mpmath.mpf(2) ** -50
        tm = mpmath.mpf(t.numerator) / t.denominator
        # first row (2 + 4t) v0 + (4 + 14t) v1 = 0
        ratio = -(4 + 14 * tm) / (2 + 4 * tm)
        assert abs(v[0] / v[1] - ratio) < mpmath.mpf(2) ** -50
