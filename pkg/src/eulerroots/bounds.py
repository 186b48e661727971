"""
Lower and upper bounds on the extreme root |q_1| of the Eulerian polynomial A_n.

Every radical is evaluated in outward-rounded interval arithmetic, so a
``BoundResult`` carries an interval guaranteed to contain the exact value of
the formula.  Lower bounds report the interval's lower end and upper bounds
its upper end.

Relaxation bounds come from a pencil A0 + t B and a vector v.  The section of
the pencil contains [q_n, 0] on the diagonal, so v^T (A0 + q_n B) v >= 0,
i.e. |q_n| <= v^T A0 v / v^T B v, and palindromicity (q_1 q_n = 1) turns
that into |q_1| >= v^T B v / v^T A0 v.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from mpmath import iv

from . import rzcore
from .eulerpoly import MultiAffinePoly, UniPoly, univariate_eulerian
from .oracle import (
    CertifiedInterval, from_iv, interval_precision, pencil_line_interval,
    roots_by_magnitude, to_iv,
)
from .permstat import eulerian_number

__all__ = [
    "METHODS", "BoundResult", "DlgState", "AsymptoticTemplate", "DomainError",
    "OrientationError", "DegenerateError", "PrecisionError", "CoefficientMismatch",
    "default_precision", "colucci", "mezo_majorant", "uni_relax_coefficients",
    "uni_relax_exact", "uni_vec11", "linearize_bound", "unit_binary_bound",
    "unit_binary_limit", "optimize_quadratic_ratio", "bivar_bound",
    "multi_v1_closed_form", "multi_v1_bound", "multi_v2_closed_form",
    "multi_v2_bound", "eulerian_tail_coeff", "dlg_step", "dlg_deg3_closed",
    "root_power_transform", "multivariate_dlg", "chi1", "sobolev_bracket",
    "sobolev_minorant", "sobolev_majorant", "viete_raw_estimate",
    "dlg_relax_bound", "pencil_bisect_bound", "stanley_growth_check",
    "globality_bound", "TEMPLATES", "asymptotic_residual", "compute_bound",
    "eulerian_pencil", "vector_quadratics",
]

METHODS = (
    "colucci", "mezo_majorant", "uni_relax", "uni_vec11", "unit_binary", "bivar",
    "multi_v1", "multi_v2", "sobolev_min", "sobolev_maj", "dlg_raw", "dlg_relax",
    "pencil_bisect", "custom_vector",
)
UPPER_METHODS = ("mezo_majorant", "sobolev_maj")


class DomainError(ValueError):
    """Formula undefined or its proof hypotheses fail at this index."""


class OrientationError(ValueError):
    """Linearisation slope is not positive."""


class DegenerateError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    """Interval too wide to decide; retry with more bits."""


class CoefficientMismatch(AssertionError):
    """Closed form and generic path disagree."""


def default_precision(n: int) -> int:
    return max(128, 16 * n)


@dataclass(frozen=True)
class BoundResult:
    method: str
    n: int
    value: CertifiedInterval
    side: str
    precision_bits: int
    param: int | None = None
    extras: Mapping[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.side not in ("lower", "upper"):
            raise ValueError(f"side must be lower or upper, got {self.side!r}")

    @property
    def reported(self) -> Fraction:
        """The safe end of the interval."""
        return self.value.lo if self.side == "lower" else self.value.hi

    def __float__(self) -> float:
        return float(self.reported)


# --------------------------------------------------------------------------
# interval helpers

def _iv(x):
    return to_iv(x)


def _sqrt(x, what: str = "radicand"):
    if x.b < 0:
        raise DomainError(f"negative {what}")
    if x.a < 0:
        raise DomainError(f"{what} not certified non-negative at {iv.prec} bits")
    return iv.sqrt(x)


def _result(method, n, x, side, bits, param=None, **extras) -> BoundResult:
    val = x if isinstance(x, CertifiedInterval) else from_iv(x, bits)
    return BoundResult(method, n, val, side, bits, param, extras)


def _exact(method, n, q: Fraction, side, bits, param=None, **extras) -> BoundResult:
    return BoundResult(method, n, CertifiedInterval.point(q, bits), side, bits, param, extras)


# --------------------------------------------------------------------------
# classical bounds

def colucci(n: int, precision: int | None = None) -> BoundResult:
    """2^{n+1}/n - 2/n - 1."""
    if n < 1:
        raise DomainError("n >= 1 required")
    bits = precision or default_precision(n)
    return _exact("colucci", n, Fraction(2 ** (n + 1) - 2, n) - 1, "lower", bits)


def mezo_majorant(n: int, precision: int | None = None) -> BoundResult:
    """Laguerre-Samuelson type upper bound from the two top Eulerian numbers."""
    if n < 2:
        raise DomainError("n >= 2 required")
    bits = precision or default_precision(n)
    e1 = eulerian_number(n + 1, n - 1)
    e2 = eulerian_number(n + 1, n - 2)
    rad = Fraction(e1 ** 2) - Fraction(2 * n, n - 1) * e2
    if rad < 0:
        raise DomainError(f"negative radicand at n={n}")
    with interval_precision(bits):
        x = _iv(Fraction(e1, n)) + _iv(Fraction(n - 1, n)) * _sqrt(_iv(rad))
        return _result("mezo_majorant", n, x, "upper", bits)


# --------------------------------------------------------------------------
# univariate relaxation

def _uni_closed_abc(n: int) -> tuple[int, int, int]:
    c = -4 * (2 ** n - 1) ** 2 + (-2 + 2 ** (n + 2) - 2 * 3 ** (n + 1) + 4 ** (n + 1)) * n
    b = (-4 * (2 ** n - 1) * (1 + 2 ** (2 * n + 1) - 3 ** (n + 1))
         + 2 * (1 - 2 ** n + 2 ** (2 * n + 3) + 2 ** (3 * n + 2) - 3 ** (n + 1)
                - 2 ** n * 3 ** (n + 2)) * n)
    a = (-2 ** (n + 2) - 5 * 2 ** (2 * n + 3) + 8 * 3 ** (n + 1) + 6 ** (n + 2) + 8 ** (n + 1)
         - 4 * 9 ** (n + 1) + 12 ** (n + 1)
         - 2 * (2 ** n + 5 * 2 ** (2 * n + 1) + 2 ** (3 * n + 2) - 2 * 3 ** (n + 1)
                - 2 ** n * 3 ** (n + 2)) * n)
    return a, b, c


def _pencil_abc(L: rzcore.LFormTable) -> tuple[Fraction, Fraction, Fraction]:
    """det([[L1, Lx], [Lx, Lx2]] + t [[Lx, Lx2], [Lx2, Lx3]]) = c + b t + a t^2."""
    l0, l1, l2, l3 = L(), L(1), L(1, 1), L(1, 1, 1)
    return l1 * l3 - l2 * l2, l0 * l3 - l1 * l2, l0 * l2 - l1 * l1


def uni_relax_coefficients(n: int) -> tuple[int, int, int]:
    """(a, b, c) of det(A0 + t A1) = c + b t + a t^2 for the univariate pencil of A_n.

    Computed from the closed forms and from the pencil; the two must agree.
    """
    if n < 1:
        raise DomainError("n >= 1 required")
    closed = _uni_closed_abc(n)
    P = rzcore.pencil_from_lform(rzcore.lform_univariate_eulerian(n))
    det = rzcore.det_pencil_line(P.A0, P.A[1])
    from_pencil = (det[2], det[1], det[0])
    if tuple(Fraction(x) for x in closed) != from_pencil:
        raise CoefficientMismatch(f"closed form {closed} != pencil {from_pencil} at n={n}")
    return closed


def uni_relax_exact(n: int, precision: int | None = None) -> BoundResult:
    """Optimal bound of the univariate relaxation, 2a / (b - sqrt(b^2 - 4ac)).

    Evaluated as (b + sqrt(b^2 - 4ac)) / (2c), the same number without the
    cancellation in the denominator.
    """
    if n < 2:
        raise DomainError("n >= 2 required")
    bits = precision or default_precision(n)
    a, b, c = uni_relax_coefficients(n)
    disc = b * b - 4 * a * c
    if c <= 0 or b <= 0:
        raise DomainError(f"unexpected signs b={b}, c={c}")
    with interval_precision(bits):
        x = (_iv(b) + _sqrt(_iv(disc), "discriminant")) / _iv(2 * c)
        return _result("uni_relax", n, x, "lower", bits, extras={"abc": (a, b, c)})


@lru_cache(maxsize=64)
def eulerian_pencil(n: int, variant: str = "full") -> rzcore.Pencil:
    return rzcore.pencil_from_lform(rzcore.lform_eulerian(n), variant)


@lru_cache(maxsize=64)
def _univariate_pencil(n: int) -> rzcore.Pencil:
    return rzcore.pencil_from_lform(rzcore.lform_univariate_eulerian(n))


def linearize_bound(P: rzcore.Pencil, v: Sequence[object], w, n: int | None = None,
                    method: str = "custom_vector", precision: int = 128,
                    param: int | None = None) -> BoundResult:
    """|q_1| >= v^T B v / v^T A0 v for a palindromic source polynomial."""
    c0, c1 = rzcore.quadratic_form_line(P, v, w)
    if c1 <= 0:
        raise OrientationError(f"slope v^T B v = {c1} is not positive")
    if c0 == 0:
        raise DegenerateError("v^T A0 v = 0")
    if c0 < 0:
        raise DegenerateError("v^T A0 v < 0; A0 is not PSD")
    return _exact(method, n if n is not None else 0, c1 / c0, "lower", precision, param,
                  c0=c0, c1=c1)


def uni_vec11(n: int, precision: int | None = None) -> BoundResult:
    """Univariate relaxation linearised through v = (1, 1)."""
    return linearize_bound(_univariate_pencil(n), (1, 1), (1,), n, "uni_vec11",
                           precision or default_precision(n))


def unit_binary_bound(n: int, j: int, precision: int | None = None,
                      crosscheck: bool = True) -> BoundResult:
    """Simplified multivariate pencil linearised through the unit vector at x_j."""
    if n < 1 or not 2 <= j <= n + 1:
        raise DomainError(f"need 2 <= j <= n+1, got n={n}, j={j}")
    num = 1 - 2 ** (j - 1) + 2 ** (j + n) - Fraction(2) ** (2 - j + n) * 3 ** (j - 1)
    den = 2 ** (j - 1) - 1
    if num <= 0:
        raise DomainError(f"non-positive numerator at n={n}, j={j}")
    value = Fraction(num) / den
    bits = precision or default_precision(n)
    if crosscheck:
        P = eulerian_pencil(n, "simplified")
        v = [0] * P.size
        v[P.mold.index((j,))] = 1
        lin = linearize_bound(P, v, {i: 1 for i in P.variables}, n, "unit_binary", bits, j)
        if lin.reported != value:
            raise CoefficientMismatch(f"unit vector at j={j}: {lin.reported} != {value}")
    return _exact("unit_binary", n, value, "lower", bits, j)


def unit_binary_limit(i: int) -> Fraction:
    """Limit of unit_binary(n, i) / unit_binary(n, n+1) as n grows."""
    return Fraction(3 * 4 ** i - 4 * 3 ** i, 3 * (2 ** i - 2) * 2 ** i)


# --------------------------------------------------------------------------
# ratio optimisation

def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _eval(c, y):
    acc = 0
    for x in reversed(c):
        acc = acc * y + x
    return acc


def _quad_root(A, B, C, branch: int):
    """(-B + branch sqrt(B^2 - 4AC)) / (2A) as an interval, avoiding cancellation."""
    disc = _iv(B * B - 4 * A * C)
    s = _sqrt(disc, "discriminant")
    if (branch < 0 and B >= 0) or (branch > 0 and B <= 0):
        return (-_iv(B) + branch * s) / _iv(2 * A)
    return _iv(2 * C) / (-_iv(B) - branch * s)


def optimize_quadratic_ratio(Nc: Sequence[object], Dc: Sequence[object], which: str = "max",
                             precision: int = 128):
    """Extremum of N(y)/D(y) for quadratics given as (c0, c1, c2).

    Critical points are the zeros of g = N'D - ND'.  At a zero r,
    (N/D)'' = g'(r) / D(r)^2 and g'(r) = +-sqrt(disc) on the two branches,
    so the maximum is always the ``-sqrt`` branch and the minimum the
    ``+sqrt`` branch, whatever the sign of g's leading coefficient.
    Returns (y*, N(y*)/D(y*)) as certified intervals.
    """
    if which not in ("max", "min"):
        raise ValueError("which must be 'max' or 'min'")
    N = [Fraction(x) for x in Nc] + [Fraction(0)] * (3 - len(Nc))
    D = [Fraction(x) for x in Dc] + [Fraction(0)] * (3 - len(Dc))
    if D[1] ** 2 - 4 * D[0] * D[2] >= 0 and D[2] != 0:
        raise DomainError("denominator has real roots")
    if D[2] == 0 and D[1] != 0:
        raise DomainError("denominator has a real root")
    dN = [N[1], 2 * N[2]]
    dD = [D[1], 2 * D[2]]
    g = [x - y for x, y in itertools.zip_longest(_poly_mul(dN, D), _poly_mul(N, dD), fillvalue=0)]
    while len(g) > 1 and g[-1] == 0:
        g.pop()
    if len(g) > 3:
        raise AssertionError("N'D - ND' must have degree <= 2")
    branch = -1 if which == "max" else 1
    with interval_precision(precision):
        if len(g) == 3:
            C, B, A = g
            if B * B - 4 * A * C < 0:
                raise DegenerateError("ratio has no critical point")
            y = _quad_root(A, B, C, branch)
        elif len(g) == 2:
            C, B = g
            if (B < 0) != (which == "max"):
                raise DegenerateError(f"ratio has no interior {which}imum")
            y = -_iv(C) / _iv(B)
        else:
            raise DegenerateError("N'D - ND' is constant")
        num, den = _eval([_iv(x) for x in N], y), _eval([_iv(x) for x in D], y)
        if not den.a > 0:
            raise DomainError("D(y*) not certified positive")
        return from_iv(y, precision), from_iv(num / den, precision)


def vector_quadratics(P: rzcore.Pencil, u: Sequence[object], w) -> tuple[tuple, tuple]:
    """D(y) = v^T A0 v and N(y) = v^T B v for v = (y, u_1, u_2, ...), as (c0, c1, c2)."""
    u = [Fraction(x) for x in u]
    u[0] = Fraction(0)
    B = P.combine(w)
    out = []
    for M in (P.A0, B):
        quad = rzcore._quad(M, u)
        cross = 2 * sum((M[0][c] * u[c] for c in range(len(u)) if u[c]), Fraction(0))
        out.append((quad, cross, M[0][0]))
    return out[0], out[1]


def _certify_positive(coeffs, y, what: str):
    val = _eval([_iv(x) for x in coeffs], y)
    if not val.a > 0:
        raise DomainError(f"{what} not certified positive at the chosen parameter")
    return val


# --------------------------------------------------------------------------
# bivariate and multivariate bounds

def bivar_bound(n: int, precision: int | None = None) -> BoundResult:
    """Pencil of B_n = A_n + y A_{n-1} on y = 0, vector (alpha, 3, -8), best alpha."""
    bits = precision or max(default_precision(n), 24 * n + 96)
    P = rzcore.pencil_from_lform(rzcore.lform_bivariate(n))
    D, N = vector_quadratics(P, (0, 3, -8), {1: 1, 2: 0})
    if D[1] ** 2 - 4 * D[0] * D[2] >= 0:
        raise DomainError(f"denominator discriminant is non-negative at n={n}")
    alpha, value = optimize_quadratic_ratio(N, D, "max", bits)
    with interval_precision(bits):
        y = alpha.to_iv()
        _certify_positive(D, y, "D")
        _certify_positive(N, y, "N")
    return BoundResult("bivar", n, value, "lower", bits, None, {"alpha": alpha})


def multi_v1_closed_form(n: int) -> tuple[tuple, tuple]:
    """D(y), N(y) for v = (y, 0, 1, -1, ..., -1) as (c0, c1, c2)."""
    F = Fraction
    Dc = (F(10 - 2 ** (2 + n) + 2 ** (2 + 2 * n) - 2 * 3 ** (1 + n) + n),
          F(2 * (4 - 2 ** (1 + n) + n)), F(n))
    Nc = (-10 + F(2 ** (3 + n)) - F(2 ** (3 + 2 * n), 3) - F(2 ** (4 + 2 * n), 3)
          + F(2 ** (4 + 3 * n), 7) + F(2 ** (5 + 3 * n), 7) + 2 * 3 ** n - 4 * 3 ** (1 + n)
          + 2 * 3 ** (2 + n) - F(2 ** (1 + n) * 3 ** (3 + n), 5) - 4 ** (1 + n) + 4 ** (2 + n)
          - F(6 ** (2 + n), 5) + F(8 ** (1 + n), 7) - n,
          -8 - F(2 ** (2 + n)) + 2 ** (3 + n) - F(2 ** (3 + 2 * n), 3) - F(2 ** (4 + 2 * n), 3)
          + 4 * 3 ** (1 + n) - 2 * n,
          F(-2 + 2 ** (1 + n) - n))
    return Dc, Nc


def _multi_v1_generic(n: int) -> tuple[tuple, tuple]:
    P = eulerian_pencil(n)
    u = [0, 0, 1] + [-1] * (n - 1)
    return vector_quadratics(P, u, {i: 1 for i in P.variables})


def _v1_optimum(n: int, bits: int, crosscheck: bool):
    Dc, Nc = multi_v1_closed_form(n)
    if crosscheck and (Dc, Nc) != _multi_v1_generic(n):
        raise CoefficientMismatch(f"multi_v1 closed form differs from the pencil at n={n}")
    return Dc, Nc, optimize_quadratic_ratio(Nc, Dc, "max", bits)


def multi_v1_bound(n: int, precision: int | None = None, crosscheck: bool = True) -> BoundResult:
    """Eulerian pencil on the diagonal, vector (y, 0, 1, -1, ..., -1), best y."""
    if n < 2:
        raise DomainError("n >= 2 required")
    bits = precision or default_precision(n)
    Dc, Nc, (y, value) = _v1_optimum(n, bits, crosscheck)
    with interval_precision(bits):
        _certify_positive(Dc, y.to_iv(), "D")
        _certify_positive(Nc, y.to_iv(), "N")
    return BoundResult("multi_v1", n, value, "lower", bits, None, {"y": y})


def _p2(e):
    return Fraction(2) ** e


def _p3(e):
    return Fraction(3) ** e


def multi_v2_closed_form(m: int) -> tuple[tuple, tuple]:
    """D(y), N(y) for n = 2m and v = (y, 0, (-2^{m-i})_{i=3..m}, 0, 1/2, 1, ..., 1)."""
    F, P2, P3 = Fraction, _p2, _p3
    P4 = lambda e: F(4) ** e
    P6 = lambda e: F(6) ** e
    Dc = (-F(1, 12) + P2(3 * m) + P2(2 + m) + 5 * P2(-3 + 2 * m) - 7 * P2(-1 + 2 * m)
          + 3 * P2(1 + 3 * m) - P2(3 + 3 * m) + F(1, 3) * P2(2 + 4 * m) + F(1, 3) * P2(3 + 4 * m)
          - 2 * P3(-1 + m) - P2(4 + m) * P3(-1 + m) + P3(m) - P2(1 + m) * P3(m)
          - P3(1 + m) + P2(2 + m) * P3(1 + m) - 2 * P3(1 + 2 * m) - F(11, 3) * P4(-2 + m)
          + m - P2(3 * m) * m - 5 * P2(-4 + 2 * m) * m - P2(-3 + 2 * m) * m
          + P2(-1 + 2 * m) * m + P4(-2 + m) * m + P2(-4 + 2 * m) * m * m,
          -3 + P2(-1 + m) + P2(1 + m) - P2(2 + m) + P2(2 + 2 * m) - 2 * m - P2(-1 + m) * m,
          F(2 * m))
    Nc = (F(1, 12) + P2(2 * m) - P2(3 * m) + 5 * P2(4 * m) - P2(2 + m) + F(11, 3) * P2(-4 + 2 * m)
          - 5 * P2(-3 + 2 * m) - 7 * P2(-1 + 2 * m) + 3 * P2(1 + 2 * m) + 9 * P2(-3 + 3 * m)
          - 47 * P2(-2 + 3 * m) + 3 * P2(-1 + 3 * m) - P2(2 + 3 * m) - F(1, 7) * P2(3 + 3 * m)
          + F(1, 7) * P2(4 + 3 * m) + F(5, 7) * P2(5 + 3 * m) - F(27, 5) * P2(-3 + 4 * m)
          + 5 * P2(-1 + 4 * m) - P2(1 + 4 * m) + P2(1 + 5 * m) + 3 * P2(2 + 5 * m) - P2(4 + 5 * m)
          + F(1, 7) * P2(3 + 6 * m) + F(1, 3) * P2(4 + 6 * m) + F(1, 21) * P2(5 + 6 * m)
          + 2 * P3(-1 + m) - 11 * P2(2 * m) * P3(-1 + m) - F(1, 5) * P2(3 + m) * P3(-1 + m)
          + P2(4 + m) * P3(-1 + m) + 13 * P2(2 + 2 * m) * P3(-1 + m) - P2(5 + 3 * m) * P3(-1 + m)
          - P3(m) - P2(-1 + m) * P3(m) + P2(1 + m) * P3(m) + 7 * P2(-1 + 2 * m) * P3(m)
          - P2(2 + 3 * m) * P3(m) + P3(1 + m) - P2(2 + m) * P3(1 + m) - P2(3 + 2 * m) * P3(1 + m)
          + P2(3 + 3 * m) * P3(1 + m) - P2(1 + 2 * m) * P3(2 + m) + P2(-2 + 2 * m) * P3(3 + m)
          + 4 * P3(1 + 2 * m) - P2(m) * P3(1 + 2 * m) - P2(1 + m) * P3(1 + 2 * m)
          + P2(2 + m) * P3(1 + 2 * m) - F(1, 5) * P2(2 + 2 * m) * P3(1 + 2 * m) + P6(m)
          - P6(1 + m) - F(13, 5) * P6(1 + 2 * m)
          - m - P2(2 * m) * m + P2(3 * m) * m + 5 * P2(-3 + 2 * m) * m + P2(-2 + 2 * m) * m
          - 5 * P2(-2 + 4 * m) * m - P2(-1 + 4 * m) * m + P2(1 + 4 * m) * m - P2(1 + 5 * m) * m
          + P2(1 + 2 * m) * P3(-1 + m) * m + P2(-2 + 2 * m) * P3(m) * m
          - P2(-1 + 2 * m) * P3(1 + m) * m + P2(-1 + m) * P3(1 + 2 * m) * m
          - P2(-4 + 2 * m) * m * m + P2(-3 + 4 * m) * m * m,
          3 - 3 * P2(-1 + m) + P2(m) + 5 * P2(3 * m) + P2(1 + m) - P2(2 + 2 * m) + P2(1 + 3 * m)
          - P2(3 + 3 * m) + P2(3 + 4 * m) - P2(4 + m) * P3(-1 + m) - P2(1 + m) * P3(m)
          + P2(2 + m) * P3(1 + m) - 4 * P3(1 + 2 * m) + 2 * m + P2(-1 + m) * m - P2(3 * m) * m,
          -2 + P2(1 + 2 * m) - 2 * m)
    return Dc, Nc


def multi_v2_vector(n: int) -> list[Fraction]:
    """Entries after the constant slot, with 0 in the constant slot."""
    m = n // 2
    u = [Fraction(0)] * (n + 2)
    for i in range(3, m + 1):
        u[i - 1] = -_p2(m - i)
    u[m + 1] = Fraction(1, 2)
    for j in range(m + 2, n + 2):
        u[j] = Fraction(1)
    return u


def multi_v2_bound(n: int, precision: int | None = None, crosscheck: bool = True,
                   reoptimize: bool = False) -> BoundResult:
    """Even n = 2m: the vector with geometric head, 1/2 in the middle and ones at the tail.

    y is the v1 optimum with its sign flipped.  ``reoptimize`` instead
    maximises the ratio for this vector directly (experimental).
    """
    if n % 2:
        raise DomainError("multi_v2 needs even n")
    if n < 6:
        raise DomainError("multi_v2 needs n >= 6")
    bits = precision or default_precision(n)
    m = n // 2
    Dc, Nc = multi_v2_closed_form(m)
    if crosscheck:
        P = eulerian_pencil(n)
        if (Dc, Nc) != vector_quadratics(P, multi_v2_vector(n), {i: 1 for i in P.variables}):
            raise CoefficientMismatch(f"multi_v2 closed form differs from the pencil at n={n}")
    if reoptimize:
        y, value = optimize_quadratic_ratio(Nc, Dc, "max", bits)
        with interval_precision(bits):
            _certify_positive(Dc, y.to_iv(), "D")
            _certify_positive(Nc, y.to_iv(), "N")
        return BoundResult("multi_v2", n, value, "lower", bits, None, {"y": y, "reoptimized": True})
    _, _, (y1, _) = _v1_optimum(n, bits, False)
    with interval_precision(bits):
        y = -y1.to_iv()
        d = _certify_positive(Dc, y, "D")
        num = _certify_positive(Nc, y, "N")
        value = from_iv(num / d, bits)
    return BoundResult("multi_v2", n, value, "lower", bits, None, {"y": -y1})


# --------------------------------------------------------------------------
# root squaring

def eulerian_tail_coeff(k: int, i: int) -> int:
    """Coefficient of x^i in A_k (i <= 6) from its closed form in k."""
    if not 0 <= i <= 6 or k < i:
        raise DomainError("need 0 <= i <= 6 and k >= i")
    n = k
    F = Fraction
    r = (n + 1) * (n + 2)
    forms = {
        0: F(1),
        1: F(2 ** (n + 1) - (n + 2)),
        2: 3 ** (n + 1) - 2 ** (n + 1) * (n + 2) + F(r, 2),
        3: -3 ** (n + 1) * (n + 2) + 2 ** n * r - F(n * r, 6) + 4 ** (n + 1),
        4: (-4 ** (n + 1) * (n + 2) + F(3 ** (n + 1) * r, 2) - F(2 ** n * n * r, 3)
            + F((n - 1) * n * r, 24) + 5 ** (n + 1)),
        5: (-5 ** (n + 1) * (n + 2) + 2 ** (2 * n + 1) * r - F(3 ** n * n * r, 2)
            + F(2 ** n * (n - 1) * n * r, 12) - F((n - 2) * (n - 1) * n * r, 120) + 6 ** (n + 1)),
        6: (-6 ** (n + 1) * (n + 2) + F(5 ** (n + 1) * r, 2) - F(2 ** (2 * n + 1) * n * r, 3)
            + F(3 ** n * (n - 1) * n * r, 8) - F(2 ** n * (n - 2) * (n - 1) * n * r, 60)
            + F((n - 3) * (n - 2) * (n - 1) * n * r, 720) + 7 ** (n + 1)),
    }
    v = forms[i]
    if v.denominator != 1:
        raise AssertionError("tail coefficient is not an integer")
    return int(v)


@dataclass(frozen=True)
class DlgState:
    """Monic polynomial as a_0 = 1, a_1, ..., a_d with a_i the coefficient of x^{d-i}."""
    coeffs: tuple[int, ...]
    iteration: int = 0

    @classmethod
    def from_unipoly(cls, p: UniPoly) -> "DlgState":
        c = tuple(reversed(p.coeffs))
        if c[0] != 1:
            raise DomainError("polynomial must be monic")
        return cls(c, 0)

    def to_unipoly(self) -> UniPoly:
        return UniPoly(tuple(reversed(self.coeffs)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1


def dlg_step(s: DlgState) -> DlgState:
    """One root-squaring step: b_k = (-1)^k a_k^2 + 2 sum_{j<k} (-1)^j a_j a_{2k-j}."""
    a = s.coeffs
    d = len(a) - 1
    if a[0] != 1:
        raise DomainError("polynomial must be monic")
    at = lambda i: a[i] if 0 <= i <= d else 0
    b = tuple((-1) ** k * at(k) ** 2 + 2 * sum((-1) ** j * at(j) * at(2 * k - j) for j in range(k))
              for k in range(d + 1))
    return DlgState(b, s.iteration + 1)


def dlg_deg3_closed(k: int) -> tuple[int, int, int]:
    """Coefficients of x, x^2, x^3 after one squaring of A_k, built from the tail closed forms.

    Normalised to constant term 1, i.e. (-1)^k times the monic step's
    b_{k-1}, b_{k-2}, b_{k-3}.
    """
    if k < 6:
        raise DomainError("closed tail forms need k >= 6")
    a = [eulerian_tail_coeff(k, i) for i in range(7)]
    b1 = -(a[1] ** 2 - 2 * a[2] * a[0])
    b2 = a[2] ** 2 - 2 * a[3] * a[1] + 2 * a[4] * a[0]
    b3 = -(a[3] ** 2 - 2 * a[4] * a[2] + 2 * a[5] * a[1] - 2 * a[6] * a[0])
    return b1, b2, b3


def _bareiss_det(M: list[list[int]]) -> int:
    M = [row[:] for row in M]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def _sylvester(p: list, q: list) -> list[list]:
    """Sylvester matrix of p, q given by coefficients in decreasing degree."""
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(p) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(q) + [0] * (size - n - 1 - i))
    return rows


def root_power_transform(p: UniPoly, r: int) -> UniPoly:
    """Monic polynomial whose roots are the r-th powers of the roots of p.

    Res_x(p(x), x^r - y) is evaluated at d + 1 integer values of y by exact
    Bareiss elimination of the Sylvester matrix and interpolated.
    """
    if r < 2:
        raise DomainError("r >= 2 required")
    if p.coeffs[-1] != 1:
        raise DomainError("polynomial must be monic")
    d = p.degree
    pc = [int(c) for c in reversed(p.coeffs)]
    if any(Fraction(c) != int(c) for c in p.coeffs):
        raise DomainError("integer coefficients required")
    xs = list(range(d + 1))
    ys = []
    for y in xs:
        q = [1] + [0] * (r - 1) + [-y]
        ys.append(_bareiss_det(_sylvester(pc, q)))
    # Lagrange interpolation, exact
    coeffs = [Fraction(0)] * (d + 1)
    for i, xi in enumerate(xs):
        basis = [Fraction(1)]
        denom = 1
        for j, xj in enumerate(xs):
            if j != i:
                basis = _poly_mul(basis, [-xj, 1])
                denom *= xi - xj
        for t, c in enumerate(basis):
            coeffs[t] += Fraction(ys[i]) * c / denom
    lead = coeffs[-1]
    return UniPoly(tuple(c / lead for c in coeffs))


def multivariate_dlg(P: MultiAffinePoly | Mapping[tuple, object]) -> dict[tuple, Fraction]:
    """Product of p(e_1 x_1, ..., e_n x_n) over all sign patterns, then x_i^2 -> x_i.

    The result need not be real-zero.
    """
    poly = rzcore.poly_from_multiaffine(P) if isinstance(P, MultiAffinePoly) else dict(P)
    labels = rzcore.poly_variables(poly)
    prodp: dict[tuple, Fraction] = {(): Fraction(1)}
    for signs in itertools.product((1, -1), repeat=len(labels)):
        sgn = dict(zip(labels, signs))
        factor = {k: Fraction(c) * math.prod(sgn[v] for v in k) for k, c in poly.items()}
        prodp = rzcore._truncated_mul(prodp, factor, 10 ** 9)
    out: dict[tuple, Fraction] = {}
    for key, c in prodp.items():
        counts = {v: key.count(v) for v in set(key)}
        if any(e % 2 for e in counts.values()):
            raise AssertionError("odd exponent survived the sign-pattern product")
        nk = tuple(sorted(v for v, e in counts.items() for _ in range(e // 2)))
        out[nk] = out.get(nk, 0) + c
    return {k: c for k, c in out.items() if c}


# --------------------------------------------------------------------------
# Sobolev brackets and the DLG relaxation

def chi1(k: int) -> Fraction:
    return Fraction(eulerian_number(k + 1, 2), eulerian_number(k + 1, 1) ** 2)


def sobolev_bracket(a, b, N: int, precision: int = 128) -> tuple[CertifiedInterval, CertifiedInterval]:
    """Bracket for the largest of N non-negative numbers with sum a and square sum b."""
    if N < 2:
        raise DomainError("N >= 2 required")
    a, b = Fraction(a), Fraction(b)
    r_lo = 2 * b - a * a
    r_hi = b - (a * a - b) / (N - 1)
    if r_lo < 0 or r_hi < 0:
        raise DomainError("negative radicand")
    with interval_precision(precision):
        lo = (_iv(a) + _sqrt(_iv(r_lo))) / 2
        hi = (_iv(a) + (N - 1) * _sqrt(_iv(r_hi))) / N
        return from_iv(lo, precision), from_iv(hi, precision)


def _sobolev_inputs(k: int) -> tuple[int, int]:
    a1 = eulerian_number(k + 1, 1)
    a2 = eulerian_number(k + 1, 2)
    return a1, a1 * a1 - 2 * a2


def sobolev_minorant(k: int, precision: int | None = None, crosscheck: bool = True) -> BoundResult:
    """(2^{k+1} - (k+2) + sqrt(radicand)) / 2 with the radicand in closed form."""
    if k < 3:
        raise DomainError("k >= 3 required")
    bits = precision or default_precision(k)
    rad = 2 ** (3 + k) - 4 * 3 ** (1 + k) + 4 ** (1 + k) - k * (2 - 2 ** (2 + k) + k)
    if crosscheck:
        a, b = _sobolev_inputs(k)
        if rad != 2 * b - a * a:
            raise CoefficientMismatch("minorant radicand")
    if rad < 0:
        raise DomainError("negative radicand")
    with interval_precision(bits):
        x = (_iv(2 ** (k + 1) - (k + 2)) + _sqrt(_iv(rad))) / 2
        return _result("sobolev_min", k, x, "lower", bits)


def sobolev_majorant(k: int, precision: int | None = None, crosscheck: bool = True) -> BoundResult:
    """(2/k)((2^{k+1} - (k+2))/2 + ((k-1)/2) sqrt(radicand / (k-1)))."""
    if k < 3:
        raise DomainError("k >= 3 required")
    bits = precision or default_precision(k)
    rad = Fraction(-4 * (2 ** k - 1) ** 2 + (4 ** (1 + k) - 2 + 2 ** (2 + k) - 2 * 3 ** (1 + k)) * k,
                   k - 1)
    if crosscheck:
        a, b = _sobolev_inputs(k)
        if rad != b - Fraction(a * a - b, k - 1):
            raise CoefficientMismatch("majorant radicand")
    if rad < 0:
        raise DomainError("negative radicand")
    with interval_precision(bits):
        x = _iv(Fraction(2, k)) * (_iv(Fraction(2 ** (k + 1) - (k + 2), 2))
                                    + _iv(Fraction(k - 1, 2)) * _sqrt(_iv(rad)))
        return _result("sobolev_maj", k, x, "upper", bits)


def viete_raw_estimate(k: int, precision: int | None = None) -> BoundResult:
    """sqrt(a_1^2 - 2 a_2) = sqrt(4^{k+1} - 2 * 3^{k+1} + k + 2); not a bound on either side.

    Reported with side ``upper`` because the square root of the sum of the
    squared roots can never be below the largest root; it is not a
    certified majorant in the sense of the other upper bounds.
    """
    if k < 2:
        raise DomainError("k >= 2 required")
    bits = precision or default_precision(k)
    rad = 4 ** (k + 1) - 2 * 3 ** (k + 1) + k + 2
    a1, a2 = eulerian_number(k + 1, 1), eulerian_number(k + 1, 2)
    if rad != a1 * a1 - 2 * a2:
        raise CoefficientMismatch("raw estimate radicand")
    with interval_precision(bits):
        return _result("dlg_raw", k, _sqrt(_iv(rad)), "upper", bits)


def dlg_relax_bound(k: int, precision: int | None = None) -> BoundResult:
    """Univariate relaxation of the squared-root polynomial, then a square root.

    det = c + b t + a t^2 of the 2x2 pencil; the bound on the largest
    squared root is 2a / (-b - sqrt(b^2 - 4ac)).
    """
    if k < 2:
        raise DomainError("k >= 2 required")
    bits = precision or default_precision(k)
    L = rzcore.lform_dlg(k)
    a, b, c = _pencil_abc(L)
    disc = b * b - 4 * a * c
    if disc < 0:
        raise DomainError("negative discriminant")
    with interval_precision(bits):
        s = _sqrt(_iv(disc), "discriminant")
        if b < 0:
            sq = (-_iv(b) + s) / _iv(2 * c)
        else:
            sq = _iv(2 * a) / (-_iv(b) - s)
        if not sq.a > 0:
            raise DomainError("squared bound not certified positive")
        return _result("dlg_relax", k, iv.sqrt(sq), "lower", bits, extras={"abc": (a, b, c)})


# --------------------------------------------------------------------------
# pencil bisection, oracle comparisons

def pencil_bisect_bound(n: int, precision: int | None = None,
                        pencil: str = "univariate") -> BoundResult:
    """|q_1| >= 1/|t_-| with t_- the certified lower end of the diagonal section."""
    bits = precision or default_precision(n)
    if pencil == "univariate":
        P = _univariate_pencil(n)
    elif pencil == "multivariate":
        P = eulerian_pencil(n)
    else:
        raise ValueError(f"unknown pencil {pencil!r}")
    sec = pencil_line_interval(P, {i: 1 for i in P.variables}, bits)
    if sec.lower is None:
        raise DomainError("section unbounded below")
    t = sec.lower
    if t.hi >= 0:
        raise DomainError("section lower end not certified negative")
    val = CertifiedInterval(1 / -t.lo, 1 / -t.hi, bits)
    return BoundResult("pencil_bisect", n, val, "lower", bits, None, {"t_minus": t, "pencil": pencil})


def stanley_growth_check(n: int, k: int, precision: int = 128) -> CertifiedInterval:
    """|q_k| / ((k+1)/k)^{n+1} with |q_k| the k-th largest root modulus of A_n."""
    if not 1 <= k <= n:
        raise DomainError("need 1 <= k <= n")
    r = roots_by_magnitude(univariate_eulerian(n), precision)[k - 1]
    scale = Fraction(k + 1, k) ** (n + 1)
    return CertifiedInterval(r.lo / scale, r.hi / scale, precision)


def globality_bound(P: MultiAffinePoly, w: Sequence[object], v: Sequence[object],
                    precision: int = 128) -> BoundResult:
    """Lower bound -v^T A0 v / v^T B v on the root of P(t w) nearest to 0 from below."""
    poly = rzcore.poly_from_multiaffine(P)
    L = rzcore.lform_from_coeffs(poly, P.variables, P.max_degree())
    pen = rzcore.pencil_from_lform(L)
    c0, c1 = rzcore.quadratic_form_line(pen, v, w)
    if c1 <= 0:
        raise OrientationError("v^T B v must be positive")
    return _exact("custom_vector", P.nvars, -c0 / c1, "lower", precision, None, c0=c0, c1=c1)


# --------------------------------------------------------------------------
# asymptotic templates

@dataclass(frozen=True)
class AsymptoticTemplate:
    """sum of coefficient * base^(n + shift) * n^power, plus the size of the next term."""
    method: str
    terms: tuple[tuple[Fraction, Fraction, int, int], ...]
    next_term: tuple[Fraction, Fraction, int, int]

    @staticmethod
    def _term_iv(t, n):
        coef, base, shift, power = t
        return _iv(Fraction(coef) * Fraction(base) ** (n + shift) * Fraction(n) ** power)

    def value_iv(self, n: int):
        acc = _iv(0)
        for t in self.terms:
            acc = acc + self._term_iv(t, n)
        return acc

    def next_iv(self, n: int):
        return self._term_iv(self.next_term, n)


_F = Fraction
_UNI = ((_F(1), _F(2), 1, 0), (_F(-1), _F(3, 2), 1, 0), (_F(-2), _F(9, 8), 1, 0))
_DLG3 = ((_F(1), _F(2), 1, 0), (_F(-1), _F(3, 2), 1, 0), (_F(-1), _F(9, 8), 1, 0))
TEMPLATES = {
    "colucci": AsymptoticTemplate("colucci", ((_F(2), _F(2), 0, -1), (_F(-1), _F(1), 0, 0)),
                                  (_F(1), _F(1), 0, -1)),
    "uni_relax": AsymptoticTemplate("uni_relax", _UNI, (_F(1), _F(9, 8), 0, 0)),
    "uni_vec11": AsymptoticTemplate("uni_vec11", ((_F(1), _F(2), 1, 0),), (_F(1), _F(2), 0, 0)),
    "bivar": AsymptoticTemplate("bivar", _UNI, (_F(1), _F(9, 8), 0, 0)),
    "multi_v1": AsymptoticTemplate("multi_v1", _UNI, (_F(1), _F(9, 8), 0, 0)),
    "multi_v2": AsymptoticTemplate("multi_v2", _UNI, (_F(1), _F(9, 8), 0, 0)),
    "pencil_bisect": AsymptoticTemplate("pencil_bisect", _UNI, (_F(1), _F(9, 8), 0, 0)),
    "sobolev_min": AsymptoticTemplate(
        "sobolev_min", _DLG3 + ((_F(-2), _F(27, 32), 1, 0),), (_F(1), _F(27, 32), 0, 0)),
    "sobolev_maj": AsymptoticTemplate(
        "sobolev_maj", ((_F(1), _F(2), 1, 0), (_F(-1), _F(3, 2), 1, 0),
                        (_F(-1, 2), _F(9, 8), 1, 0), (_F(-1, 2), _F(9, 8), 1, -1)),
        (_F(1), _F(9, 8), 0, -1)),
    "mezo_majorant": AsymptoticTemplate(
        "mezo_majorant", ((_F(1), _F(2), 1, 0), (_F(-1), _F(3, 2), 1, 0),
                          (_F(-1, 2), _F(9, 8), 1, 0), (_F(-1, 2), _F(9, 8), 1, -1)),
        (_F(1), _F(9, 8), 0, -1)),
    "dlg_raw": AsymptoticTemplate(
        "dlg_raw", ((_F(1), _F(2), 1, 0), (_F(-1), _F(3, 2), 1, 0), (_F(-1, 2), _F(9, 8), 1, 0)),
        (_F(1), _F(27, 32), 0, 0)),
    "dlg_relax": AsymptoticTemplate("dlg_relax", _DLG3 + ((_F(1), _F(1), 0, 0),),
                                    (_F(1), _F(1), 0, 0)),
}


def compute_bound(method: str, n: int, precision: int | None = None,
                  param: int | None = None) -> BoundResult:
    """Dispatch by method name."""
    if method == "unit_binary":
        return unit_binary_bound(n, param if param is not None else n + 1, precision)
    table = {
        "colucci": colucci, "mezo_majorant": mezo_majorant, "uni_relax": uni_relax_exact,
        "uni_vec11": uni_vec11, "bivar": bivar_bound, "multi_v1": multi_v1_bound,
        "multi_v2": multi_v2_bound, "sobolev_min": sobolev_minorant,
        "sobolev_maj": sobolev_majorant, "dlg_raw": viete_raw_estimate,
        "dlg_relax": dlg_relax_bound, "pencil_bisect": pencil_bisect_bound,
    }
    if method not in table:
        raise ValueError(f"unknown method {method!r}")
    return table[method](n, precision)


def asymptotic_residual(method: str, n: int, precision: int | None = None) -> CertifiedInterval:
    """(bound(n) - template(n)) / next_term(n)."""
    if method not in TEMPLATES:
        raise KeyError(f"no template registered for {method!r}")
    bits = precision or default_precision(n)
    T = TEMPLATES[method]
    for _ in range(4):
        res = compute_bound(method, n, bits)
        with interval_precision(bits):
            x = from_iv((res.value.to_iv() - T.value_iv(n)) / T.next_iv(n), bits)
        if x.width <= Fraction(1, 2 ** 20) * max(1, abs(x.mid)):
            return x
        bits *= 2
    raise PrecisionError(f"residual of {method} at n={n} still indeterminate at {bits // 2} bits")
