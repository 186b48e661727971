"""
L-forms, moment pencils and PSD tests.

Polynomials handled here are plain dicts ``{monomial: coefficient}`` where a
monomial is a sorted tuple of variable labels, so ``1 + 4x + x^2`` in the
variable labelled 1 is ``{(): 1, (1,): 4, (1, 1): 1}``.  Labels are ints.

The L-form of ``p`` (constant term 1, virtual degree ``d``) is read off the
power series ``-log p(-x)``: if that series has coefficient ``c`` at ``x^a``
then ``L(x^a) = |a| * c / multinomial(a)`` and ``L(1) = d``.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Callable, Iterable, Mapping, Sequence

import gmpy2

from .eulerpoly import (
    BiPoly, MultiAffinePoly, UniPoly, multivariate_eulerian, univariate_eulerian,
)
from .permstat import eulerian_number

__all__ = [
    "LFormTable", "Pencil", "DetRep", "PSDIndeterminate", "NormalizationError",
    "poly_from_uni", "poly_from_multiaffine", "poly_from_bipoly",
    "lform_from_coeffs", "lform_from_series", "lform_eulerian",
    "lform_eulerian_generic", "lform_univariate_eulerian", "lform_bivariate",
    "lform_dlg", "bivariate_eulerian", "neg_log_series", "renegar_extension",
    "extended_mold", "poly_degree", "poly_variables",
    "dlg_coefficients", "pencil_from_lform", "is_psd", "quadratic_form_line",
    "renegar_derivative", "renegar_invariance_check", "extended_mold_matrix",
    "random_detrep", "expand_detrep", "trace_check", "det_pencil_line",
]

Monomial = tuple[int, ...]
Poly = dict[Monomial, Fraction]
Matrix = tuple[tuple[Fraction, ...], ...]


class NormalizationError(ValueError):
    """Constant coefficient is not 1."""


class PSDIndeterminate(ArithmeticError):
    """Interval PSD test could not decide at the working precision."""


def _mono(labels: Iterable[int]) -> Monomial:
    return tuple(sorted(labels))


def poly_from_uni(p: UniPoly, label: int = 1) -> Poly:
    return {(label,) * i: Fraction(c) for i, c in enumerate(p.coeffs) if c}


def poly_from_multiaffine(P: MultiAffinePoly) -> Poly:
    return {_mono(S): Fraction(c) for S, c in P.terms.items()}


def poly_from_bipoly(B: BiPoly, labels: tuple[int, int] = (1, 2)) -> Poly:
    x, y = labels
    return {(x,) * i + (y,) * j: Fraction(c) for (i, j), c in B.terms.items() if c}


def poly_degree(p: Mapping[Monomial, object]) -> int:
    return max((len(k) for k, c in p.items() if c), default=0)


def poly_variables(p: Mapping[Monomial, object]) -> tuple[int, ...]:
    return tuple(sorted({v for k in p for v in k}))


# --------------------------------------------------------------------------
# L-form tables

@dataclass(frozen=True)
class LFormTable:
    """Values of an L-form on monomials of low degree.

    ``values`` is keyed by sorted label tuples.  Labels in ``ghosts`` belong to
    variables that never occur in the source polynomial, so every monomial
    containing one evaluates to 0.
    """
    variables: tuple[int, ...]
    d: int
    values: Mapping[Monomial, Fraction]
    ghosts: tuple[int, ...] = ()
    max_degree: int = 3

    @property
    def n(self) -> int:
        return len(self.variables)

    def __call__(self, *labels: int) -> Fraction:
        key = _mono(labels)
        if not key:
            return Fraction(self.d)
        if any(v in self.ghosts for v in key):
            return Fraction(0)
        try:
            return self.values[key]
        except KeyError:
            raise KeyError(f"L-form value for monomial {key} is not tabulated") from None

    def restricted(self, max_degree: int) -> "LFormTable":
        vals = {k: v for k, v in self.values.items() if len(k) <= max_degree}
        return LFormTable(self.variables, self.d, vals, self.ghosts, max_degree)

    def same_values(self, other: "LFormTable") -> bool:
        if self.d != other.d or set(self.variables) != set(other.variables):
            return False
        top = min(self.max_degree, other.max_degree)
        keys = {k for k in self.values if len(k) <= top} | {k for k in other.values if len(k) <= top}
        return all(self.values.get(k, 0) == other.values.get(k, 0) for k in keys)


def _monomials(variables: Sequence[int], max_degree: int) -> Iterable[Monomial]:
    for deg in range(1, max_degree + 1):
        yield from itertools.combinations_with_replacement(sorted(variables), deg)


def _formula_value(a: Callable[[Monomial], Fraction], key: Monomial) -> Fraction:
    c = Counter(key)
    if len(key) == 1:
        return a(key)
    if len(key) == 2:
        i, j = key
        if i == j:
            return a((i,)) ** 2 - 2 * a(key)
        return a((i,)) * a((j,)) - a(key)
    if len(key) == 3:
        if len(c) == 1:
            (i,) = c
            ai = a((i,))
            return 3 * a(key) - 3 * ai * a((i, i)) + ai ** 3
        if len(c) == 2:
            r = next(v for v, m in c.items() if m == 2)
            s = next(v for v, m in c.items() if m == 1)
            ar, as_ = a((r,)), a((s,))
            return a(key) - ar * a(_mono((r, s))) - as_ * a((r, r)) + ar * ar * as_
        i, j, k = key
        ai, aj, ak = a((i,)), a((j,)), a((k,))
        return (a(key) - ai * a((j, k)) - aj * a((i, k)) - ak * a((i, j))
                + 2 * ai * aj * ak) / 2
    raise ValueError("coefficient formulas cover degree <= 3 only")


def lform_from_coeffs(coeffs: Mapping[Monomial, object] | Callable[[Monomial], object],
                      variables: Sequence[int], d: int,
                      ghosts: Sequence[int] = ()) -> LFormTable:
    """L-form on monomials of degree <= 3 from the closed coefficient formulas."""
    if callable(coeffs):
        get = coeffs
    else:
        get = lambda k: coeffs.get(k, 0)
    a = lambda k: Fraction(get(_mono(k)))
    if a(()) != 1:
        raise NormalizationError(f"constant coefficient is {a(())}, expected 1")
    vals = {key: _formula_value(a, key) for key in _monomials(variables, 3)}
    return LFormTable(tuple(variables), d, vals, tuple(ghosts), 3)


def _truncated_mul(p: Poly, q: Poly, top: int) -> Poly:
    out: Poly = {}
    for k1, c1 in p.items():
        for k2, c2 in q.items():
            if len(k1) + len(k2) <= top:
                k = _mono(k1 + k2)
                out[k] = out.get(k, 0) + c1 * c2
    return {k: c for k, c in out.items() if c}


def neg_log_series(p: Mapping[Monomial, object], top: int) -> Poly:
    """Coefficients of -log p(-x) up to total degree ``top`` (p(0) = 1)."""
    if Fraction(p.get((), 0)) != 1:
        raise NormalizationError("constant coefficient must be 1")
    q: Poly = {}
    for k, c in p.items():
        if k and c and len(k) <= top:
            q[k] = Fraction(c) * (-1) ** len(k)
    # -log(1 + q) = sum_{m >= 1} (-1)^m q^m / m
    out: Poly = {}
    power = dict(q)
    for m in range(1, top + 1):
        for k, c in power.items():
            out[k] = out.get(k, 0) + Fraction((-1) ** m, m) * c
        power = _truncated_mul(power, q, top)
        if not power:
            break
    return {k: c for k, c in out.items() if c}


def _multinomial(key: Monomial) -> int:
    return factorial(len(key)) // prod(factorial(m) for m in Counter(key).values())


def lform_from_series(p: Mapping[Monomial, object], variables: Sequence[int] | None = None,
                      d: int | None = None, max_degree: int = 3,
                      ghosts: Sequence[int] = ()) -> LFormTable:
    """L-form from the defining log series, exact to total degree ``max_degree``."""
    variables = tuple(variables) if variables is not None else poly_variables(p)
    d = poly_degree(p) if d is None else d
    series = neg_log_series(p, max_degree)
    vals = {key: len(key) * series.get(key, Fraction(0)) / _multinomial(key)
            for key in _monomials(variables, max_degree)}
    return LFormTable(variables, d, vals, tuple(ghosts), max_degree)


# --------------------------------------------------------------------------
# closed-form tables

def _p2(e: int) -> Fraction:
    return Fraction(2) ** e


def _eulerian_value(key: Monomial) -> Fraction:
    c = Counter(key)
    if len(key) == 1:
        return Fraction(2 ** (key[0] - 1) - 1)
    if len(key) == 2 and len(c) == 1:
        return Fraction((2 ** (key[0] - 1) - 1) ** 2)
    if len(key) == 2:
        i, j = key
        return _p2(i + j - 2) - _p2(j - i) * 3 ** (i - 1)
    if len(c) == 1:
        return Fraction((2 ** (key[0] - 1) - 1) ** 3)
    if len(c) == 2:
        i = next(v for v, m in c.items() if m == 2)
        j = next(v for v, m in c.items() if m == 1)
        if i < j:
            return _p2(-3 - i + j) * (2 ** i - 2) * (3 * 4 ** i - 4 * 3 ** i) / 3
        return _p2(-3 + i - j) * (2 ** i - 2) * (3 * 4 ** j - 4 * 3 ** j) / 3
    i, j, k = key
    return (_p2(i + j + k - 3) - _p2(-1 - i + j + k) * 3 ** (i - 1)
            - _p2(-2 + i - j + k) * 3 ** (j - 1) + _p2(-3 + 2 * i - j + k) * 3 ** (j - i))


def lform_eulerian(n: int) -> LFormTable:
    """Closed-form L-table of the multivariate Eulerian polynomial A_n.

    Variables are the descent-top labels 2..n+1; label 1 is a ghost.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    vs = tuple(range(2, n + 2))
    vals = {key: _eulerian_value(key) for key in _monomials(vs, 3)}
    return LFormTable(vs, n, vals, (1,), 3)


def lform_eulerian_generic(n: int) -> LFormTable:
    """Same table through the coefficient formulas and the counting formulas."""
    P = multivariate_eulerian(n, max_degree=3)
    return lform_from_coeffs(poly_from_multiaffine(P), tuple(range(2, n + 2)), n, (1,))


def lform_univariate_eulerian(n: int) -> LFormTable:
    """L(1), L(x), L(x^2), L(x^3) for A_n, variable label 1."""
    if n < 1:
        raise ValueError("n >= 1 required")
    vals = {
        (1,): Fraction(2 ** (n + 1) - (n + 2)),
        (1, 1): Fraction(2 - 2 * 3 ** (n + 1) + 4 ** (n + 1) + n),
        (1, 1, 1): Fraction(-2 - 2 ** (n + 1) * 3 ** (n + 2) + 3 * 4 ** (n + 1) + 8 ** (n + 1) - n),
    }
    return LFormTable((1,), n, vals, (), 3)


def bivariate_eulerian(n: int) -> BiPoly:
    """B_n = A_n + y A_{n-1} (with A_0 = 1)."""
    if n < 1:
        raise ValueError("n >= 1 required")
    lower = univariate_eulerian(n - 1) if n > 1 else UniPoly((1,))
    terms = {(i, 0): c for i, c in enumerate(univariate_eulerian(n).coeffs)}
    terms.update({(i, 1): c for i, c in enumerate(lower.coeffs)})
    return BiPoly(terms)


def lform_bivariate(n: int) -> LFormTable:
    """Closed-form L-table of B_n with x labelled 1 and y labelled 2."""
    if n < 1:
        raise ValueError("n >= 1 required")
    u = lform_univariate_eulerian(n)
    vals = dict(u.values)
    vals.update({
        (2,): Fraction(1), (2, 2): Fraction(1), (2, 2, 2): Fraction(1),
        (1, 2): Fraction(2 ** n - 1),
        (1, 2, 2): Fraction(2 ** n - 1),
        (1, 1, 2): Fraction(1 - 2 ** n + 2 ** (2 * n + 1) - 2 * 3 ** n),
    })
    return LFormTable((1, 2), n, vals, (), 3)


def dlg_coefficients(k: int) -> tuple[int, int, int]:
    """Coefficients of x, x^2, x^3 after one root-squaring step of A_k.

    Normalised so the constant term is 1, i.e. the polynomial is
    prod(1 - r_i^2 x) over the roots r_i of A_k.
    """
    a = [eulerian_number(k + 1, i) if i <= k else 0 for i in range(7)]
    b1 = -(a[1] ** 2 - 2 * a[2])
    b2 = a[2] ** 2 - 2 * a[3] * a[1] + 2 * a[4]
    b3 = -(a[3] ** 2 - 2 * a[4] * a[2] + 2 * a[5] * a[1] - 2 * a[6])
    return b1, b2, b3


def lform_dlg(k: int) -> LFormTable:
    """L-table of the first root-squaring iterate of A_k, variable label 1."""
    if k < 1:
        raise ValueError("k >= 1 required")
    b1, b2, b3 = (Fraction(v) for v in dlg_coefficients(k))
    vals = {
        (1,): b1,
        (1, 1): -2 * b2 + b1 ** 2,
        (1, 1, 1): 3 * b3 - 3 * b1 * b2 + b1 ** 3,
    }
    return LFormTable((1,), k, vals, (), 3)


# --------------------------------------------------------------------------
# pencils

def _sym(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


@dataclass(frozen=True)
class Pencil:
    """Symmetric pencil A0 + sum_i x_i A_i indexed by the monomials in ``mold``."""
    mold: tuple[Monomial, ...]
    A0: Matrix
    A: Mapping[int, Matrix]
    variant: str = "full"

    @property
    def size(self) -> int:
        return len(self.mold)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(self.A)

    def combine(self, w: Mapping[int, object] | Sequence[object]) -> Matrix:
        """sum_i w_i A_i."""
        w = self._weights(w)
        m = self.size
        return tuple(tuple(sum((w[i] * self.A[i][r][c] for i in w if w[i]), Fraction(0))
                           for c in range(m)) for r in range(m))

    def at(self, point: Mapping[int, object] | Sequence[object]) -> Matrix:
        B = self.combine(point)
        return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.A0, B))

    def _weights(self, w) -> dict[int, Fraction]:
        if isinstance(w, Mapping):
            extra = set(w) - set(self.A)
            if extra:
                raise ValueError(f"unknown pencil variables {sorted(extra)}")
            return {i: Fraction(w.get(i, 0)) for i in self.A}
        w = list(w)
        if len(w) != len(self.A):
            raise ValueError(f"direction has {len(w)} entries, pencil has {len(self.A)} variables")
        return {i: Fraction(x) for i, x in zip(self.A, w)}


def pencil_from_lform(L: LFormTable, variant: str = "full") -> Pencil:
    """(A0)_uv = L(m_u m_v), (A_i)_uv = L(x_i m_u m_v) over the mold {1, x_*}.

    The mold lists the ghost variables as well, so their rows stay in the
    matrices as zero rows.  ``simplified`` drops the constant row.
    """
    if variant not in ("full", "simplified"):
        raise ValueError(f"unknown variant {variant!r}")
    mold: list[Monomial] = [()] + [(v,) for v in sorted(set(L.variables) | set(L.ghosts))]
    if variant == "simplified":
        mold = mold[1:]
    A0 = _sym([[L(*(u + v)) for v in mold] for u in mold])
    A = {i: _sym([[L(i, *(u + v)) for v in mold] for u in mold]) for i in L.variables}
    return Pencil(tuple(mold), A0, A, variant)


def det_pencil_line(A0: Matrix, B: Matrix) -> UniPoly:
    """det(A0 + t B) as an exact polynomial in t (via sympy)."""
    from sympy import Matrix as SMatrix, Poly, Rational, symbols
    t = symbols("t")
    M = SMatrix(len(A0), len(A0), lambda r, c: Rational(A0[r][c].numerator, A0[r][c].denominator)
                + t * Rational(B[r][c].numerator, B[r][c].denominator))
    P = Poly(M.det(method="berkowitz"), t)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(P.all_coeffs())]
    return UniPoly(tuple(coeffs))


# --------------------------------------------------------------------------
# PSD tests

def _ldl_psd_exact(M) -> bool:
    rows = [[gmpy2.mpq(x) for x in r] for r in M]
    live = list(range(len(rows)))
    while live:
        for i in live:
            if rows[i][i] < 0:
                return False
        zero = [i for i in live if rows[i][i] == 0]
        for i in zero:
            if any(rows[i][j] != 0 for j in live):
                return False
        live = [i for i in live if rows[i][i] != 0]
        if not live:
            return True
        p = max(live, key=lambda i: rows[i][i])
        piv = rows[p][p]
        live.remove(p)
        rp = rows[p]
        for i in live:
            f = rows[i][p] / piv
            if f:
                ri = rows[i]
                for j in live:
                    ri[j] -= f * rp[j]
    return True


def _ldl_psd_interval(M, precision: int) -> bool:
    from .oracle import interval_precision, to_iv
    with interval_precision(precision):
        n = len(M)
        keep = [i for i in range(n) if any(M[i][j] != 0 for j in range(n))]
        rows = [[to_iv(M[i][j]) for j in keep] for i in keep]
        m = len(rows)
        for p in range(m):
            piv = rows[p][p]
            if piv.b < 0:
                return False
            if not piv.a > 0:
                raise PSDIndeterminate(f"pivot {p} straddles 0 at {precision} bits")
            for i in range(p + 1, m):
                f = rows[i][p] / piv
                for j in range(p + 1, m):
                    rows[i][j] = rows[i][j] - f * rows[p][j]
        return True


def is_psd(M: Sequence[Sequence[object]], mode: str = "exact", precision: int = 128) -> bool:
    """PSD test by symmetric elimination.

    ``exact`` pivots on the largest remaining diagonal entry over the
    rationals and is always decisive.  ``interval`` runs unpivoted elimination
    in outward-rounded interval arithmetic and raises ``PSDIndeterminate``
    when a pivot cannot be signed (this includes singular PSD matrices with
    no zero row).
    """
    n = len(M)
    for r in range(n):
        if len(M[r]) != n:
            raise ValueError("matrix is not square")
        for c in range(r):
            if M[r][c] != M[c][r]:
                raise ValueError("matrix is not symmetric")
    if mode == "exact":
        return _ldl_psd_exact(M)
    if mode == "interval":
        return _ldl_psd_interval(M, precision)
    raise ValueError(f"unknown mode {mode!r}")


def _quad(M: Matrix, v: Sequence[Fraction]) -> Fraction:
    return sum((v[r] * M[r][c] * v[c] for r in range(len(v)) for c in range(len(v))
                if v[r] and v[c]), Fraction(0))


def quadratic_form_line(P: Pencil, v: Sequence[object],
                        w: Mapping[int, object] | Sequence[object]) -> tuple[Fraction, Fraction]:
    """(v^T A0 v, sum_i w_i v^T A_i v)."""
    if len(v) != P.size:
        raise ValueError(f"vector has {len(v)} entries, pencil has size {P.size}")
    v = [Fraction(x) for x in v]
    weights = P._weights(w)
    c1 = sum((wi * _quad(P.A[i], v) for i, wi in weights.items() if wi), Fraction(0))
    return _quad(P.A0, v), c1


# --------------------------------------------------------------------------
# Renegar derivative and the restriction property

def renegar_derivative(p: Mapping[Monomial, object], k: int, d: int | None = None) -> Poly:
    """k-th derivative in x_0 of the degree-d homogenisation, at x_0 = 1."""
    d = poly_degree(p) if d is None else d
    if k < 0 or k > d:
        raise ValueError(f"order {k} outside [0, {d}]")
    out: Poly = {}
    for key, c in p.items():
        e = d - len(key)
        if e < 0:
            raise ValueError("monomial degree exceeds the virtual degree")
        if k <= e and c:
            out[key] = Fraction(c) * (factorial(e) // factorial(e - k))
    return out


def renegar_extension(p: Mapping[Monomial, object], d: int | None = None,
                      y: int | None = None) -> tuple[Poly, int]:
    """p + y p^(1) with a fresh label for y; returns the polynomial and that label."""
    d = poly_degree(p) if d is None else d
    y = (max(poly_variables(p), default=0) + 1) if y is None else y
    out: Poly = {k: Fraction(c) for k, c in p.items() if c}
    for key, c in renegar_derivative(p, 1, d).items():
        nk = _mono(key + (y,))
        out[nk] = out.get(nk, 0) + c
    return out, y


def renegar_invariance_check(p: Mapping[Monomial, object], grid: Iterable[Sequence[object]],
                             variables: Sequence[int] | None = None, d: int | None = None,
                             mode: str = "exact", precision: int = 128) -> bool:
    """is_psd(M_p(a)) == is_psd(M_{p + y p'}(a, 0)) at every grid point."""
    variables = tuple(variables) if variables is not None else poly_variables(p)
    d = poly_degree(p) if d is None else d
    ext, y = renegar_extension(p, d)
    Pp = pencil_from_lform(lform_from_series(p, variables, d, 3))
    Pe = pencil_from_lform(lform_from_series(ext, variables + (y,), d, 3))
    for a in grid:
        pt = dict(zip(variables, a))
        left = is_psd(Pp.at(pt), mode, precision)
        right = is_psd(Pe.at({**pt, y: 0}), mode, precision)
        if left != right:
            return False
    return True


# --------------------------------------------------------------------------
# extended mold

def extended_mold(variables: Sequence[int], i: int) -> tuple[Monomial, ...]:
    vs = sorted(variables)
    return tuple([()] + [(v,) for v in vs] + [_mono((i, v)) for v in vs])


def extended_mold_matrix(p: Mapping[Monomial, object], i: int,
                         variables: Sequence[int] | None = None,
                         d: int | None = None) -> Matrix:
    """L_p applied entrywise to m m^T for m = (1, x_1..x_n, x_i x_1..x_i x_n)."""
    variables = tuple(variables) if variables is not None else poly_variables(p)
    if i not in variables:
        raise ValueError(f"pivot variable {i} not among {variables}")
    L = lform_from_series(p, variables, d, 4)
    mold = extended_mold(variables, i)
    return _sym([[L(*(u + v)) for v in mold] for u in mold])


# --------------------------------------------------------------------------
# determinantal test polynomials

@dataclass(frozen=True)
class DetRep:
    """det(I_size + sum_i x_i A_i); variable labels are 1..n."""
    size: int
    matrices: tuple[Matrix, ...]

    @property
    def n(self) -> int:
        return len(self.matrices)


def random_detrep(n: int, d: int, seed: int) -> tuple[DetRep, Poly]:
    """Random symmetric rational d x d matrices and the expanded determinant."""
    if not (1 <= n <= 4 and 1 <= d <= 8):
        raise ValueError("random_detrep supports n <= 4 and d <= 8")
    rnd = random.Random(seed)
    mats = []
    for _ in range(n):
        M = [[Fraction(0)] * d for _ in range(d)]
        for r in range(d):
            for c in range(r, d):
                M[r][c] = M[c][r] = Fraction(rnd.randint(-10, 10), rnd.randint(1, 4))
        mats.append(_sym(M))
    rep = DetRep(d, tuple(mats))
    return rep, expand_detrep(rep)


def expand_detrep(rep: DetRep) -> Poly:
    from sympy import QQ, symbols
    from sympy.polys.matrices import DomainMatrix
    gens = symbols(f"x1:{rep.n + 1}")
    R = QQ[gens]
    g = R.gens
    rows = [[(R.one if r == c else R.zero)
             + sum((QQ(M[r][c].numerator, M[r][c].denominator) * g[k]
                    for k, M in enumerate(rep.matrices)), R.zero)
             for c in range(rep.size)] for r in range(rep.size)]
    det = DomainMatrix(rows, (rep.size, rep.size), R).det()
    out: Poly = {}
    for exps, c in det.terms():
        key = tuple(lab for lab, e in zip(range(1, rep.n + 1), exps) for _ in range(e))
        out[key] = Fraction(int(c.numerator), int(c.denominator))
    return out


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    n = len(A)
    return tuple(tuple(sum((A[r][k] * B[k][c] for k in range(n)), Fraction(0))
                       for c in range(n)) for r in range(n))


def _trace(A: Matrix) -> Fraction:
    return sum((A[i][i] for i in range(len(A))), Fraction(0))


def trace_check(rep: DetRep, poly: Poly | None = None) -> bool:
    """L(x_i) = tr A_i, L(x_i x_j) = tr A_i A_j, L(x_i x_j x_k) = tr A_i A_j A_k.

    Both the coefficient formulas and the log series are compared.
    """
    poly = expand_detrep(rep) if poly is None else poly
    labels = tuple(range(1, rep.n + 1))
    tables = (lform_from_coeffs(poly, labels, rep.size),
              lform_from_series(poly, labels, rep.size, 3))
    if tables[0].d != rep.size or tables[1].d != rep.size:
        return False
    A = dict(zip(labels, rep.matrices))
    for key in _monomials(labels, 3):
        prodm = A[key[0]]
        for lab in key[1:]:
            prodm = _matmul(prodm, A[lab])
        t = _trace(prodm)
        if any(T(*key) != t for T in tables):
            return False
    return True
