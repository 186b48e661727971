"""
Univariate and multivariate Eulerian polynomials.

``UniPoly`` stores coefficients in increasing degree.  ``MultiAffinePoly``
maps a set of variable indices to a coefficient; the Eulerian instances use
the variables ``x_2 .. x_{n+1}`` (index 1 never occurs as a descent top).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Iterable, Mapping, Sequence

from . import permstat
from .permstat import DEFAULT_CAP, CapExceeded

__all__ = [
    "UniPoly", "MultiAffinePoly", "BiPoly",
    "univariate_eulerian", "univariate_eulerian_bruteforce",
    "multivariate_eulerian", "laminated_eulerian", "laminated_homogeneous",
    "restrict_direction", "reciprocal_uni", "is_palindromic",
    "reciprocal_multiaffine", "mirror", "is_mirrorreciprocal",
    "is_monomialmaximal", "interlacer_extension", "InterlacingError",
]

Number = int | Fraction


@dataclass(frozen=True)
class UniPoly:
    """Dense univariate polynomial, ``coeffs[i]`` multiplies ``x**i``."""
    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) if c else (0,))

    @classmethod
    def of(cls, *coeffs) -> "UniPoly":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        return -1 if self.coeffs == (0,) else len(self.coeffs) - 1

    def __getitem__(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(tuple(self[i] + other[i] for i in range(n)))

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(tuple(self[i] - other[i] for i in range(n)))

    def __mul__(self, other: "UniPoly | int | Fraction") -> "UniPoly":
        if not isinstance(other, UniPoly):
            return UniPoly(tuple(c * other for c in self.coeffs))
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return UniPoly(tuple(out))

    __rmul__ = __mul__

    def derivative(self) -> "UniPoly":
        return UniPoly(tuple(i * c for i, c in enumerate(self.coeffs))[1:] or (0,))

    def compose_neg(self) -> "UniPoly":
        """p(-x)."""
        return UniPoly(tuple(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)))

    def __repr__(self):
        return f"UniPoly({list(self.coeffs)})"


X = UniPoly((0, 1))
ONE = UniPoly((1,))


@lru_cache(maxsize=None)
def univariate_eulerian(n: int) -> UniPoly:
    """A_n with A_1 = 1 + x and A_n = x(1-x)A'_{n-1} + (1 + nx)A_{n-1}."""
    if n < 1:
        raise ValueError("n >= 1 required")
    if n == 1:
        return UniPoly((1, 1))
    prev = univariate_eulerian(n - 1)
    return X * (ONE - X) * prev.derivative() + UniPoly((1, n)) * prev


def univariate_eulerian_bruteforce(n: int, cap: int = DEFAULT_CAP) -> UniPoly:
    """Descent generating polynomial over S_{n+1} by enumeration."""
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap}")
    coeffs = [0] * (n + 1)
    for p in itertools.permutations(range(n + 1)):
        coeffs[sum(a > b for a, b in zip(p, p[1:]))] += 1
    return UniPoly(tuple(coeffs))


@dataclass(frozen=True)
class MultiAffinePoly:
    """Multiaffine polynomial: {frozenset of variable indices: coefficient}."""
    terms: Mapping[frozenset, Number]
    variables: tuple[int, ...]

    def __post_init__(self):
        clean = {frozenset(k): v for k, v in self.terms.items() if v != 0}
        vs = set(self.variables)
        for k in clean:
            if not k <= vs:
                raise ValueError(f"monomial {sorted(k)} uses unknown variables")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "variables", tuple(self.variables))

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def coeff(self, S: Iterable[int]) -> Number:
        return self.terms.get(frozenset(S), 0)

    def diagonal(self) -> UniPoly:
        out = [0] * (self.nvars + 1)
        for k, c in self.terms.items():
            out[len(k)] += c
        return UniPoly(tuple(out))

    def max_degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def relabel(self, mapping: Mapping[int, int]) -> "MultiAffinePoly":
        return MultiAffinePoly(
            {frozenset(mapping[i] for i in k): c for k, c in self.terms.items()},
            tuple(mapping[i] for i in self.variables))

    def __eq__(self, other):
        if not isinstance(other, MultiAffinePoly):
            return NotImplemented
        return set(self.variables) == set(other.variables) and self.terms == other.terms

    def __hash__(self):
        return hash((frozenset(self.terms.items()), frozenset(self.variables)))


def eulerian_variables(n: int) -> tuple[int, ...]:
    return tuple(range(2, n + 2))


@lru_cache(maxsize=None)
def multivariate_eulerian(n: int, max_degree: int | None = None,
                          cap: int = DEFAULT_CAP) -> MultiAffinePoly:
    """Multivariate A_n: coefficient of x^X is #{sigma in S_{n+1}: DT(sigma) = X}.

    Without ``max_degree`` the whole polynomial is built, by enumeration when
    ``n <= cap`` and from the counting formulas otherwise.  With
    ``max_degree`` only monomials of that size or less are kept and they
    always come from the formulas.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    vs = eulerian_variables(n)
    if max_degree is None and n <= cap:
        return MultiAffinePoly(dict(permstat.descent_top_fibers(n)), vs)
    top = n if max_degree is None else min(max_degree, n)
    terms = {}
    for k in range(top + 1):
        for X in itertools.combinations(vs, k):
            terms[frozenset(X)] = permstat.exact_count_deletion(X)
    return MultiAffinePoly(terms, vs)


def laminated_homogeneous(n: int) -> dict[tuple[frozenset, int], int]:
    """Homogeneous laminated polynomials: {(variable set, power of x_0): coeff}.

    Step k multiplies by ``(x_k + x_0)`` and adds ``x_k x_0`` times the sum of
    all first partial derivatives, each step bringing in the fresh variable
    ``x_k``.
    """
    poly = {(frozenset(), 0): 1}
    for k in range(1, n + 1):
        new: dict[tuple[frozenset, int], int] = {}

        def add(key, c):
            new[key] = new.get(key, 0) + c

        for (S, e), c in poly.items():
            add((S | {k}, e), c)
            add((S, e + 1), c)
            # derivative in each x_i (multiaffine) and in x_0
            for i in S:
                add((S - {i} | {k}, e + 1), c)
            if e:
                add((S | {k}, e), c * e)
        poly = {key: c for key, c in new.items() if c}
    return poly


def laminated_eulerian(n: int) -> MultiAffinePoly:
    """Dehomogenised lamination with variable ``x_k`` renamed ``x_{k+1}``."""
    terms: dict[frozenset, int] = {}
    for (S, _), c in laminated_homogeneous(n).items():
        key = frozenset(i + 1 for i in S)
        terms[key] = terms.get(key, 0) + c
    return MultiAffinePoly(terms, eulerian_variables(n))


def restrict_direction(P: MultiAffinePoly, w: Sequence[Number]) -> UniPoly:
    """Substitute x_i = w_i t (weights in the order of ``P.variables``)."""
    if len(w) != P.nvars:
        raise ValueError(f"direction has {len(w)} entries, polynomial has {P.nvars} variables")
    weight = dict(zip(P.variables, w))
    out = [0] * (P.nvars + 1)
    for k, c in P.terms.items():
        out[len(k)] += c * prod(weight[i] for i in k)
    return UniPoly(tuple(out))


def reciprocal_uni(p: UniPoly) -> UniPoly:
    if p.degree < 0:
        raise ValueError("zero polynomial has no reciprocal")
    return UniPoly(tuple(reversed(p.coeffs)))


def is_palindromic(p: UniPoly) -> bool:
    return reciprocal_uni(p) == p


def is_monomialmaximal(P: MultiAffinePoly) -> bool:
    return P.coeff(P.variables) != 0


def reciprocal_multiaffine(P: MultiAffinePoly) -> MultiAffinePoly:
    """Swap each monomial with its complement in the full variable set."""
    if not is_monomialmaximal(P):
        raise ValueError("reciprocal needs a nonzero full-support monomial")
    full = frozenset(P.variables)
    return MultiAffinePoly({full - k: c for k, c in P.terms.items()}, P.variables)


def mirror(P: MultiAffinePoly) -> MultiAffinePoly:
    """Reverse the order of the variables."""
    vs = sorted(P.variables)
    return P.relabel(dict(zip(vs, reversed(vs))))


def is_mirrorreciprocal(P: MultiAffinePoly) -> bool:
    return is_monomialmaximal(P) and reciprocal_multiaffine(P) == mirror(P)


class InterlacingError(ValueError):
    pass


@dataclass(frozen=True)
class BiPoly:
    """Polynomial in (x, y): {(i, j): coefficient of x^i y^j}."""
    terms: Mapping[tuple[int, int], Number] = field(default_factory=dict)

    def coeff(self, i: int, j: int) -> Number:
        return self.terms.get((i, j), 0)

    @property
    def degree(self) -> int:
        return max((i + j for (i, j), c in self.terms.items() if c), default=-1)

    def as_dict(self) -> dict[tuple[int, ...], Number]:
        return {k: v for k, v in self.terms.items() if v}


def interlacer_extension(p: UniPoly, q: UniPoly, check: bool = False,
                         precision: int = 64) -> BiPoly:
    """p + y q.  With ``check`` the roots are isolated and alternation verified."""
    if check:
        from .oracle import interlaces
        if not interlaces(q, p, precision):
            raise InterlacingError("second polynomial does not interlace the first")
    terms = {(i, 0): c for i, c in enumerate(p.coeffs) if c}
    for i, c in enumerate(q.coeffs):
        if c:
            terms[(i, 1)] = terms.get((i, 1), 0) + c
    return BiPoly(terms)
