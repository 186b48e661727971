"""
Permutations, descent-top statistics and exact counting formulas.

Permutations are tuples in one-line notation over ``1..m``.  A top set is a
``frozenset`` of integers in ``[2, m]``; the value 1 can never be the larger
entry of an adjacent pair, so it is rejected on construction.

Every closed counting formula here has a brute-force twin that enumerates
the symmetric group directly.  The twins are capped (``DEFAULT_CAP``) since
the fibre tables grow like ``(n + 1)!``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache
from math import comb, factorial, prod
from typing import Iterable, Sequence

__all__ = [
    "DEFAULT_CAP", "CapExceeded", "FormulaMismatch",
    "permutation", "topset", "descent_tops", "ascent_tops", "excedance_set",
    "descent_top_fibers", "excedance_fibers",
    "exact_count_bruteforce", "alpha_op", "beta_hat_factorial",
    "contained_count", "contained_count_bruteforce",
    "exact_count", "exact_count_complement", "exact_count_deletion",
    "closed_form_exact_count", "at_least_count", "at_least_count_bruteforce",
    "eulerian_number", "tau", "mirror_bijection", "verify_sum_identity",
    "excedance_count", "subsets", "sum_identity_values",
]

DEFAULT_CAP = 9

Permutation = tuple[int, ...]
TopSet = frozenset[int]


class CapExceeded(ValueError):
    """Enumeration would exceed the configured size cap."""


class FormulaMismatch(ArithmeticError):
    """Two routes to the same count disagree (a transcription bug)."""


def permutation(word: Iterable[int]) -> Permutation:
    w = tuple(int(a) for a in word)
    if sorted(w) != list(range(1, len(w) + 1)):
        raise ValueError(f"not a permutation of 1..{len(w)}: {w}")
    return w


def topset(elements: Iterable[int], m: int | None = None) -> TopSet:
    s = frozenset(int(e) for e in elements)
    if 1 in s or any(e < 1 for e in s):
        raise ValueError(f"top sets live in [2, m], got {sorted(s)}")
    if m is not None and s and max(s) > m:
        raise ValueError(f"element {max(s)} exceeds ambient size {m}")
    return s


def subsets(s: Iterable[int]):
    """All subsets of ``s`` as frozensets, smallest first."""
    items = sorted(s)
    for r in range(len(items) + 1):
        for c in itertools.combinations(items, r):
            yield frozenset(c)


def descent_tops(p: Sequence[int]) -> TopSet:
    return frozenset(a for a, b in zip(p, p[1:]) if a > b)


def ascent_tops(p: Sequence[int]) -> TopSet:
    return frozenset(b for a, b in zip(p, p[1:]) if a < b)


def excedance_set(p: Sequence[int]) -> TopSet:
    """Values ``p(i)`` with ``p(i) > i``; never contains 1."""
    return frozenset(a for i, a in enumerate(p, start=1) if a > i)


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceeded(f"n={n} exceeds the enumeration cap {cap} "
                          f"(would scan {factorial(n + 1)} permutations)")


@lru_cache(maxsize=None)
def descent_top_fibers(n: int) -> dict[TopSet, int]:
    """Map each descent-top set to its number of preimages in S_{n+1}."""
    return dict(Counter(descent_tops(p)
                        for p in itertools.permutations(range(1, n + 2))))


@lru_cache(maxsize=None)
def excedance_fibers(n: int) -> dict[TopSet, int]:
    return dict(Counter(excedance_set(p)
                        for p in itertools.permutations(range(1, n + 2))))


def exact_count_bruteforce(n: int, X: Iterable[int], cap: int = DEFAULT_CAP) -> int:
    """#{sigma in S_{n+1} : DT(sigma) = X} by full enumeration."""
    _check_cap(n, cap)
    return descent_top_fibers(n).get(topset(X, n + 1), 0)


def contained_count_bruteforce(n: int, X: Iterable[int], cap: int = DEFAULT_CAP) -> int:
    _check_cap(n, cap)
    X = topset(X, n + 1)
    return sum(c for k, c in descent_top_fibers(n).items() if k <= X)


def alpha_op(X: Iterable[int]) -> tuple[int, ...]:
    xs = sorted(X)
    return tuple(b - a for a, b in zip([1] + xs, xs))


def beta_hat_factorial(b: Sequence[int]) -> int:
    # (k+1)^{b_1} k^{b_2} ... 2^{b_k}
    k = len(b)
    return prod((k + 1 - i) ** e for i, e in enumerate(b))


def contained_count(n: int, X: Iterable[int]) -> int:
    """#{sigma in S_{n+1} : DT(sigma) is a subset of X}."""
    return beta_hat_factorial(alpha_op(topset(X, n + 1)))


def exact_count_deletion(X: Iterable[int]) -> int:
    X = topset(X)
    return sum((-1) ** (len(X) - len(J)) * beta_hat_factorial(alpha_op(J))
               for J in subsets(X))


def _full_realisation(m: int, xs: Sequence[int]) -> int:
    # permutations of [m] whose descent tops include all of xs (sorted)
    return factorial(m - len(xs)) * prod(x - i for i, x in enumerate(xs, start=1))


def exact_count_complement(n: int, X: Iterable[int]) -> int:
    """Inclusion-exclusion over supersets of X inside [1, n+1]."""
    X = topset(X, n + 1)
    m = n + 1
    rest = [y for y in range(1, m + 1) if y not in X]
    total = 0
    for S in subsets(rest):
        total += (-1) ** len(S) * _full_realisation(m, sorted(X | S))
    return total


def exact_count(n: int, X: Iterable[int], crosscheck: bool | None = None) -> int:
    """#{sigma in S_{n+1} : DT(sigma) = X}.

    The deletion sum over subsets of X is always evaluated.  The complement
    sum costs ``2^(n+1-|X|)`` terms and is added as a cross-check by default
    for ``n <= 16``; a disagreement raises ``FormulaMismatch``.
    """
    X = topset(X, n + 1)
    value = exact_count_deletion(X)
    if crosscheck is None:
        crosscheck = n <= 16
    if crosscheck:
        other = exact_count_complement(n, X)
        if other != value:
            raise FormulaMismatch(f"R({n},{sorted(X)}): deletion {value} != complement {other}")
    return value


def closed_form_exact_count(X: Iterable[int]) -> int:
    """Explicit formulas for top sets of size at most three."""
    xs = sorted(topset(X))
    if len(xs) == 0:
        return 1
    if len(xs) == 1:
        (a,) = xs
        return 2 ** (a - 1) - 1
    if len(xs) == 2:
        a, b = xs
        return 3 ** (a - 1) * 2 ** (b - a) - (2 ** (a - 1) + 2 ** (b - 1)) + 1
    if len(xs) == 3:
        a, b, c = xs
        return (4 ** (a - 1) * 3 ** (b - a) * 2 ** (c - b)
                - (3 ** (a - 1) * 2 ** (b - a) + 3 ** (b - 1) * 2 ** (c - b)
                   + 3 ** (a - 1) * 2 ** (c - a))
                + (2 ** (a - 1) + 2 ** (b - 1) + 2 ** (c - 1))
                - 1)
    raise NotImplementedError("closed forms only cover |X| <= 3")


def at_least_count(n: int, s: int, X: Iterable[int]) -> int:
    """Permutations of [n] with exactly s descents whose top lies in X.

    Both summation forms are evaluated and must agree.  With ``s = |X|``
    this is the number of permutations whose descent tops contain X.
    """
    X = topset(X)
    Xn = sorted(x for x in X if x <= n)
    Xc = [y for y in range(1, n + 1) if y not in X]
    if not 0 <= s <= len(Xn):
        raise ValueError(f"need 0 <= s <= |X cap [n]| = {len(Xn)}, got s={s}")
    c = len(Xc)

    def a_(j):
        return sum(1 for y in Xc if y > j)

    def b_(j):
        return sum(1 for y in Xc if y < j)

    first = factorial(c) * sum(
        (-1) ** (s - r) * comb(c + r, r) * comb(n + 1, s - r)
        * prod(1 + r + a_(x) for x in Xn)
        for r in range(s + 1))
    t = len(Xn) - s
    second = factorial(c) * sum(
        (-1) ** (t - r) * comb(c + r, r) * comb(n + 1, t - r)
        * prod(r + b_(x) for x in Xn)
        for r in range(t + 1))
    if first != second:
        raise FormulaMismatch(f"P^{sorted(X)}_{{{n},{s}}}: {first} != {second}")
    if s == len(Xn):
        third = _full_realisation(n, Xn)
        if third != first:
            raise FormulaMismatch(f"P^{sorted(X)}_{{{n},{s}}}: {first} != product form {third}")
    return first


def at_least_count_bruteforce(n: int, s: int, X: Iterable[int], cap: int = DEFAULT_CAP) -> int:
    _check_cap(n - 1, cap)
    X = topset(X)
    return sum(1 for p in itertools.permutations(range(1, n + 1))
               if len(descent_tops(p) & X) == s)


def eulerian_number(m: int, k: int) -> int:
    """Permutations of [m] with exactly k descents."""
    if not 0 <= k < m:
        if m == 0 and k == 0:
            return 1
        return 0
    return sum((-1) ** i * comb(m + 1, i) * (k + 1 - i) ** m for i in range(k + 1))


def tau(n: int, i: int) -> int:
    """The order-reversing involution of [2, n+1]."""
    return n + 3 - i


def mirror_bijection(p: Sequence[int]) -> Permutation:
    """Cut at the entry 1, swap the two blocks and reverse all values.

    Sends the fibre DT = L onto the fibre DT = tau([2, n+1] minus L).
    """
    p = permutation(p)
    n = len(p) - 1
    k = p.index(1)
    prefix, suffix = p[:k], p[k + 1:]
    return tuple(tau(n, a) for a in suffix) + (1,) + tuple(tau(n, a) for a in prefix)


def _tau_set(s: int, J: Iterable[int]) -> TopSet:
    return frozenset(tau(s, j) for j in J)


def _hat(J: Iterable[int]) -> int:
    return beta_hat_factorial(alpha_op(J))


def sum_identity_values(n: int, K: Iterable[int]) -> dict[str, list[int]]:
    """Both sides of the three mirror-symmetry sum identities for one K.

    Each entry is a chain of values that must all coincide.
    """
    K = topset(K, n + 1)
    full = frozenset(range(2, n + 2))
    L = full - K
    top = frozenset([n + 2])
    tK = _tau_set(n, K)
    chains: dict[str, list[int]] = {}

    chains["mirror"] = [
        sum((-1) ** (n - len(K | J)) * _hat(J) for J in subsets(L)),
        sum((-1) ** len(K - J) * _hat(_tau_set(n, J)) for J in subsets(K)),
        sum((-1) ** len(tK - S) * _hat(S) for S in subsets(tK)),
        exact_count(n, L),
        exact_count(n, tK),
    ]
    chains["mirror_swapped"] = [
        sum((-1) ** (n - len(K | J)) * _hat(_tau_set(n, J)) for J in subsets(L)),
        sum((-1) ** len(K - J) * _hat(J) for J in subsets(K)),
    ]
    chains["sequential"] = [
        sum((-1) ** (n - len(K) - len(J)) * (_hat(J | top) - _hat(J)) for J in subsets(L)),
        sum((-1) ** (n - len(K) - len(J)) * (_hat(_tau_set(n, J | {1})) - _hat(_tau_set(n, J)))
            for J in subsets(full - tK)),
        sum((-1) ** (len(K) - len(J)) * _hat(_tau_set(n + 1, J)) for J in subsets(K)),
        sum((-1) ** (len(K) - len(J)) * (len(J) + 1) * _hat(_tau_set(n, J)) for J in subsets(K)),
        exact_count(n + 1, (full | top) - K),
        exact_count(n + 1, _tau_set(n + 1, K)),
    ]
    chains["sequential_shift"] = [
        exact_count(n + 1, (full | top) - (K | top)),
        exact_count(n, L),
    ]
    chains["reordering"] = [
        sum((-1) ** (n - len(K) + len(J)) * _hat(J | top) for J in subsets(L)),
        sum((-1) ** (len(K) - len(J)) * (len(J) + 2) * _hat(_tau_set(n, J)) for J in subsets(K)),
    ]
    return chains


def verify_sum_identity(n: int, K: Iterable[int]) -> bool:
    """True iff every chain from ``sum_identity_values`` is constant."""
    return all(len(set(v)) == 1 for v in sum_identity_values(n, K).values())


def excedance_count(n: int, X: Iterable[int], cap: int = DEFAULT_CAP) -> int:
    """#{sigma in S_{n+1} : excedance values = X} by enumeration."""
    _check_cap(n, cap)
    return excedance_fibers(n).get(topset(X, n + 1), 0)
