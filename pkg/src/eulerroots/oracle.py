"""
Certified real roots and certified pencil intervals.

Everything here is decided with exact integer or rational arithmetic; the
intervals returned have dyadic endpoints stored as ``Fraction``.  Interval
big-float helpers for the radical-bearing bound formulas live here too.
"""

from __future__ import annotations

import contextlib
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import mpmath
from mpmath import iv
from mpmath.libmp import to_rational

from .eulerpoly import UniPoly

__all__ = [
    "CertifiedInterval", "NotRealRooted", "PreconditionError", "NotNearSingular",
    "interval_precision", "to_iv", "from_iv", "real_roots", "extreme_abs_root",
    "interlaces", "pencil_line_interval", "PencilInterval", "kernel_vector",
    "sturm_count",
]


class NotRealRooted(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class NotNearSingular(ValueError):
    pass


# --------------------------------------------------------------------------
# intervals

@dataclass(frozen=True)
class CertifiedInterval:
    """Closed interval [lo, hi] with exact endpoints; ``bits`` is the working precision."""
    lo: Fraction
    hi: Fraction
    bits: int = 0

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x, bits: int = 0) -> "CertifiedInterval":
        return cls(Fraction(x), Fraction(x), bits)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def certainly_lt(self, other: "CertifiedInterval | Fraction | int") -> bool:
        return self.hi < (other.lo if isinstance(other, CertifiedInterval) else other)

    def certainly_le(self, other: "CertifiedInterval | Fraction | int") -> bool:
        return self.hi <= (other.lo if isinstance(other, CertifiedInterval) else other)

    def certainly_gt(self, other) -> bool:
        return self.lo > (other.hi if isinstance(other, CertifiedInterval) else other)

    def certainly_ge(self, other) -> bool:
        return self.lo >= (other.hi if isinstance(other, CertifiedInterval) else other)

    def __neg__(self) -> "CertifiedInterval":
        return CertifiedInterval(-self.hi, -self.lo, self.bits)

    def abs(self) -> "CertifiedInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return CertifiedInterval(0, max(-self.lo, self.hi), self.bits)

    def reciprocal(self) -> "CertifiedInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains 0")
        return CertifiedInterval(1 / self.hi, 1 / self.lo, self.bits)

    def to_iv(self):
        return iv.mpf([to_iv(self.lo).a, to_iv(self.hi).b])


@contextlib.contextmanager
def interval_precision(bits: int) -> Iterator[None]:
    """Temporarily set the working precision of ``mpmath.iv``.

    The setting is global to the process, so interval code is not
    thread-safe; parallel callers should use processes.
    """
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def to_iv(x):
    """Outward-rounded interval enclosing an int or Fraction."""
    if isinstance(x, CertifiedInterval):
        return x.to_iv()
    x = Fraction(x)
    if x.denominator == 1:
        return iv.mpf(x.numerator)
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _mpf_fraction(m) -> Fraction:
    p, q = to_rational(m if isinstance(m, tuple) else m._mpf_)
    return Fraction(p, q)


def from_iv(x, bits: int | None = None) -> CertifiedInterval:
    if not hasattr(x, "_mpi_"):
        x = iv.mpf(x)
    a, b = x._mpi_
    return CertifiedInterval(_mpf_fraction(a), _mpf_fraction(b),
                             iv.prec if bits is None else bits)


# --------------------------------------------------------------------------
# exact polynomial arithmetic for Sturm sequences (lists, increasing degree)

def _trim(c: list) -> list:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def _divmod(a: list, b: list) -> tuple[list, list]:
    a = [Fraction(x) for x in a]
    b = _trim([Fraction(x) for x in b])
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(1, len(a) - len(b) + 1)
    while len(a) >= len(b) and a != [0]:
        f = a[-1] / b[-1]
        s = len(a) - len(b)
        q[s] = f
        for i, bc in enumerate(b):
            a[s + i] -= f * bc
        a.pop()
        _trim(a)
        if not a:
            a = [Fraction(0)]
    return _trim(q), _trim(a) if a else [Fraction(0)]


def _gcd(a: list, b: list) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b != [0]:
        a, b = b, _divmod(a, b)[1]
    return [x / a[-1] for x in a]


def _deriv(a: list) -> list:
    return _trim([i * a[i] for i in range(1, len(a))] or [Fraction(0)])


def _integer_primitive(a: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in a:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in a]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return [v // g for v in ints] if g else ints


def _sign_at(c: Sequence[int], num: int, shift: int) -> int:
    """Sign of sum c_i (num / 2^shift)^i, computed exactly."""
    d = len(c) - 1
    acc = 0
    for i in range(d, -1, -1):
        acc = acc * num + c[i] * (1 << (shift * (d - i)))
    return (acc > 0) - (acc < 0)


def _sign_frac(c: Sequence[int], x: Fraction) -> int:
    d = len(c) - 1
    p, q = x.numerator, x.denominator
    acc = 0
    for i in range(d, -1, -1):
        acc = acc * p + c[i] * q ** (d - i)
    return (acc > 0) - (acc < 0)


def _sturm_chain(c: list[int]) -> list[list[int]]:
    chain = [[Fraction(x) for x in c]]
    chain.append(_deriv(chain[0]))
    while chain[-1] != [0] and len(chain[-1]) > 1:
        r = _divmod(chain[-2], chain[-1])[1]
        if r == [0]:
            break
        chain.append([-x for x in r])
    return [_integer_primitive(p) if p != [0] else [0] for p in chain]


def _variations(chain, x: Fraction) -> int:
    signs = [s for s in (_sign_frac(p, x) for p in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(p: UniPoly, lo: Fraction, hi: Fraction) -> int:
    """Number of distinct real roots of p in (lo, hi]."""
    sq = _squarefree(p)
    chain = _sturm_chain(sq)
    return _variations(chain, Fraction(lo)) - _variations(chain, Fraction(hi))


def _squarefree(p: UniPoly) -> list[int]:
    a = [Fraction(x) for x in p.coeffs]
    if len(a) <= 1:
        return _integer_primitive(a)
    g = _gcd(a, _deriv(a))
    q, r = _divmod(a, g)
    return _integer_primitive(q)


def _root_radius(c: Sequence[int]) -> Fraction:
    """Cauchy bound: every root has modulus < 1 + max|c_i / c_d|, rounded up to 2^k."""
    lead = abs(c[-1])
    m = max(abs(x) for x in c[:-1]) if len(c) > 1 else 0
    bound = 1 + Fraction(m, lead)
    return Fraction(2) ** max(0, math.ceil(math.log2(bound)) + 1)


def real_roots(p: UniPoly, precision: int = 128) -> list[CertifiedInterval]:
    """Distinct real roots, sorted, each in a sign-change interval of width <= 2^-precision.

    Raises ``NotRealRooted`` when the squarefree part has non-real roots.
    """
    if p.degree < 1:
        return []
    c = _squarefree(p)
    deg = len(c) - 1
    if deg == 0:
        return []
    chain = _sturm_chain(c)
    R = _root_radius(c)
    total = _variations(chain, -R) - _variations(chain, R)
    if total < deg:
        raise NotRealRooted(f"only {total} of {deg} distinct roots are real")
    # isolate with Sturm bisection on dyadic points
    isolated: list[tuple[Fraction, Fraction]] = []
    stack = [(-R, R, total)]
    while stack:
        lo, hi, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        left = _variations(chain, lo) - _variations(chain, mid)
        stack.append((lo, mid, left))
        stack.append((mid, hi, k - left))
    isolated.sort()
    out = []
    target = Fraction(1, 2 ** precision)
    for lo, hi in isolated:
        # root in (lo, hi]; handle a root sitting exactly on hi
        if _sign_frac(c, hi) == 0:
            out.append(CertifiedInterval(hi, hi, precision))
            continue
        slo = _sign_frac(c, lo)
        if slo == 0:
            # lo is a root of a neighbouring interval; nudge inward
            step = (hi - lo) / 2
            while _sign_frac(c, lo + step) == 0 or _count_between(chain, lo + step, hi) != 1:
                step /= 2
            lo = lo + step
            slo = _sign_frac(c, lo)
        out.append(_refine(c, lo, hi, slo, target, precision))
    return out


def _count_between(chain, lo: Fraction, hi: Fraction) -> int:
    return _variations(chain, lo) - _variations(chain, hi)


def _refine(c, lo: Fraction, hi: Fraction, slo: int, target: Fraction, bits: int) -> CertifiedInterval:
    """Bisection on a sign change using integer evaluation at dyadic points."""
    # put endpoints on a common dyadic grid
    den = max(lo.denominator, hi.denominator)
    shift = den.bit_length() - 1
    if 1 << shift != den:
        raise AssertionError("isolation points must be dyadic")
    a, b = lo.numerator * (den // lo.denominator), hi.numerator * (den // hi.denominator)
    while Fraction(b - a, 1 << shift) > target:
        a, b, shift = 2 * a, 2 * b, shift + 1
        m = (a + b) // 2
        s = _sign_at(c, m, shift)
        if s == 0:
            return CertifiedInterval(Fraction(m, 1 << shift), Fraction(m, 1 << shift), bits)
        if s == slo:
            a = m
        else:
            b = m
    return CertifiedInterval(Fraction(a, 1 << shift), Fraction(b, 1 << shift), bits)


def extreme_abs_root(p: UniPoly, precision: int = 128) -> CertifiedInterval:
    """Interval for max |root| of a real-rooted polynomial."""
    roots = real_roots(p, precision)
    if not roots:
        raise ValueError("polynomial has no roots")
    best = max((r.abs() for r in roots), key=lambda r: r.hi)
    lo = max(r.abs().lo for r in roots)
    return CertifiedInterval(lo, best.hi, precision)


def roots_by_magnitude(p: UniPoly, precision: int = 128) -> list[CertifiedInterval]:
    """|roots| sorted decreasingly (assumes the intervals are already disjoint in modulus)."""
    return sorted((r.abs() for r in real_roots(p, precision)), key=lambda r: r.mid, reverse=True)


def interlaces(q: UniPoly, p: UniPoly, precision: int = 64) -> bool:
    """True when q (degree deg p - 1) has real roots alternating with those of p."""
    if q.degree != p.degree - 1:
        return False
    rp = real_roots(p, precision)
    rq = real_roots(q, precision)
    if len(rp) != p.degree or len(rq) != q.degree:
        return False
    return all(rp[i].hi < rq[i].lo and rq[i].hi < rp[i + 1].lo for i in range(len(rq)))


# --------------------------------------------------------------------------
# pencil intervals

@dataclass(frozen=True)
class PencilInterval:
    """PSD section {t : A0 + t B >= 0}; ``None`` marks an unbounded side."""
    lower: CertifiedInterval | None
    upper: CertifiedInterval | None

    @property
    def lower_unbounded(self) -> bool:
        return self.lower is None

    @property
    def upper_unbounded(self) -> bool:
        return self.upper is None


def _drop_zero_rows(A0, B):
    n = len(A0)
    keep = [i for i in range(n) if any(A0[i][j] for j in range(n)) or any(B[i][j] for j in range(n))]
    return ([[A0[i][j] for j in keep] for i in keep], [[B[i][j] for j in keep] for i in keep])


def _integer_scaled(A0, B):
    den = 1
    for M in (A0, B):
        for row in M:
            for x in row:
                den = den * x.denominator // math.gcd(den, x.denominator)
    return ([[int(x * den) for x in r] for r in A0], [[int(x * den) for x in r] for r in B])


def _probe(A0i, Bi, num: int, shift: int) -> bool:
    from .rzcore import _ldl_psd_exact
    scale = 1 << shift
    M = [[a * scale + num * b for a, b in zip(ra, rb)] for ra, rb in zip(A0i, Bi)]
    return _ldl_psd_exact(M)


def _endpoint(A0i, Bi, sign: int, precision: int) -> CertifiedInterval | None:
    from .rzcore import _ldl_psd_exact
    if _ldl_psd_exact([[sign * b for b in r] for r in Bi]):
        return None
    # invariant: PSD at sign * a / 2^shift, not PSD at sign * b / 2^shift
    if _probe(A0i, Bi, sign, 0):
        e = 1
        while _probe(A0i, Bi, sign * (1 << e), 0):
            e += 1
        a, b, shift = 1 << (e - 1), 1 << e, 0
    else:
        a, b, shift = 0, 1, 0
    while Fraction(b - a, 1 << shift) > Fraction(1, 1 << precision):
        a, b, shift = 2 * a, 2 * b, shift + 1
        m = (a + b) // 2
        if _probe(A0i, Bi, sign * m, shift):
            a = m
        else:
            b = m
    ta, tb = Fraction(sign * a, 1 << shift), Fraction(sign * b, 1 << shift)
    return CertifiedInterval(min(ta, tb), max(ta, tb), precision)


def pencil_line_interval(P, w, precision: int = 128) -> PencilInterval:
    """Maximal interval around 0 on which A0 + t sum_i w_i A_i is PSD.

    Probes are exact rational PSD tests at dyadic t, so every returned
    endpoint interval has a PSD end and a non-PSD end.
    """
    from .rzcore import _ldl_psd_exact
    A0, B = _drop_zero_rows(P.A0, P.combine(w))
    if not _ldl_psd_exact(A0):
        raise PreconditionError("A0 is not PSD")
    if not A0:
        return PencilInterval(None, None)
    A0i, Bi = _integer_scaled(A0, B)
    return PencilInterval(_endpoint(A0i, Bi, -1, precision), _endpoint(A0i, Bi, 1, precision))


def kernel_vector(M: Sequence[Sequence[object]], precision: int = 128,
                  tolerance: float | None = None) -> list:
    """Unit sup-norm vector spanning the near-null space of a symmetric matrix.

    Sign fixed so the last entry of non-negligible size is positive.
    """
    n = len(M)
    with mpmath.workprec(precision):
        A = mpmath.matrix(n, n)
        for r in range(n):
            for c in range(n):
                x = Fraction(M[r][c])
                A[r, c] = mpmath.mpf(x.numerator) / x.denominator
        if n == 1:  # eigsy does not accept 1x1 input
            E, Q = [A[0, 0]], mpmath.matrix([[1]])
        else:
            E, Q = mpmath.eigsy(A)
        k = min(range(n), key=lambda i: abs(E[i]))
        scale = max(mpmath.mnorm(A, 1), 1)
        tol = mpmath.mpf(2) ** (-precision // 2) if tolerance is None else mpmath.mpf(tolerance)
        if abs(E[k]) > tol * scale:
            raise NotNearSingular(f"smallest eigenvalue {mpmath.nstr(E[k], 5)} is not near 0")
        v = [Q[i, k] for i in range(n)]
        top = max(abs(x) for x in v)
        v = [x / top for x in v]
        eps = mpmath.mpf(2) ** (-precision // 4)
        for x in reversed(v):
            if abs(x) > eps:
                if x < 0:
                    v = [-y for y in v]
                break
        return v
