"""Invariant suites behind ``eulerroots verify``.

Each suite returns a list of ``Check`` records; a suite passes when every
check does.  ``max_n`` bounds the largest index touched.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, asdict
from fractions import Fraction
from typing import Callable

from . import bounds, eulerpoly, oracle, permstat, rzcore

__all__ = ["Check", "SUITES", "run_suite"]


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


def _guard(name: str, fn: Callable[[], object]) -> Check:
    """Run ``fn``; a falsy result or an exception is a failure."""
    try:
        out = fn()
    except Exception as e:  # the report must list every failure, not stop at the first
        return Check(name, False, f"{type(e).__name__}: {e}")
    if isinstance(out, tuple):
        ok, detail = out
        return Check(name, bool(ok), detail)
    return Check(name, bool(out))


def _small_sets(n: int):
    vs = range(2, n + 2)
    for k in range(4):
        for X in itertools.combinations(vs, k):
            yield frozenset(X)


def suite_counting(max_n: int = 8) -> list[Check]:
    out = []
    for n in range(1, max_n + 1):
        def run(n=n):
            for X in _small_sets(n):
                brute = permstat.exact_count_bruteforce(n, X, cap=max(max_n, permstat.DEFAULT_CAP))
                vals = (permstat.closed_form_exact_count(X), permstat.exact_count_deletion(X),
                        permstat.exact_count_complement(n, X))
                if any(v != brute for v in vals):
                    return False, f"X={sorted(X)}: {vals} vs brute force {brute}"
            return True, ""
        out.append(_guard(f"exact counts n={n}", run))
    return out


def suite_eulerian(max_n: int = 9) -> list[Check]:
    out = []
    brute_cap = min(max_n, 9)
    for n in range(1, brute_cap + 1):
        out.append(_guard(f"recurrence = enumeration n={n}", lambda n=n:
                          eulerpoly.univariate_eulerian(n)
                          == eulerpoly.univariate_eulerian_bruteforce(n, cap=brute_cap)))
    for n in range(1, min(max_n, 7) + 1):
        def fiber_sums(n=n):
            for k in range(n + 1):
                s = sum(permstat.exact_count(n, X) for X in itertools.combinations(range(2, n + 2), k))
                if s != permstat.eulerian_number(n + 1, k):
                    return False, f"k={k}: {s}"
            return True, ""
        out.append(_guard(f"fibre sums = Eulerian numbers n={n}", fiber_sums))
        out.append(_guard(f"lamination = multivariate n={n}", lambda n=n:
                          eulerpoly.laminated_eulerian(n) == eulerpoly.multivariate_eulerian(n)))
    out.append(_guard(f"palindromic n<={max(max_n, 50)}", lambda: all(
        eulerpoly.is_palindromic(eulerpoly.univariate_eulerian(n)) for n in range(1, max(max_n, 50) + 1))))
    return out


def suite_mirror(max_n: int = 7) -> list[Check]:
    out = []
    for n in range(1, max_n + 1):
        out.append(_guard(f"mirrorreciprocal n={n}", lambda n=n:
                          eulerpoly.is_mirrorreciprocal(eulerpoly.multivariate_eulerian(n))))
    for n in range(1, min(max_n, 6) + 1):
        def bijective(n=n):
            full = frozenset(range(2, n + 2))
            seen = set()
            for p in itertools.permutations(range(1, n + 2)):
                q = permstat.mirror_bijection(p)
                target = frozenset(permstat.tau(n, x) for x in full - permstat.descent_tops(p))
                if permstat.descent_tops(q) != target:
                    return False, f"{p} -> {q}"
                seen.add(q)
            return len(seen) == len(set(itertools.permutations(range(1, n + 2)))), ""
        out.append(_guard(f"mirror bijection n={n}", bijective))
        out.append(_guard(f"sum identities n={n}", lambda n=n: all(
            permstat.verify_sum_identity(n, K) for K in permstat.subsets(range(2, n + 2)))))
    return out


def suite_relaxation(max_n: int = 12, samples: int = 10, seed: int = 0) -> list[Check]:
    out = []
    for n in range(1, max_n + 1):
        out.append(_guard(f"L-table closed form = series n={n}", lambda n=n:
                          rzcore.lform_eulerian(n).same_values(rzcore.lform_eulerian_generic(n))))
        out.append(_guard(f"A0 PSD n={n}", lambda n=n:
                          rzcore.is_psd(bounds.eulerian_pencil(n).A0)))

    def quadratic():
        P = rzcore.pencil_from_lform(rzcore.lform_univariate_eulerian(2))
        det = rzcore.det_pencil_line(P.A0, P.A[1])
        return det == eulerpoly.UniPoly((12, 48, 12)), str(det)
    out.append(_guard("univariate pencil det at n=2", quadratic))

    rng = random.Random(seed)

    def detreps():
        for _ in range(samples):
            rep, poly = rzcore.random_detrep(2, 3, rng.randrange(10 ** 9))
            if not rzcore.trace_check(rep, poly):
                return False, "trace identity"
            if not all(rzcore.is_psd(rzcore.extended_mold_matrix(poly, i)) for i in (1, 2)):
                return False, "extended mold"
            grid = [(Fraction(rng.randint(-8, 8), 4), Fraction(rng.randint(-8, 8), 4)) for _ in range(10)]
            if not rzcore.renegar_invariance_check(poly, grid):
                return False, "restriction invariance"
        return True, ""
    out.append(_guard("random determinantal polynomials", detreps))
    return out


def suite_bounds(max_n: int = 14, precision: int = 256) -> list[Check]:
    out = []
    lowers = ("colucci", "uni_relax", "uni_vec11", "unit_binary", "bivar", "multi_v1", "multi_v2",
              "sobolev_min", "dlg_relax", "pencil_bisect")
    for n in range(3, max_n + 1):
        def sound(n=n):
            q = oracle.extreme_abs_root(eulerpoly.univariate_eulerian(n), precision)
            for m in lowers:
                if m == "multi_v2" and (n % 2 or n < 6):
                    continue
                r = bounds.compute_bound(m, n, precision)
                if not r.value.certainly_le(q):
                    return False, f"{m} = {float(r.value)} exceeds {float(q)}"
            for m in ("mezo_majorant", "sobolev_maj"):
                r = bounds.compute_bound(m, n, precision)
                if not r.value.certainly_ge(q):
                    return False, f"{m} below the root"
            return True, ""
        out.append(_guard(f"soundness n={n}", sound))
    for n in range(6, max_n + 1, 2):
        out.append(_guard(f"ladder n={n}", lambda n=n: ladder_ok(n, precision)))
    return out


LADDER = (("colucci",), ("unit_binary",), ("uni_relax",), ("bivar", "multi_v1", "multi_v2"))


def ladder_ok(n: int, precision: int = 256) -> tuple[bool, str]:
    """colucci <= unit_binary(n+1) <= uni_relax <= {bivar, multi_v1, multi_v2} <= root <= mezo."""
    q = oracle.extreme_abs_root(eulerpoly.univariate_eulerian(n), precision)
    vals = {m: bounds.compute_bound(m, n, precision).value
            for step in LADDER for m in step if not (m == "multi_v2" and (n % 2 or n < 6))}
    mezo = bounds.mezo_majorant(n, precision).value
    for lower, upper in zip(LADDER, LADDER[1:]):
        for a in lower:
            for b in upper:
                if a in vals and b in vals and not vals[a].certainly_le(vals[b]):
                    return False, f"{a} > {b}"
    for m in LADDER[-1]:
        if m in vals and not vals[m].certainly_le(q):
            return False, f"{m} above the root"
    if not q.certainly_le(mezo):
        return False, "root above the majorant"
    return True, ""


def suite_dlg(max_n: int = 10, precision: int = 128) -> list[Check]:
    out = []
    for n in range(1, max_n + 1):
        def squares(n=n):
            p = eulerpoly.univariate_eulerian(n)
            q = bounds.dlg_step(bounds.DlgState.from_unipoly(p)).to_unipoly()
            rs = sorted((r.abs() for r in oracle.real_roots(p, precision)), key=lambda r: r.lo)
            sq = oracle.real_roots(q, precision)
            for r, s in zip(rs, sq):
                lo, hi = r.lo * r.lo, r.hi * r.hi
                if s.hi < lo or s.lo > hi:
                    return False, f"{float(s)} is not {float(r)}^2"
            return len(rs) == len(sq), ""
        out.append(_guard(f"squared roots n={n}", squares))
    for k in range(6, max(max_n, 12) + 1):
        def closed(k=k):
            b = bounds.dlg_step(bounds.DlgState.from_unipoly(eulerpoly.univariate_eulerian(k))).coeffs
            sign = (-1) ** k
            return bounds.dlg_deg3_closed(k) == tuple(sign * x for x in (b[k - 1], b[k - 2], b[k - 3]))
        out.append(_guard(f"degree-3 closed forms k={k}", closed))
        out.append(_guard(f"tail coefficients k={k}", lambda k=k: all(
            bounds.eulerian_tail_coeff(k, i) == permstat.eulerian_number(k + 1, i) for i in range(7))))
    for n in range(1, min(max_n, 8) + 1):
        def resultant(n=n):
            p = eulerpoly.univariate_eulerian(n)
            return (bounds.root_power_transform(p, 2)
                    == bounds.dlg_step(bounds.DlgState.from_unipoly(p)).to_unipoly())
        out.append(_guard(f"resultant = squaring n={n}", resultant))
    return out


SUITES = {
    "counting": suite_counting,
    "eulerian": suite_eulerian,
    "mirror": suite_mirror,
    "relaxation": suite_relaxation,
    "bounds": suite_bounds,
    "dlg": suite_dlg,
}


def run_suite(name: str, max_n: int | None = None) -> list[Check]:
    fn = SUITES[name]
    return fn() if max_n is None else fn(max_n)
