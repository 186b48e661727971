"""Command line front end: ``eulerroots coeffs|bound|compare|verify|figure``.

Exit codes: 0 success, 1 a property failed, 2 usage or domain error.
"""

from __future__ import annotations

import csv
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction
from pathlib import Path

import click

from . import bounds, eulerpoly, oracle, permstat, suites

CSV_HEADER = ("method", "n", "side", "lo", "hi", "precision_bits", "template_residual", "sound")
SCHEMA = 1
CACHE_ENV = "EULERROOTS_CACHE_DIR"
ORACLE_CAP = 60


# --------------------------------------------------------------------------
# configuration and cache

@dataclass
class RunConfig:
    precision_bits: int | None = None
    n_range: tuple[int, ...] = ()
    methods: tuple[str, ...] = ()
    cache_dir: Path | None = None
    output: str = "csv"
    seed: int = 0
    enumeration_cap: int = permstat.DEFAULT_CAP
    parallelism: int = 1
    digits: int = 40

    def __post_init__(self):
        if self.precision_bits is not None and self.precision_bits < 64:
            raise click.BadParameter("precision must be at least 64 bits")
        if not self.n_range and self.methods:
            raise click.BadParameter("empty index range")


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "eulerroots"


class Cache:
    """JSON files keyed by (kind, n, precision); writes go through a rename."""

    def __init__(self, root: Path | None):
        self.root = root

    def _path(self, kind: str, n: int, precision: int) -> Path:
        return self.root / f"{kind}-n{n}-p{precision}.json"

    def get(self, kind: str, n: int, precision: int = 0):
        if self.root is None:
            return None
        try:
            return json.loads(self._path(kind, n, precision).read_text())
        except (OSError, ValueError):
            return None

    def put(self, kind: str, n: int, precision: int, value) -> None:
        if self.root is None:
            return
        self.root.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
        with os.fdopen(fd, "w") as f:
            json.dump(value, f)
        os.replace(tmp, self._path(kind, n, precision))


def cached_eulerian(cache: Cache, n: int) -> eulerpoly.UniPoly:
    hit = cache.get("eulerian", n)
    if hit is not None:
        return eulerpoly.UniPoly(tuple(int(c) for c in hit))
    p = eulerpoly.univariate_eulerian(n)
    cache.put("eulerian", n, 0, [str(c) for c in p.coeffs])
    return p


def cached_root(cache: Cache, n: int, precision: int) -> oracle.CertifiedInterval:
    hit = cache.get("root", n, precision)
    if hit is not None:
        return oracle.CertifiedInterval(Fraction(hit["lo"]), Fraction(hit["hi"]), hit["bits"])
    r = oracle.extreme_abs_root(cached_eulerian(cache, n), precision)
    cache.put("root", n, precision, {"lo": str(r.lo), "hi": str(r.hi), "bits": r.bits})
    return r


# --------------------------------------------------------------------------
# rows and serialisation

def _decimal(x: Fraction, digits: int, up: bool) -> Fraction:
    """Round to ``digits`` significant decimals, towards +inf if ``up``."""
    if x == 0:
        return x
    e = len(str(abs(x.numerator) // abs(x.denominator))) if abs(x) >= 1 else 1 - len(
        str(abs(x.denominator) // abs(x.numerator)))
    scale = Fraction(10) ** (digits - e)
    y = x * scale
    q = -((-y.numerator) // y.denominator) if up else y.numerator // y.denominator
    return Fraction(q) / scale


def format_decimal(x: Fraction) -> str:
    """Exact positional decimal for a fraction whose denominator divides a power of ten."""
    sign = "-" if x < 0 else ""
    x = abs(x)
    k = 0
    while (x * 10 ** k).denominator != 1:
        k += 1
        if k > 10000:
            raise ValueError("not a terminating decimal")
    m = str((x * 10 ** k).numerator).rjust(k + 1, "0")
    return sign + (m[:-k] + "." + m[-k:] if k else m)


@dataclass(frozen=True)
class Row:
    method: str
    n: int
    side: str
    lo: Fraction | None
    hi: Fraction | None
    precision_bits: int
    template_residual: str = ""
    sound: str = ""
    error: str = ""
    ladder: str = ""

    @classmethod
    def from_result(cls, r: bounds.BoundResult, digits: int, residual: str = "",
                    sound: str = "") -> "Row":
        return cls(r.method, r.n, r.side, _decimal(r.value.lo, digits, False),
                   _decimal(r.value.hi, digits, True), r.precision_bits, residual, sound)

    def to_json(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["lo"] = None if self.lo is None else format_decimal(self.lo)
        d["hi"] = None if self.hi is None else format_decimal(self.hi)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Row":
        d = dict(d)
        for k in ("lo", "hi"):
            d[k] = None if d.get(k) in (None, "") else Fraction(d[k])
        d["n"] = int(d["n"])
        d["precision_bits"] = int(d["precision_bits"])
        return cls(**{f.name: d.get(f.name, "") for f in fields(cls)})

    def to_csv(self, with_ladder: bool = False) -> list[str]:
        sound = f"error: {self.error}" if self.error else self.sound
        out = [self.method, str(self.n), self.side,
               "" if self.lo is None else format_decimal(self.lo),
               "" if self.hi is None else format_decimal(self.hi),
               str(self.precision_bits), self.template_residual, sound]
        return out + [self.ladder] if with_ladder else out

    @classmethod
    def from_csv(cls, rec: dict) -> "Row":
        sound, error = rec["sound"], ""
        if sound.startswith("error: "):
            sound, error = "", sound[len("error: "):]
        return cls(rec["method"], int(rec["n"]), rec["side"],
                   Fraction(rec["lo"]) if rec["lo"] else None,
                   Fraction(rec["hi"]) if rec["hi"] else None,
                   int(rec["precision_bits"]), rec["template_residual"], sound, error,
                   rec.get("ladder", ""))


def emit_rows(rows: list[Row], fmt: str, with_ladder: bool = False) -> str:
    if fmt == "json":
        return json.dumps({"schema": SCHEMA, "rows": [r.to_json() for r in rows]}, indent=1)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER + (("ladder",) if with_ladder else ()))
    for r in rows:
        w.writerow(r.to_csv(with_ladder))
    return buf.getvalue()


def parse_rows(text: str, fmt: str) -> list[Row]:
    if fmt == "json":
        doc = json.loads(text)
        if doc.get("schema") != SCHEMA:
            raise ValueError(f"unsupported schema {doc.get('schema')!r}")
        return [Row.from_json(d) for d in doc["rows"]]
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ())[:len(CSV_HEADER)] != CSV_HEADER:
        raise ValueError("unexpected CSV header")
    return [Row.from_csv(rec) for rec in reader]


# --------------------------------------------------------------------------
# evaluation

def parse_range(text: str) -> tuple[int, ...]:
    """``A..B`` or ``A..B:step``, inclusive."""
    try:
        span, _, step = text.partition(":")
        a, b = span.split("..")
        out = tuple(range(int(a), int(b) + 1, int(step) if step else 1))
    except ValueError:
        raise click.BadParameter(f"expected A..B or A..B:step, got {text!r}")
    if not out:
        raise click.BadParameter(f"empty range {text!r}")
    return out


def normalise_method(m: str) -> str:
    m = m.strip().replace("-", "_")
    if m not in bounds.METHODS or m == "custom_vector":
        raise click.BadParameter(f"unknown method {m!r}")
    return m


def _evaluate(task) -> Row:
    method, n, precision, param, digits, cache_dir, oracle_cap = task
    cache = Cache(cache_dir)
    try:
        if method == "unit_binary":
            r = bounds.unit_binary_bound(n, param if param is not None else n + 1, precision)
        else:
            r = bounds.compute_bound(method, n, precision)
    except (bounds.DomainError, bounds.OrientationError, bounds.DegenerateError,
            oracle.PreconditionError, ArithmeticError, ValueError) as e:
        return Row(method, n, "upper" if method in bounds.UPPER_METHODS else "lower",
                   None, None, precision or bounds.default_precision(n), error=str(e) or type(e).__name__)
    residual = ""
    if method in bounds.TEMPLATES and method != "unit_binary":
        try:
            residual = f"{float(bounds.asymptotic_residual(method, n, r.precision_bits).mid):.6g}"
        except (ArithmeticError, ValueError):
            residual = ""
    sound = ""
    if n <= oracle_cap:
        q = cached_root(cache, n, max(r.precision_bits, 128))
        ok = r.value.certainly_le(q) if r.side == "lower" else r.value.certainly_ge(q)
        sound = "yes" if ok else "no"
    return Row.from_result(r, digits, residual, sound)


def evaluate_grid(cfg: RunConfig, param: int | None = None, oracle_cap: int = ORACLE_CAP) -> list[Row]:
    tasks = [(m, n, cfg.precision_bits, param, cfg.digits, cfg.cache_dir, oracle_cap)
             for n in cfg.n_range for m in cfg.methods]
    if cfg.parallelism > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(cfg.parallelism) as pool:
            return list(pool.map(_evaluate, tasks))
    return [_evaluate(t) for t in tasks]


# --------------------------------------------------------------------------
# commands

@click.group()
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help=f"Cache directory (default ${CACHE_ENV} or ~/.cache/eulerroots).")
@click.option("--no-cache", is_flag=True, help="Run without reading or writing the cache.")
@click.pass_context
def main(ctx: click.Context, cache_dir: Path | None, no_cache: bool) -> None:
    """Eulerian polynomials and certified bounds on their extreme root."""
    ctx.obj = None if no_cache else (cache_dir or default_cache_dir())


def _fail(msg: str, code: int = 2):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _coeff_key(S) -> str:
    return "{" + ",".join(str(i) for i in sorted(S)) + "}"


@main.command()
@click.option("--n", "n", type=int, required=True)
@click.option("--multivariate", is_flag=True, help="Monomials with at most --max-degree variables.")
@click.option("--max-degree", type=int, default=3, show_default=True)
@click.option("--dlg", "dlg", type=int, default=0, help="Number of root-squaring steps.")
@click.option("--bruteforce", is_flag=True, help="Enumerate permutations (bounded by --cap).")
@click.option("--cap", type=int, default=permstat.DEFAULT_CAP, show_default=True)
@click.pass_obj
def coeffs(cache_dir, n: int, multivariate: bool, max_degree: int, dlg: int,
           bruteforce: bool, cap: int) -> None:
    """Coefficients of A_n, of its multivariate form, or of a squared-root iterate."""
    try:
        if multivariate:
            if bruteforce:
                P = eulerpoly.multivariate_eulerian(n, cap=cap) if n <= cap else None
                if P is None:
                    raise permstat.CapExceeded(f"n={n} exceeds the enumeration cap {cap}")
                terms = {k: c for k, c in P.terms.items() if len(k) <= max_degree}
            else:
                terms = eulerpoly.multivariate_eulerian(n, max_degree=max_degree).terms
            items = sorted(terms.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
            click.echo(json.dumps({_coeff_key(k): c for k, c in items}))
            return
        if bruteforce:
            p = eulerpoly.univariate_eulerian_bruteforce(n, cap=cap)
        else:
            p = cached_eulerian(Cache(cache_dir), n)
        if dlg:
            s = bounds.DlgState.from_unipoly(p)
            for _ in range(dlg):
                s = bounds.dlg_step(s)
            q = s.to_unipoly()
            const = Fraction(q.coeffs[0])
            p = eulerpoly.UniPoly(tuple(Fraction(c) / const for c in q.coeffs))
        click.echo(",".join(str(c) for c in p.coeffs))
    except (permstat.CapExceeded, ValueError) as e:
        _fail(str(e))


@main.command()
@click.option("--method", "method", required=True, help="Method name, e.g. colucci or sobolev-min.")
@click.option("--n", "n", type=int, default=None)
@click.option("--n-range", "n_range", default=None, help="A..B or A..B:step.")
@click.option("--param", type=int, default=None, help="Index j for unit-binary.")
@click.option("--precision", type=int, default=None, help="Bits; default max(128, 16n).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--digits", type=int, default=40, show_default=True)
@click.option("--strict", is_flag=True, help="Exit 2 if any row has a domain error.")
@click.option("--parallelism", type=int, default=1)
@click.pass_obj
def bound(cache_dir, method, n, n_range, param, precision, fmt, digits, strict, parallelism) -> None:
    """Certified value of one bound over one index or a range."""
    if (n is None) == (n_range is None):
        raise click.UsageError("give exactly one of --n and --n-range")
    ns = (n,) if n is not None else parse_range(n_range)
    cfg = RunConfig(precision, ns, (normalise_method(method),), cache_dir, fmt,
                    parallelism=parallelism, digits=digits)
    rows = evaluate_grid(cfg, param)
    click.echo(emit_rows(rows, fmt), nl=False)
    if strict and any(r.error for r in rows):
        sys.exit(2)


COMPARE_METHODS = ("colucci", "unit_binary", "uni_vec11", "uni_relax", "bivar", "multi_v1",
                   "multi_v2", "pencil_bisect", "sobolev_min", "dlg_relax", "sobolev_maj",
                   "mezo_majorant")


@main.command()
@click.option("--n-range", "n_range", required=True)
@click.option("--methods", default=",".join(COMPARE_METHODS), show_default=True)
@click.option("--output", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--file", "path", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--precision", type=int, default=None)
@click.option("--digits", type=int, default=40, show_default=True)
@click.option("--parallelism", type=int, default=1)
@click.option("--strict", is_flag=True, help="Exit 1 if a ladder check fails.")
@click.pass_obj
def compare(cache_dir, n_range, methods, fmt, path, precision, digits, parallelism, strict) -> None:
    """Cross-method table with the oracle root and a certified ordering column."""
    ns = parse_range(n_range)
    ms = tuple(normalise_method(m) for m in methods.split(",") if m.strip())
    cfg = RunConfig(precision, ns, ms, cache_dir, fmt, parallelism=parallelism, digits=digits)
    rows = [r for r in evaluate_grid(cfg)
            if not (r.method == "multi_v2" and r.error and r.n % 2)]
    cache = Cache(cache_dir)
    ladder = {}
    for n in ns:
        bits = precision or bounds.default_precision(n)
        if n <= ORACLE_CAP:
            q = cached_root(cache, n, max(bits, 128))
            rows.append(Row("oracle", n, "exact", _decimal(q.lo, digits, False),
                            _decimal(q.hi, digits, True), q.bits, "", "yes"))
        if n >= 6 and n <= ORACLE_CAP:
            ok, detail = suites.ladder_ok(n, max(bits, 128))
            ladder[n] = "ok" if ok else f"fail: {detail}"
    rows = [Row(**{**r.__dict__, "ladder": ladder.get(r.n, "")}) for r in rows]
    rows.sort(key=lambda r: (r.n, r.lo if r.lo is not None else Fraction(0)))
    text = emit_rows(rows, fmt, with_ladder=True)
    if path:
        path.write_text(text)
    else:
        click.echo(text, nl=False)
    if strict and any(v != "ok" for v in ladder.values()):
        sys.exit(1)


@main.command()
@click.option("--suite", type=click.Choice(sorted(suites.SUITES)), required=True)
@click.option("--max", "max_n", type=int, default=None, help="Largest index to check.")
def verify(suite: str, max_n: int | None) -> None:
    """Run an invariant suite; exit 1 if any check fails."""
    checks = suites.run_suite(suite, max_n)
    passed = all(c.passed for c in checks)
    click.echo(json.dumps({"schema": SCHEMA, "suite": suite, "passed": passed,
                           "checks": [c.as_dict() for c in checks]}, indent=1))
    if not passed:
        sys.exit(1)


def figure_series(n: int, precision: int) -> list[tuple[Fraction, object]]:
    """Kernel-vector entries on x_2..x_{n+1} of the diagonal pencil at the lower end of its section."""
    P = bounds.eulerian_pencil(n)
    sec = oracle.pencil_line_interval(P, {i: 1 for i in P.variables}, precision)
    # just outside the section: at n = 1 the pencil vanishes identically at t_-
    M = P.at({i: sec.lower.lo for i in P.variables})
    B = P.combine({i: 1 for i in P.variables})
    keep = [k for k in range(P.size) if any(P.A0[k]) or any(B[k])]
    v = oracle.kernel_vector([[M[r][c] for c in keep] for r in keep], precision)
    active = [v[j] for j, k in enumerate(keep) if P.mold[k] != ()]
    m = len(active)
    return [(Fraction(i, m - 1) if m > 1 else Fraction(0), x) for i, x in enumerate(active)]


@main.command()
@click.option("--n", "n", type=int, required=True, help="Series for 1..n.")
@click.option("--precision", type=int, default=128, show_default=True)
def figure(n: int, precision: int) -> None:
    """Two-column plot data, one block per index, blocks separated by blank lines."""
    import mpmath
    for k in range(1, n + 1):
        click.echo(f"# n={k}")
        for x, y in figure_series(k, precision):
            click.echo(f"{float(x):.6f} {mpmath.nstr(y, 12)}")
        click.echo("\n")


if __name__ == "__main__":
    main()
