"""Command-line front end: enumeration, rank tables, orbit partitions,
expectation comparisons, the named check suites, and the plane cache.

Configuration precedence is flags, then ELEMVAR_* environment variables,
then a key = value config file (--config or ELEMVAR_CONFIG).  Exit codes:
0 success, 1 failed check or mismatch, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import io
import csv
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from . import cache
from .errors import (
    BudgetExceededError,
    NotInChartError,
    StructureError,
    UnsupportedCharacteristicError,
)
from .evariety import enumerate_E_dfs, enumerate_E_scan, max_elementary_dim
from .fq import FqContext
from .grassmann import borel_generators, gl_generators, orbit
from .liealg import (
    MatrixLieAlgebra,
    make_abelian,
    make_gl,
    make_nilradical_block,
    make_sl,
    make_so,
    make_sp,
    make_sp_borel_nilradical,
    make_sp_parabolic_nilradical,
    make_strict_upper,
    subalgebra_subspace,
)
from .repmod import (
    Representation,
    adjoint,
    dual,
    ext_power,
    heller,
    std,
    sym_power,
    tensor,
    truncated_modules,
)
from .sheaffib import bundle_expectation, compare_expected, fiber_table
from .verify import STRETCH_SUITES, SUITES, run_suite

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

DEFAULT_ENUM_BUDGET = 10**7
DEFAULT_ORBIT_BUDGET = 10**6


@dataclass(frozen=True)
class JobSpec:
    """One resolved command invocation; validated before any computation."""

    algebra: str
    p: int
    k: int
    r: int | None
    modules: tuple[str, ...]
    js: tuple[int, ...]
    strategy: str
    budget: int
    workers: int
    within: str | None
    out: str | None
    fmt: str


def parse_algebra(desc: str, ctx: FqContext) -> MatrixLieAlgebra:
    """Build an algebra from a descriptor like u:4, gl:3, sp:4:an, block:2,2."""
    head, _, rest = desc.partition(":")
    try:
        if head == "u":
            return make_strict_upper(int(rest), ctx)
        if head == "gl":
            return make_gl(int(rest), ctx)
        if head == "sl":
            return make_sl(int(rest), ctx)
        if head == "so":
            return make_so(int(rest), ctx)
        if head == "ga":
            return make_abelian(int(rest), ctx)
        if head == "block":
            r, s = (int(t) for t in rest.split(","))
            return make_nilradical_block(r, s, ctx)
        if head == "sp":
            size, _, flavor = rest.partition(":")
            two_n = int(size)
            if not flavor:
                return make_sp(two_n, ctx)
            if two_n % 2:
                raise ValueError("sp ambient size must be even")
            if flavor in ("a1", "an"):
                return make_sp_parabolic_nilradical(two_n // 2, flavor,
                                                    ctx).u_algebra
            if flavor == "borel":
                return make_sp_borel_nilradical(two_n // 2, ctx)
            raise ValueError(f"unknown sp flavor {flavor!r}")
    except (TypeError, ValueError) as exc:
        raise ValueError(f"bad algebra descriptor {desc!r}: {exc}") from None
    raise ValueError(f"unknown algebra family {head!r}")


def parse_module(desc: str, g: MatrixLieAlgebra) -> Representation:
    """Build a module from a descriptor like std, adjoint, sym:2, dual:std."""
    head, _, rest = desc.partition(":")
    if head == "std" and not rest:
        return std(g)
    if head == "adjoint" and not rest:
        return adjoint(g)
    if head == "dual" and rest:
        return dual(parse_module(rest, g))
    if head in ("sym", "ext", "tensor"):
        m = int(rest)
        if head == "sym":
            return sym_power(std(g), m)
        if head == "ext":
            return ext_power(std(g), m)
        M = std(g)
        for _ in range(m - 1):
            M = tensor(M, std(g))
        return M
    if head in ("N", "M", "R"):
        if not g.name.startswith("ga^"):
            raise ValueError(f"module {desc!r} needs an abelian algebra ga:n")
        return truncated_modules(g.dim, g.ctx, desc)
    if head == "heller":
        if not g.name.startswith("ga^"):
            raise ValueError("heller modules need an abelian algebra ga:r")
        return heller(g.dim, g.ctx.p, int(rest)).representation
    raise ValueError(f"unknown module descriptor {desc!r}")


def parse_js(text: str) -> tuple[int, ...]:
    if "-" in text:
        lo, hi = text.split("-")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(t) for t in text.split(","))


def _config_file_values(path: str | None) -> dict[str, str]:
    candidate = path or os.environ.get("ELEMVAR_CONFIG")
    values: dict[str, str] = {}
    if candidate and Path(candidate).is_file():
        for line in Path(candidate).read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, _, val = line.partition("=")
            values[key.strip()] = val.strip()
    return values


def _resolve(args, key: str, default, cast):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    env = os.environ.get(f"ELEMVAR_{key.upper()}")
    if env is not None:
        return cast(env)
    cfg = _config_file_values(getattr(args, "config", None))
    if key in cfg:
        return cast(cfg[key])
    return default


def _build_jobspec(args, default_strategy: str = "scan") -> JobSpec:
    p = _resolve(args, "p", None, int)
    if p is None:
        raise ValueError("a prime is required (--p, ELEMVAR_P, or config)")
    modules = _resolve(args, "module", "", str)
    js = _resolve(args, "j", "1", str)
    spec = JobSpec(
        algebra=_resolve(args, "algebra", None, str) or "",
        p=int(p),
        k=int(_resolve(args, "k", 1, int)),
        r=getattr(args, "r", None),
        modules=tuple(t for t in modules.split(",") if t),
        js=parse_js(js),
        strategy=_resolve(args, "strategy", default_strategy, str),
        budget=int(_resolve(args, "budget", 0, int)),
        workers=int(_resolve(args, "workers", 1, int)),
        within=_resolve(args, "within", None, str),
        out=getattr(args, "out", None),
        fmt=_resolve(args, "format", "json", str),
    )
    if not spec.algebra:
        raise ValueError("an algebra descriptor is required (--algebra)")
    if spec.strategy not in ("scan", "dfs", "auto"):
        raise ValueError(f"unknown strategy {spec.strategy!r}")
    return spec


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _within_subspace(spec: JobSpec, g: MatrixLieAlgebra):
    if spec.within is None:
        return None
    sub = parse_algebra(spec.within, g.ctx)
    return subalgebra_subspace(sub, g)


def _enumerate_points(spec: JobSpec, g: MatrixLieAlgebra, use_cache=True):
    """Cached enumeration; returns (points, cached flag, cache path)."""
    budget = spec.budget or DEFAULT_ENUM_BUDGET
    cacheable = use_cache and spec.within is None
    if cacheable:
        hit = cache.lookup(g.name, spec.r, spec.p, spec.k, spec.strategy)
        if hit is not None and hit.complete:
            return hit, True, cache.cache_path(g.name, spec.r, spec.p,
                                               spec.k, spec.strategy)
    within = _within_subspace(spec, g)
    if spec.strategy == "dfs":
        pts = enumerate_E_dfs(g, spec.r, within=within, budget=budget)
    else:
        pts = enumerate_E_scan(g, spec.r, within=within, budget=budget)
    path = cache.save_points(pts) if cacheable else None
    return pts, False, path


def cmd_enumerate(args) -> int:
    spec = _build_jobspec(args)
    if spec.r is None:
        raise ValueError("enumerate needs --r")
    ctx = FqContext(spec.p, spec.k)
    g = parse_algebra(spec.algebra, ctx)
    t0 = time.perf_counter()
    pts, cached, path = _enumerate_points(spec, g, use_cache=not args.no_cache)
    summary = {
        "schema": 1,
        "algebra": g.name,
        "n": g.dim,
        "r": spec.r,
        "p": spec.p,
        "k": spec.k,
        "count": len(pts),
        "complete": pts.complete,
        "strategy": pts.strategy,
        "cached": cached,
        "cache_file": str(path) if path else None,
        "wall_time": round(time.perf_counter() - t0, 4),
    }
    _emit(json.dumps(summary, sort_keys=True), spec.out)
    return EXIT_OK


def cmd_maxdim(args) -> int:
    spec = _build_jobspec(args, default_strategy="auto")
    ctx = FqContext(spec.p, spec.k)
    g = parse_algebra(spec.algebra, ctx)
    t0 = time.perf_counter()
    r_max, wits = max_elementary_dim(g, within=_within_subspace(spec, g),
                                     budget=spec.budget or DEFAULT_ENUM_BUDGET,
                                     strategy=spec.strategy)
    summary = {
        "schema": 1,
        "algebra": g.name,
        "p": spec.p,
        "k": spec.k,
        "max_dim": r_max,
        "witness_count": len(wits),
        "witnesses": [cache.encode_plane(w) for w in wits],
        "wall_time": round(time.perf_counter() - t0, 4),
    }
    _emit(json.dumps(summary, sort_keys=True), spec.out)
    return EXIT_OK


def _tables_for(M, planes, js, workers):
    """Fiber tables over plane chunks, merged in deterministic order."""
    if workers <= 1 or len(planes) < 2 * workers:
        return [fiber_table(M, planes, js, revalidate=False)]
    size = (len(planes) + workers - 1) // workers
    chunks = [planes[i:i + size] for i in range(0, len(planes), size)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(
            lambda ch: fiber_table(M, ch, js, revalidate=False), chunks))


def cmd_ranks(args) -> int:
    spec = _build_jobspec(args)
    if spec.r is None:
        raise ValueError("ranks needs --r")
    if not spec.modules:
        raise ValueError("ranks needs --module")
    ctx = FqContext(spec.p, spec.k)
    g = parse_algebra(spec.algebra, ctx)
    pts, _, _ = _enumerate_points(spec, g)
    planes = list(pts)
    rows = []
    for desc in spec.modules:
        M = parse_module(desc, g)
        for table in _tables_for(M, planes, spec.js, spec.workers):
            for i, pl in enumerate(table.planes):
                for t, j in enumerate(table.js):
                    rows.append((desc, cache.encode_plane(pl), j,
                                 table.im[i][t], table.ker[i][t]))
    if spec.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["module", "plane", "j", "im", "ker"])
        writer.writerows(rows)
        _emit(buf.getvalue(), spec.out)
    else:
        payload = {
            "schema": 1,
            "algebra": g.name,
            "r": spec.r,
            "p": spec.p,
            "k": spec.k,
            "rows": [{"module": m, "plane": pl, "j": j, "im": im, "ker": ker}
                     for m, pl, j, im, ker in rows],
        }
        _emit(json.dumps(payload, sort_keys=True), spec.out)
    return EXIT_OK


def cmd_orbits(args) -> int:
    spec = _build_jobspec(args)
    if spec.r is None:
        raise ValueError("orbits needs --r")
    ctx = FqContext(spec.p, spec.k)
    g = parse_algebra(spec.algebra, ctx)
    pts, _, _ = _enumerate_points(spec, g)
    # strictly-upper families are acted on by the Borel that normalizes
    # them; everything else by the full GL of the ambient matrix size
    if spec.algebra.startswith("u:"):
        gens = borel_generators(g.ambient_size, ctx)
    else:
        gens = gl_generators(g.ambient_size, ctx)
    remaining = sorted(pts, key=lambda pl: pl.basis.a.tobytes())
    budget = spec.budget or DEFAULT_ORBIT_BUDGET
    sizes = []
    while remaining:
        orb = orbit(gens, remaining[0], "adjoint-on-g", algebra=g,
                    budget=budget)
        sizes.append(len(orb))
        remaining = [pl for pl in remaining if pl not in orb]
    summary = {
        "schema": 1,
        "algebra": g.name,
        "r": spec.r,
        "p": spec.p,
        "group": gens.label or "gl",
        "orbit_count": len(sizes),
        "sizes": sorted(sizes, reverse=True),
        "total": sum(sizes),
    }
    _emit(json.dumps(summary, sort_keys=True), spec.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    spec = _build_jobspec(args)
    if spec.r is None:
        raise ValueError("compare needs --r")
    if len(spec.modules) != 1:
        raise ValueError("compare needs exactly one --module")
    ctx = FqContext(spec.p, spec.k)
    g = parse_algebra(spec.algebra, ctx)
    exp = bundle_expectation(args.expect, n=args.n or g.dim,
                             r=args.family_r or spec.r, m=args.m or 0,
                             c=args.c or 0)
    pts, _, _ = _enumerate_points(spec, g)
    M = parse_module(spec.modules[0], g)
    table = fiber_table(M, list(pts), js=(exp.j,), revalidate=False)
    report = compare_expected(table, exp)
    payload = {
        "schema": 1,
        "expectation": exp.name,
        "identification": exp.identification,
        "rank": exp.rank,
        "kind": exp.kind,
        "j": exp.j,
        "module": spec.modules[0],
        "checked": report.checked,
        "mismatch_count": len(report.mismatches),
        "mismatches": [{"plane": cache.encode_plane(pl), "dim": dim}
                       for pl, dim in report.mismatches[:20]],
        "ok": report.ok,
    }
    _emit(json.dumps(payload, sort_keys=True), spec.out)
    return EXIT_OK if report.ok else EXIT_CHECK


def cmd_verify(args) -> int:
    names = args.suites or ["all"]
    if names == ["all"]:
        names = list(SUITES) + (list(STRETCH_SUITES) if args.stretch else [])
    lines = []
    all_ok = True
    for name in names:
        result = run_suite(name)
        all_ok &= result.passed
        lines.append(f"{'PASS' if result.passed else 'FAIL'} {result.name} "
                     f"({result.seconds:.2f}s): {result.details}")
    _emit("\n".join(lines), args.out)
    return EXIT_OK if all_ok else EXIT_CHECK


def cmd_cache(args) -> int:
    if args.cache_action == "ls":
        _emit(json.dumps(cache.list_entries(), sort_keys=True), args.out)
        return EXIT_OK
    removed = cache.clear_entries()
    _emit(json.dumps({"removed": removed}), args.out)
    return EXIT_OK


def _add_common(sub, *, r=False):
    sub.add_argument("--algebra", help="algebra descriptor, e.g. u:3, gl:4, "
                     "sp:4:an, block:2,2, ga:4")
    sub.add_argument("--p", type=int, help="field characteristic")
    sub.add_argument("--k", type=int, help="extension degree (default 1)")
    if r:
        sub.add_argument("--r", type=int, help="plane dimension")
    sub.add_argument("--strategy", choices=["scan", "dfs", "auto"])
    sub.add_argument("--within", help="restrict to a subalgebra descriptor")
    sub.add_argument("--budget", type=int, help="work budget override")
    sub.add_argument("--workers", type=int, help="worker threads (default 1)")
    sub.add_argument("--out", help="write output to this file")
    sub.add_argument("--format", choices=["json", "csv"])
    sub.add_argument("--config", help="key = value config file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elemvar",
        description="Enumerate elementary planes of small matrix Lie "
                    "algebras and tabulate module rank invariants over them.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_enum = subs.add_parser("enumerate", help="list E(r, g)(F_q) points")
    _add_common(p_enum, r=True)
    p_enum.add_argument("--no-cache", action="store_true")
    p_enum.set_defaults(func=cmd_enumerate)

    p_max = subs.add_parser("maxdim", help="largest r with E(r, g) nonempty")
    _add_common(p_max)
    p_max.set_defaults(func=cmd_maxdim)

    p_ranks = subs.add_parser("ranks", help="image/kernel dims over points")
    _add_common(p_ranks, r=True)
    p_ranks.add_argument("--module", help="comma-separated module "
                         "descriptors, e.g. std,adjoint,sym:2")
    p_ranks.add_argument("--j", help="degree range, e.g. 1-4 or 1,2")
    p_ranks.set_defaults(func=cmd_ranks)

    p_orb = subs.add_parser("orbits", help="partition points into orbits")
    _add_common(p_orb, r=True)
    p_orb.set_defaults(func=cmd_orbits)

    p_cmp = subs.add_parser("compare", help="check fiber dims against a "
                            "named rank expectation")
    _add_common(p_cmp, r=True)
    p_cmp.add_argument("--module", help="one module descriptor")
    p_cmp.add_argument("--expect", required=True,
                       help="expectation name, e.g. tautological, sym, "
                            "tangent, line-plus-trivial")
    p_cmp.add_argument("--n", type=int, help="ambient parameter")
    p_cmp.add_argument("--family-r", type=int, help="family rank parameter")
    p_cmp.add_argument("--m", type=int, help="power parameter")
    p_cmp.add_argument("--c", type=int, help="constant-part parameter")
    p_cmp.set_defaults(func=cmd_compare)

    p_ver = subs.add_parser("verify", help="run named check suites")
    p_ver.add_argument("suites", nargs="*",
                       help="suite names, or 'all' (default)")
    p_ver.add_argument("--stretch", action="store_true",
                       help="include long-running suites in 'all'")
    p_ver.add_argument("--out")
    p_ver.set_defaults(func=cmd_verify)

    p_cache = subs.add_parser("cache", help="inspect or clear the plane cache")
    p_cache.add_argument("cache_action", choices=["ls", "clear"])
    p_cache.add_argument("--out")
    p_cache.set_defaults(func=cmd_cache)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        payload = {"error": "budget-exceeded", "message": str(exc),
                   "count": exc.count}
        sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
        return EXIT_BUDGET
    except (ValueError, StructureError, NotInChartError,
            UnsupportedCharacteristicError) as exc:
        sys.stderr.write(json.dumps(
            {"error": "usage", "message": str(exc)}) + "\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
