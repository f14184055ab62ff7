"""Named end-to-end checks over fixed small corpora.

Every check recomputes its numbers from scratch (no stored answers) and
returns pass/fail with the values it found, so a failure report carries the
computed truth next to the required one.  The registry backs the `verify`
CLI verb and the acceptance test module.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

import numpy as np

from .evariety import (
    ElementarySubalgebra,
    enumerate_E_dfs,
    enumerate_E_scan,
    is_maximal_elementary,
    max_elementary_dim,
    product_embed,
)
from .fq import FqContext, FqMatrix, SubspaceBasis, gaussian_binomial
from .grassmann import borel_generators, gl_generators, orbit, valid_charts
from .liealg import (
    bracket,
    darboux_basis,
    direct_sum,
    make_abelian,
    make_gl,
    make_nilradical_block,
    make_sl,
    make_sp,
    make_sp_borel_nilradical,
    make_sp_parabolic_nilradical,
    make_strict_upper,
    subalgebra_subspace,
)
from .repmod import (
    Representation,
    adjoint,
    ext_power,
    perp_check,
    profile,
    rad_j,
    restrict,
    soc_j,
    std,
    sym_power,
    tensor,
    truncated_modules,
    verify_lincomb,
)
from .sheaffib import (
    chart_compat,
    fiber_table,
    glr_invariance,
    rad_via_theta,
    soc_via_theta,
)

F3 = FqContext(3)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    details: str
    seconds: float


def _bkey(plane: SubspaceBasis) -> bytes:
    return plane.basis.a.tobytes()


def _rand_invertible(rng, ctx, r):
    while True:
        m = rng.integers(0, ctx.q, (r, r))
        if SubspaceBasis.span(ctx, m).rank == r:
            return m


def random_commuting_module(rng, ctx: FqContext, r: int,
                            dmax: int) -> Representation:
    """Random module over the abelian r-dim algebra with zero p-powers.

    One rejection-sampled strictly-upper nilpotent generator; the others are
    constant-free polynomials in it, so all operators commute and p-th
    powers vanish identically.
    """
    p = ctx.p
    d = int(rng.integers(2, dmax + 1))
    while True:
        u = np.triu(rng.integers(0, ctx.q, (d, d)), k=1)
        acc = u.copy()
        for _ in range(p - 1):
            acc = ctx.matmul(acc, u)
        if not acc.any():
            break
    ops = [u]
    for _ in range(r - 1):
        m = np.zeros((d, d), dtype=np.int64)
        power = np.eye(d, dtype=np.int64)
        for _ in range(1, p):
            power = ctx.matmul(power, u)
            m = ctx.add(m, ctx.mul(int(rng.integers(0, ctx.q)), power))
        ops.append(m)
    g = make_abelian(r, ctx)
    mats = tuple(FqMatrix.from_array(ctx, o) for o in ops)
    return Representation(g, d, mats, label=f"random[d={d}]")


def check_heisenberg_family():
    msgs, ok = [], True
    for p in (3, 5, 7):
        ctx = FqContext(p)
        u3 = make_strict_upper(3, ctx)
        pts = enumerate_E_scan(u3, 2)
        gens = borel_generators(3, ctx)
        remaining = sorted(pts, key=_bkey)
        sizes = []
        while remaining:
            orb = orbit(gens, remaining[0], "adjoint-on-g", algebra=u3)
            sizes.append(len(orb))
            remaining = [pl for pl in remaining if pl not in orb]
        sizes.sort()
        ok &= len(pts) == p + 1 and sizes == sorted([1, 1, p - 1])
        msgs.append(f"p={p}: {len(pts)} points, orbit sizes {sizes}")
    return ok, "; ".join(msgs)


def check_u4_maximal():
    u4 = make_strict_upper(4, F3)
    candidates = gaussian_binomial(6, 4, 3)
    top = enumerate_E_scan(u4, 4)
    above = enumerate_E_scan(u4, 5)
    u22 = subalgebra_subspace(make_nilradical_block(2, 2, F3), u4)
    hit = len(top) == 1 and top.planes[0] == u22
    ok = candidates == 11011 and hit and len(above) == 0
    return ok, (f"{candidates} candidate 4-planes, {len(top)} elementary "
                f"(block witness: {hit}), {len(above)} at r=5")


def check_sp4_borel_maximal():
    F5 = FqContext(5)
    borel_u = make_sp_borel_nilradical(2, F5)
    r, wits = max_elementary_dim(borel_u)
    ua2 = subalgebra_subspace(
        make_sp_parabolic_nilradical(2, "an", F5).u_algebra, borel_u)
    ok = r == 3 and wits == [ua2]
    return ok, f"max dim {r} with {len(wits)} witness(es), symmetric block: {wits == [ua2]}"


def check_block_orbit_constancy():
    gl4 = make_gl(4, F3)
    u22 = subalgebra_subspace(make_nilradical_block(2, 2, F3), gl4)
    orb = sorted(orbit(gl_generators(4, F3), u22, "adjoint-on-g", algebra=gl4),
                 key=_bkey)
    V = std(gl4)
    modules = (V, adjoint(gl4), sym_power(V, 2), ext_power(V, 2), tensor(V, V))
    mismatches = 0
    for M in modules:
        base = profile(M, orb[0])
        for pl in orb[1:]:
            pr = profile(M, pl)
            if (pr.rad, pr.soc) != (base.rad, base.soc):
                mismatches += 1
    ok = len(orb) == 130 == gaussian_binomial(4, 2, 3) and mismatches == 0
    return ok, (f"orbit size {len(orb)} (binomial 130), "
                f"{mismatches} profile mismatches over {len(modules)} modules")


def check_product_points():
    sl2 = make_sl(2, F3)
    gsum = direct_sum(sl2, sl2)
    pts = enumerate_E_scan(gsum, 2)
    lines = list(enumerate_E_scan(sl2, 1))
    prods = set()
    for l1 in lines:
        for l2 in lines:
            e = product_embed(ElementarySubalgebra(sl2, l1),
                              ElementarySubalgebra(sl2, l2), gsum)
            prods.add(e.plane)
    ok = len(pts) == 16 and len(prods) == 16 and prods == set(pts.planes)
    return ok, (f"{len(pts)} points, {len(lines)}x{len(lines)} products give "
                f"{len(prods)} distinct planes, equal sets: {prods == set(pts.planes)}")


def check_block_orbit_fibers():
    F5 = FqContext(5)
    gl4 = make_gl(4, F5)
    u22 = subalgebra_subspace(make_nilradical_block(2, 2, F5), gl4)
    orb = sorted(orbit(gl_generators(4, F5), u22, "adjoint-on-g", algebra=gl4),
                 key=_bkey)
    V = std(gl4)
    t_std = fiber_table(V, orb, js=(1, 2), revalidate=False)
    t_ten = fiber_table(tensor(V, V), orb, js=(2,), revalidate=False)
    t_sym = fiber_table(sym_power(V, 2), orb, js=(2,), revalidate=False)
    t_ext = fiber_table(ext_power(V, 2), orb, js=(2,), revalidate=False)
    parts = {
        "count": len(orb) == gaussian_binomial(4, 2, 5),
        "std(2,0,2)": (set(t_std.im_at(1)) == {2} and set(t_std.im_at(2)) == {0}
                       and set(t_std.ker_at(1)) == {2}),
        "tensor im2=4": set(t_ten.im_at(2)) == {4},
        "sym im2=3": set(t_sym.im_at(2)) == {3},
        "ext im2=1": set(t_ext.im_at(2)) == {1},
    }
    ok = all(parts.values())
    detail = ", ".join(k if v else f"{k} FAILED" for k, v in parts.items())
    return ok, f"{detail} ({len(orb)} points)"


def check_adjoint_block_point_sl4():
    F5 = FqContext(5)
    sl4 = make_sl(4, F5)
    u22 = subalgebra_subspace(make_nilradical_block(2, 2, F5), sl4)
    res = restrict(adjoint(sl4), u22)
    got = (rad_j(res, 1)[0], rad_j(res, 2)[0], soc_j(res, 1)[0])
    want = (11, 4, 5)
    return got == want, f"(im1, im2, ker1) = {got}, required {want}"


def check_sp4_fiber_point():
    F5 = FqContext(5)
    sp4 = make_sp(4, F5)
    ua2 = subalgebra_subspace(
        make_sp_parabolic_nilradical(2, "an", F5).u_algebra, sp4)
    V = std(sp4)
    res_v = restrict(V, ua2)
    got_std = (rad_j(res_v, 1)[0], soc_j(res_v, 1)[0], rad_j(res_v, 2)[0])
    got_ten = rad_j(restrict(tensor(V, V), ua2), 2)[0]
    res_ad = restrict(adjoint(sp4), ua2)
    got_ad = (rad_j(res_ad, 2)[0], soc_j(res_ad, 1)[0])
    want_std, want_ten, want_ad = (2, 2, 0), 4, (3, 4)
    ok = got_std == want_std and got_ten == want_ten and got_ad == want_ad
    return ok, (f"std (im1, ker1, im2) = {got_std} want {want_std}; "
                f"tensor im2 = {got_ten} want {want_ten}; "
                f"adjoint (im2, ker1) = {got_ad} want {want_ad}")


def check_truncated_families():
    ga4 = make_abelian(4, F3)
    planes = list(enumerate_E_scan(ga4, 2))
    m2 = truncated_modules(4, F3, "M:2")
    n1 = truncated_modules(4, F3, "N:1")
    n2 = truncated_modules(4, F3, "N:2")
    ker_m = {soc_j(restrict(m2, pl), 1)[0] for pl in planes}
    im_n1 = {rad_j(restrict(n1, pl), 1)[0] for pl in planes}
    im_n2 = {rad_j(restrict(n2, pl), 2)[0] for pl in planes}
    ga3 = make_abelian(3, F3)
    lines = list(enumerate_E_scan(ga3, 1))
    r1 = truncated_modules(3, F3, "R:1")
    ker_r = {soc_j(restrict(r1, ln), 1)[0] for ln in lines}
    ok = (len(planes) == 130 and ker_m == {5} and im_n1 == {2}
          and im_n2 == {3} and len(lines) == 13 and ker_r == {8})
    return ok, (f"{len(planes)} planes: M ker1 {sorted(ker_m)} (want 5), "
                f"N im1 {sorted(im_n1)} (want 2), N im2 {sorted(im_n2)} (want 3); "
                f"{len(lines)} lines: R ker1 {sorted(ker_r)} (want 8)")


def check_duality():
    rng = np.random.default_rng(20260814)
    bad = 0
    for _ in range(500):
        p = int(rng.choice([2, 3, 5]))
        ctx = FqContext(p)
        r = int(rng.integers(1, 4))
        M = random_commuting_module(rng, ctx, r, 8)
        rr = int(rng.integers(1, r + 1))
        while True:
            cols = rng.integers(0, p, (r, rr))
            pl = SubspaceBasis.span(ctx, cols)
            if pl.rank == rr:
                break
        j = int(rng.integers(1, (p - 1) * rr + 1))
        if not perp_check(M, pl, j):
            bad += 1
    return bad == 0, f"500 random (module, plane, degree) triples, {bad} failures"


def check_theta_machinery():
    u3 = make_strict_upper(3, F3)
    V3 = std(u3)
    pts_u3 = sorted(enumerate_E_scan(u3, 2), key=_bkey)
    ok = True
    for pl in pts_u3:
        res = restrict(V3, pl)
        charts = list(valid_charts(pl))
        for ch in charts:
            for j in range(1, 5):
                ok &= rad_via_theta(V3, ch, pl, j) == rad_j(res, j)[0]
                ok &= soc_via_theta(V3, ch, pl, j) == soc_j(res, j)[0]
        for ca, cb in itertools.combinations(charts, 2):
            for j in range(1, 5):
                ok &= chart_compat(V3, pl, ca, cb, j)
    gl3 = make_gl(3, F3)
    Vg = std(gl3)
    pts_gl3 = list(enumerate_E_dfs(gl3, 2))
    sample = pts_gl3[::7][:20]
    for pl in sample:
        charts = list(valid_charts(pl))
        res = restrict(Vg, pl)
        for j in (1, 2):
            ok &= chart_compat(Vg, pl, charts[0], charts[-1], j)
            ok &= rad_via_theta(Vg, charts[-1], pl, j) == rad_j(res, j)[0]
    rng = np.random.default_rng(11)
    invariant = 0
    for t in range(100):
        if t % 2 == 0:
            M, pool, jmax = V3, pts_u3, 4
        else:
            M, pool, jmax = Vg, pts_gl3, 2
        pl = pool[int(rng.integers(len(pool)))]
        s = _rand_invertible(rng, F3, pl.rank)
        h = _rand_invertible(rng, F3, pl.rank)
        cols = F3.matmul(pl.basis.a, s)
        invariant += glr_invariance(M, cols, h, int(rng.integers(1, jmax + 1)))
    ok &= invariant == 100
    return ok, (f"chart agreement on {len(pts_u3)} + {len(sample)} points, "
                f"frame invariance {invariant}/100")


def check_gl3_dichotomy():
    gl3 = make_gl(3, F3)
    V = std(gl3)
    pts = list(enumerate_E_dfs(gl3, 2))
    bad = 0
    for pl in pts:
        has_regular = False
        for a, b in ((1, 0), (0, 1), (1, 1), (1, 2)):
            coords = F3.add(F3.mul(a, pl.basis.a[:, 0]),
                            F3.mul(b, pl.basis.a[:, 1]))
            m = gl3.element(coords).a
            if ((m @ m) % 3).any():
                has_regular = True
                break
        rad2 = rad_j(restrict(V, pl), 2)[0]
        if has_regular != (rad2 > 0):
            bad += 1
    return len(pts) == 130 and bad == 0, f"{len(pts)} points, {bad} mismatches"


def check_maximality_socle():
    u4 = make_strict_upper(4, F3)
    ad4 = adjoint(u4)
    counts = {}
    bad = 0
    for r in (2, 3, 4):
        pts = enumerate_E_scan(u4, r)
        counts[r] = len(pts)
        for pl in pts:
            maximal = is_maximal_elementary(u4, pl)
            socle_r = soc_j(restrict(ad4, pl), 1)[0] == r
            bad += maximal != socle_r
    ok = bad == 0 and counts == {2: 661, 3: 91, 4: 1}
    return ok, f"point counts {counts}, {bad} equivalence failures"


def check_power_identity():
    bad = []
    for n in (1, 2, 3):
        for deg in (1, 2, 3):
            for exps in itertools.product(range(deg + 1), repeat=n):
                if sum(exps) == deg and not verify_lincomb(exps, 5):
                    bad.append(exps)
    return not bad, (f"degree <= 3 monomials in <= 3 variables at p=5, "
                     f"failures: {bad if bad else 'none'}")


def check_extraspecial():
    F5 = FqContext(5)
    msgs, ok = [], True
    cases = [
        ("u3", make_strict_upper(3, F5)),
        ("sp4.a1", make_sp_parabolic_nilradical(2, "a1", F5).u_algebra),
        ("sp6.a1", make_sp_parabolic_nilradical(3, "a1", F5).u_algebra),
    ]
    for name, alg in cases:
        data = darboux_basis(alg)
        xs, ys, yn = data.darboux
        rel = True
        for i, x in enumerate(xs):
            for j, y in enumerate(ys):
                b = bracket(x, y)
                rel &= (b == yn) if i == j else b.is_zero()
        for a, b in itertools.combinations(xs, 2):
            rel &= bracket(a, b).is_zero()
        for a, b in itertools.combinations(ys, 2):
            rel &= bracket(a, b).is_zero()
        for a in list(xs) + list(ys):
            rel &= bracket(a, yn).is_zero()
        ok &= rel
        msgs.append(f"{name} pairing relations {'ok' if rel else 'BAD'}")
    count_u3 = len(enumerate_E_scan(make_strict_upper(3, F5), 2))
    count_sp = len(enumerate_E_scan(
        make_sp_parabolic_nilradical(2, "a1", F5).u_algebra, 2))
    ok &= count_u3 == 6 and count_sp == 6
    msgs.append(f"E(2) counts {count_u3} and {count_sp} (want 6)")
    return ok, "; ".join(msgs)


def check_u5_maxdim(budget: int = 10**8):
    u5 = make_strict_upper(5, F3)
    r, wits = max_elementary_dim(u5, strategy="dfs", budget=budget)
    u23 = subalgebra_subspace(make_nilradical_block(2, 3, F3), u5)
    u32 = subalgebra_subspace(make_nilradical_block(3, 2, F3), u5)
    blocks = set(wits) == {u23, u32}
    ok = r == 6 and blocks
    return ok, (f"max dim {r} with {len(wits)} witnesses, "
                f"exactly the two blocks: {blocks}")


SUITES = {
    "E2u3": check_heisenberg_family,
    "u4-maxdim": check_u4_maximal,
    "sp4-maxdim": check_sp4_borel_maximal,
    "block-orbit": check_block_orbit_constancy,
    "product-points": check_product_points,
    "block-orbit-fibers": check_block_orbit_fibers,
    "adjoint-sl4-point": check_adjoint_block_point_sl4,
    "sp4-fiber-point": check_sp4_fiber_point,
    "truncated-fibers": check_truncated_families,
    "duality": check_duality,
    "theta": check_theta_machinery,
    "gl3-dichotomy": check_gl3_dichotomy,
    "maximal-socle": check_maximality_socle,
    "power-identity": check_power_identity,
    "extraspecial": check_extraspecial,
}

STRETCH_SUITES = {
    "u5-maxdim": check_u5_maxdim,
}


def run_suite(name: str) -> CheckResult:
    fn = SUITES.get(name) or STRETCH_SUITES.get(name)
    if fn is None:
        raise ValueError(f"unknown suite {name!r}; "
                         f"known: {', '.join([*SUITES, *STRETCH_SUITES])}")
    t0 = time.perf_counter()
    passed, details = fn()
    return CheckResult(name, passed, details, time.perf_counter() - t0)


def run_all(include_stretch: bool = False) -> list[CheckResult]:
    names = list(SUITES)
    if include_stretch:
        names += list(STRETCH_SUITES)
    return [run_suite(name) for name in names]
