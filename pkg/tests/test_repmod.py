import itertools

import numpy as np
import pytest

from elemvar.errors import StructureError, UnsupportedCharacteristicError
from elemvar.evariety import enumerate_E_scan
from elemvar.fq import FqContext, FqMatrix, SubspaceBasis
from elemvar.liealg import (
    make_abelian,
    make_gl,
    make_nilradical_block,
    make_sl,
    make_sp,
    make_sp_parabolic_nilradical,
    make_strict_upper,
    subalgebra_subspace,
)
from elemvar.repmod import (
    ConstancyReport,
    HellerModule,
    Representation,
    adjoint,
    constancy_report,
    dual,
    ext_power,
    heller,
    is_free,
    lincomb_powers,
    perp_check,
    profile,
    rad_j,
    rank_loci,
    restrict,
    soc_j,
    std,
    support_membership,
    sym_power,
    tensor,
    truncated_modules,
    verify_lincomb,
)

F3 = FqContext(3)
F5 = FqContext(5)


def coord_plane(ctx, n, rows):
    cols = np.zeros((n, len(rows)), dtype=np.int64)
    for t, r in enumerate(rows):
        cols[r, t] = 1
    return SubspaceBasis.span(ctx, cols)


def regular_module(ctx):
    """Multiplication on k[t]/(t^p): a single full Jordan block."""
    p = ctx.p
    J = np.zeros((p, p), dtype=np.int64)
    for i in range(p - 1):
        J[i + 1, i] = 1
    g = make_abelian(1, ctx)
    return Representation(g, p, (FqMatrix.from_array(ctx, J),), label="A")


def trivial_module(ctx, n):
    g = make_abelian(n, ctx)
    z = FqMatrix.zeros(ctx, 1, 1)
    return Representation(g, 1, (z,) * n, label="k")


def test_representation_validation():
    u3 = make_strict_upper(3, F3)
    with pytest.raises(StructureError):
        # E12 and E23 do not commute, but the abelian-pattern action pretends
        Representation(u3, 3, tuple(u3.basis[:2]) + (FqMatrix.zeros(F3, 3, 3),))
    V = std(u3)
    assert V.dim == 3 and len(V.action) == 3


def test_dual_is_negative_transpose():
    gl3 = make_gl(3, F3)
    D = dual(std(gl3))
    for m, d in zip(std(gl3).action, D.action):
        assert d.a.tolist() == ((-m.a.T) % 3).tolist()


def test_functor_dimensions():
    gl4 = make_gl(4, F5)
    V = std(gl4)
    assert sym_power(V, 2).dim == 10
    assert ext_power(V, 2).dim == 6
    assert tensor(V, V).dim == 16
    with pytest.raises(StructureError):
        tensor(V, std(make_gl(4, F3)))


@pytest.mark.parametrize("ctx", [F3, F5])
def test_std_gl4_profile(ctx):
    gl4 = make_gl(4, ctx)
    u22 = subalgebra_subspace(make_nilradical_block(2, 2, ctx), gl4)
    pr = profile(std(gl4), u22)
    assert pr.rad[0] == 2 and pr.rad[1] == 0
    assert pr.soc[0] == 2
    assert all(v == 0 for v in pr.rad[1:])
    assert all(v == 4 for v in pr.soc[1:])


def test_adjoint_profiles_at_block_plane():
    # Soc^1 is the centralizer of the block nilradical: the nilradical itself
    # plus central scalars.  gl_4 contributes the identity (dim 5); sl_4 has
    # no traceless scalars at p = 5 (dim 4); sp_4 likewise (dim 3).
    sl4 = make_sl(4, F5)
    u22 = subalgebra_subspace(make_nilradical_block(2, 2, F5), sl4)
    res = restrict(adjoint(sl4), u22)
    assert rad_j(res, 1)[0] == 11
    assert rad_j(res, 2)[0] == 4
    assert soc_j(res, 1)[0] == 4

    gl4 = make_gl(4, F5)
    u22g = subalgebra_subspace(make_nilradical_block(2, 2, F5), gl4)
    resg = restrict(adjoint(gl4), u22g)
    assert rad_j(resg, 1)[0] == 11
    assert rad_j(resg, 2)[0] == 4
    assert soc_j(resg, 1)[0] == 5

    sp4 = make_sp(4, F5)
    ua2 = subalgebra_subspace(
        make_sp_parabolic_nilradical(2, "an", F5).u_algebra, sp4)
    ress = restrict(adjoint(sp4), ua2)
    assert rad_j(ress, 2)[0] == 3
    assert soc_j(ress, 1)[0] == 3


def test_functor_rad2_at_block_plane():
    gl4 = make_gl(4, F5)
    u22 = subalgebra_subspace(make_nilradical_block(2, 2, F5), gl4)
    V = std(gl4)
    assert rad_j(restrict(sym_power(V, 2), u22), 2)[0] == 3
    assert rad_j(restrict(ext_power(V, 2), u22), 2)[0] == 1
    assert rad_j(restrict(tensor(V, V), u22), 2)[0] == 4


def test_truncated_module_shapes():
    assert truncated_modules(2, F3, "N:1").dim == 3
    assert truncated_modules(4, F3, "M:2").dim == 10
    assert truncated_modules(3, F3, "R:1").dim == 13
    with pytest.raises(ValueError):
        truncated_modules(2, F3, "N:3")  # j must stay below p
    with pytest.raises(ValueError):
        truncated_modules(2, F3, "Q:1")


def test_truncated_N_action():
    N = truncated_modules(2, F3, "N:1")  # basis: 1, x_2, x_1 (degree order)
    one = next(t for t in range(3) if all(op.a[:, t].sum() for op in N.action))
    for op in N.action:
        col = op.a[:, one]
        assert col.sum() == 1  # x_i * 1 = x_i
        target = int(np.nonzero(col)[0][0])
        assert not op.a[:, target].any()  # x_i * x_j = 0 past the cutoff


def test_truncated_fiber_values():
    M2 = truncated_modules(4, F3, "M:2")
    N1 = truncated_modules(4, F3, "N:1")
    N2 = truncated_modules(4, F3, "N:2")
    pl = coord_plane(F3, 4, [0, 1])
    assert soc_j(restrict(M2, pl), 1)[0] == 5
    assert rad_j(restrict(N1, pl), 1)[0] == 2
    assert rad_j(restrict(N2, pl), 2)[0] == 3
    R1 = truncated_modules(3, F3, "R:1")
    line = coord_plane(F3, 3, [1])
    assert soc_j(restrict(R1, line), 1)[0] == 8


def test_restrict_errors():
    gl3 = make_gl(3, F3)
    V = std(gl3)
    with pytest.raises(StructureError):
        restrict(V, SubspaceBasis.zero(F3, 9))
    # E_12, E_23 span a non-elementary plane of gl_3
    e12 = gl3.coords_of(gl3.basis[1])
    e23 = gl3.coords_of(gl3.basis[5])
    bad = SubspaceBasis.span(F3, np.stack([e12, e23], axis=1))
    with pytest.raises(StructureError):
        restrict(V, bad)


def test_rad_soc_bounds():
    u3 = make_strict_upper(3, F3)
    pl = coord_plane(F3, 3, [0, 1])
    res = restrict(std(u3), pl)
    assert res.top_degree == 4
    with pytest.raises(ValueError):
        rad_j(res, 0)
    with pytest.raises(ValueError):
        soc_j(res, 5)


def test_is_free_and_support():
    A = regular_module(F3)
    full = SubspaceBasis.full(F3, 1)
    assert is_free(restrict(A, full))
    assert not support_membership(A, full)
    k = trivial_module(F3, 1)
    assert not is_free(restrict(k, full))
    assert support_membership(k, full)
    sl2 = make_sl(2, F3)
    nilline = SubspaceBasis.span(
        F3, sl2.coords_of(sl2.basis[0]).reshape(-1, 1))
    assert support_membership(std(sl2), nilline)  # d = 2 not divisible by 3


def test_rank_loci_on_heisenberg():
    u3 = make_strict_upper(3, F3)
    pts = enumerate_E_scan(u3, 2)
    locus = rank_loci(std(u3), pts, 1)
    # only the plane spanned by the two "vanishing product" root vectors has
    # a 1-dim radical; the other three all reach dim 2
    assert locus.rad_max == 2
    assert len(locus.rad_locus) == 1
    assert locus.rad_locus[0] == coord_plane(F3, 3, [0, 1])
    rep = constancy_report(std(u3), pts)
    assert not rep.rows[0].rad_constant
    assert rep.rows[0].rad_range == (1, 2)
    assert not rep.all_constant


def test_constancy_on_free_module():
    A = regular_module(F3)
    ga1 = make_abelian(1, F3)
    pts = enumerate_E_scan(ga1, 1)
    rep = constancy_report(A, pts)
    assert rep.all_constant
    for j in (1, 2):
        locus = rank_loci(A, pts, j)
        assert not locus.rad_locus and not locus.soc_locus and not locus.nonfree


def test_perp_check_block_plane():
    gl4 = make_gl(4, F3)
    u22 = subalgebra_subspace(make_nilradical_block(2, 2, F3), gl4)
    V = std(gl4)
    for j in range(1, 9):
        assert perp_check(V, u22, j)
    res = restrict(V, u22)
    assert soc_j(restrict(dual(V), u22), 1)[0] == 4 - rad_j(res, 1)[0]


def test_perp_check_random_modules():
    rng = np.random.default_rng(20260814)
    for _ in range(60):
        p = int(rng.choice([2, 3]))
        r = int(rng.choice([1, 2]))
        ctx = FqContext(p)
        M = _random_commuting_module(rng, ctx, r, dmax=8)
        full = SubspaceBasis.full(ctx, r)
        for j in range(1, (p - 1) * r + 1):
            assert perp_check(M, full, j)


def _random_commuting_module(rng, ctx, r, dmax):
    """Random d-dim module over the r-dim abelian algebra with zero p-power.

    First operator: random strictly upper triangular with vanishing p-th
    power; the rest are p-nilpotent polynomials in it (constant term zero),
    which commute automatically.
    """
    p = ctx.p
    d = int(rng.integers(1, dmax + 1))
    while True:
        u = np.triu(rng.integers(0, p, size=(d, d)), 1).astype(np.int64)
        acc = u.copy()
        for _ in range(p - 1):
            acc = (acc @ u) % p
        if not acc.any():
            break
    ops = [u]
    for _ in range(r - 1):
        coeffs = rng.integers(0, p, size=p - 1)
        m = np.zeros((d, d), dtype=np.int64)
        term = np.eye(d, dtype=np.int64)
        for c in coeffs:
            term = (term @ u) % p
            m = (m + int(c) * term) % p
        ops.append(m)
    g = make_abelian(r, ctx)
    mats = tuple(FqMatrix.from_array(ctx, m) for m in ops)
    return Representation(g, d, mats, label="rand")


def test_profile_monotonic_on_random_corpus():
    rng = np.random.default_rng(7)
    for _ in range(40):
        p = int(rng.choice([2, 3]))
        r = int(rng.choice([1, 2]))
        ctx = FqContext(p)
        M = _random_commuting_module(rng, ctx, r, dmax=8)
        pr = profile(M, SubspaceBasis.full(ctx, r))  # validates monotonicity
        assert pr.rad[-1] <= pr.rad[0]


@pytest.mark.parametrize("r,p,s,expect", [
    (1, 3, 0, 1), (1, 3, 1, 2), (1, 3, 2, 1), (1, 3, 3, 2),
    (2, 2, 1, 3), (2, 2, 2, 5), (2, 3, 1, 8),
])
def test_heller_dims(r, p, s, expect):
    h = heller(r, p, s)
    assert h.dim == expect
    assert isinstance(h, HellerModule)


def test_heller_restriction_properties():
    ctx = FqContext(2)
    full = SubspaceBasis.full(ctx, 2)
    heads = []
    for s in range(4):
        h = heller(2, 2, s)
        rep = h.representation
        res = restrict(rep, full)
        head = h.dim - rad_j(res, 1)[0]
        heads.append(head)
        assert not is_free(res)
    # dim recursion: dim O^{s+1} = head_s * p^r - dim O^s
    dims = [heller(2, 2, s).dim for s in range(5)]
    for s in range(4):
        assert dims[s + 1] == heads[s] * 4 - dims[s]


def test_lincomb_powers_examples():
    assert lincomb_powers([1], 5) == [(1, (1,))]
    assert lincomb_powers([0, 3], 5) == [(1, (0, 1))]
    assert lincomb_powers([1, 1], 5) == [(3, (0, 1)), (1, (1, 1)), (1, (2, 1))]
    with pytest.raises(UnsupportedCharacteristicError):
        lincomb_powers([2, 1], 3)


def test_lincomb_identity_exhaustive():
    for n in (1, 2, 3):
        for deg in (1, 2, 3):
            for exps in itertools.product(range(deg + 1), repeat=n):
                if sum(exps) != deg:
                    continue
                assert verify_lincomb(exps, 5), exps


def test_orbit_constancy_gl4_sample():
    # adjacent check to the full acceptance run: profiles agree between the
    # base block plane and one nontrivial GL_4(F_3) translate
    gl4 = make_gl(4, F3)
    u22 = subalgebra_subspace(make_nilradical_block(2, 2, F3), gl4)
    # lower-left entry keeps g outside the stabilizer parabolic
    g = np.eye(4, dtype=np.int64)
    g[2, 0] = 1
    ginv = np.eye(4, dtype=np.int64)
    ginv[2, 0] = 2
    cols = []
    for t in range(4):
        m = gl4.element(u22.basis.a[:, t]).a
        cols.append(gl4.coords_of(
            FqMatrix.from_array(F3, (g @ m @ ginv) % 3)))
    moved = SubspaceBasis.span(F3, np.stack(cols, axis=1))
    assert moved != u22
    V = std(gl4)
    p1, p2 = profile(V, u22), profile(V, moved)
    assert (p1.rad, p1.soc) == (p2.rad, p2.soc)
