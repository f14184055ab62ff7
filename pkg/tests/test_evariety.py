import itertools

import numpy as np
import pytest

from elemvar.errors import BudgetExceededError, StructureError
from elemvar.evariety import (
    ElementarySubalgebra,
    enumerate_E_dfs,
    enumerate_E_scan,
    is_elementary,
    is_maximal_elementary,
    max_elementary_dim,
    product_embed,
)
from elemvar.fq import (
    FqContext,
    SubspaceBasis,
    gaussian_binomial,
    iter_echelon_batches,
)
from elemvar.liealg import (
    darboux_basis,
    direct_sum,
    make_gl,
    make_nilradical_block,
    make_sl,
    make_sp,
    make_sp_borel_nilradical,
    make_sp_parabolic_nilradical,
    make_strict_upper,
    subalgebra_subspace,
)

F3 = FqContext(3)
F5 = FqContext(5)


def unit_plane(ctx, n, rows):
    cols = np.zeros((n, len(rows)), dtype=np.int64)
    for t, r in enumerate(rows):
        cols[r, t] = 1
    return SubspaceBasis.span(ctx, cols)


def test_is_elementary_heisenberg():
    u3 = make_strict_upper(3, F3)
    # basis order [E12, E13, E23]
    assert is_elementary(u3, unit_plane(F3, 3, [0, 1]))  # [E12, E13] = 0
    assert not is_elementary(u3, unit_plane(F3, 3, [0, 2]))  # [E12, E23] = E13
    assert is_elementary(u3, SubspaceBasis.zero(F3, 3))


def test_elementary_subalgebra_rejects_bad_plane():
    u3 = make_strict_upper(3, F3)
    with pytest.raises(StructureError):
        ElementarySubalgebra(u3, unit_plane(F3, 3, [0, 2]))
    e = ElementarySubalgebra(u3, unit_plane(F3, 3, [0, 1]))
    assert e.r == 2


@pytest.mark.parametrize("p", [3, 5, 7])
def test_heisenberg_plane_count(p):
    ctx = FqContext(p)
    u3 = make_strict_upper(3, ctx)
    pts = enumerate_E_scan(u3, 2)
    assert len(pts) == p + 1
    assert pts.complete and pts.strategy == "scan"
    center = u3.coords_of(u3.basis[1])  # E13 spans [u3, u3]
    assert all(pl.contains_vector(center) for pl in pts)


def test_heisenberg_planes_match_raw_oracle():
    # Independent recomputation with plain numpy: run over all canonical
    # 2-plane bases of F_3^3, map coordinates to matrices by hand, and test
    # commutation plus vanishing cubes directly.
    u3 = make_strict_upper(3, F3)
    mats = np.stack([b.a for b in u3.basis])
    expected = set()
    for batch in iter_echelon_batches(F3, 3, 2):
        for t in range(batch.shape[0]):
            x = np.tensordot(batch[t, :, 0], mats, axes=(0, 0)) % 3
            y = np.tensordot(batch[t, :, 1], mats, axes=(0, 0)) % 3
            comm = not ((x @ y - y @ x) % 3).any()
            cubes = not (np.linalg.matrix_power(x, 3) % 3).any() \
                and not (np.linalg.matrix_power(y, 3) % 3).any()
            if comm and cubes:
                expected.add(SubspaceBasis.span(F3, batch[t]))
    got = set(enumerate_E_scan(u3, 2).planes)
    assert got == expected and len(got) == 4


def test_u4_unique_top_plane():
    u4 = make_strict_upper(4, F3)
    assert gaussian_binomial(6, 4, 3) == 11011
    pts = enumerate_E_scan(u4, 4)
    # basis order [E12, E13, E14, E23, E24, E34]; the block span{E13, E14,
    # E23, E24} is the only 4-dimensional elementary subalgebra.
    assert len(pts) == 1
    assert pts.planes[0] == unit_plane(F3, 6, [1, 2, 3, 4])


def test_sl2_sum_product_bijection():
    sl2 = make_sl(2, F3)
    lines = enumerate_E_scan(sl2, 1)
    assert len(lines) == 4
    gsum = direct_sum(sl2, sl2)
    pts = enumerate_E_scan(gsum, 2)
    assert len(pts) == 16
    products = set()
    for a, b in itertools.product(lines, repeat=2):
        e = product_embed(ElementarySubalgebra(sl2, a),
                          ElementarySubalgebra(sl2, b), gsum=gsum)
        assert e.r == 2
        products.add(e.plane)
    assert products == set(pts.planes)


def test_max_dim_within_u4_of_sl4():
    sl4 = make_sl(4, F3)
    within = subalgebra_subspace(make_strict_upper(4, F3), sl4)
    r, wit = max_elementary_dim(sl4, within=within)
    assert r == 4
    assert wit == [subalgebra_subspace(make_nilradical_block(2, 2, F3), sl4)]


def test_max_dim_within_sp4_borel():
    sp4 = make_sp(4, F5)
    within = subalgebra_subspace(make_sp_borel_nilradical(2, F5), sp4)
    r, wit = max_elementary_dim(sp4, within=within)
    assert r == 3
    sym_block = make_sp_parabolic_nilradical(2, "an", F5).u_algebra
    assert wit == [subalgebra_subspace(sym_block, sp4)]


def test_max_dim_u3():
    r, wit = max_elementary_dim(make_strict_upper(3, F3))
    assert r == 2 and len(wit) == 4


def test_maximality():
    gl4 = make_gl(4, F3)
    u22 = subalgebra_subspace(make_nilradical_block(2, 2, F3), gl4)
    assert is_maximal_elementary(gl4, u22)
    u3 = make_strict_upper(3, F3)
    assert not is_maximal_elementary(u3, unit_plane(F3, 3, [1]))
    assert is_maximal_elementary(u3, unit_plane(F3, 3, [0, 1]))
    with pytest.raises(StructureError):
        is_maximal_elementary(u3, unit_plane(F3, 3, [0, 2]))


@pytest.mark.parametrize("r", [2, 3])
def test_dfs_matches_scan_on_u4(r):
    u4 = make_strict_upper(4, F3)
    scan = enumerate_E_scan(u4, r)
    dfs = enumerate_E_dfs(u4, r)
    assert len(dfs) == len(set(dfs.planes)) == len(scan)
    assert set(dfs.planes) == set(scan.planes)
    assert dfs.planes == scan.planes  # both sorted the same way


def test_dfs_matches_scan_on_sl2_sum():
    gsum = direct_sum(make_sl(2, F3), make_sl(2, F3))
    assert set(enumerate_E_dfs(gsum, 2).planes) \
        == set(enumerate_E_scan(gsum, 2).planes)


def test_gl3_dfs_against_pair_oracle():
    # Fiber check: for a sample of elementary lines <x>, rebuild every
    # elementary 2-plane through x from scratch (centralizer of x, cube-zero
    # filter, plain numpy) and compare with the DFS planes containing x.
    g = make_gl(3, F3)
    dfs = enumerate_E_dfs(g, 2)
    assert len(dfs) == len(set(dfs.planes))

    lines = []
    for batch in iter_echelon_batches(F3, 9, 1):
        for t in range(batch.shape[0]):
            v = batch[t, :, 0]
            x = v.reshape(3, 3)  # make_gl coords are row-major E_ij
            if not (np.linalg.matrix_power(x, 3) % 3).any():
                lines.append(v)
    assert len(lines) == 364  # nilpotent lines in gl_3(F_3)

    for v in lines[::10]:
        x = v.reshape(3, 3)
        # centralizer of x inside gl_3 as the kernel of y -> xy - yx
        rows = []
        for m in range(9):
            y = np.zeros(9, dtype=np.int64)
            y[m] = 1
            ym = y.reshape(3, 3)
            rows.append(((x @ ym - ym @ x) % 3).reshape(9))
        ad = np.array(rows).T % 3
        null = _null_space_mod3(ad)
        fiber = set()
        for coeffs in itertools.product(range(3), repeat=null.shape[1]):
            y = np.tensordot(np.array(coeffs, dtype=np.int64), null.T, axes=1) % 3
            ym = y.reshape(3, 3)
            if (np.linalg.matrix_power(ym, 3) % 3).any():
                continue
            plane = SubspaceBasis.span(F3, np.stack([v, y], axis=1))
            if plane.rank == 2:
                fiber.add(plane)
        via_dfs = {pl for pl in dfs
                   if pl.contains_vector(v)}
        assert fiber == via_dfs


def _null_space_mod3(a):
    a = a.copy() % 3
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if a[i, c]), None)
        if pr is None:
            continue
        a[[r, pr]] = a[[pr, r]]
        if a[r, c] == 2:  # 2 is its own inverse mod 3
            a[r] = (a[r] * 2) % 3
        for i in range(rows):
            if i != r and a[i, c]:
                a[i] = (a[i] - a[i, c] * a[r]) % 3
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for t, f in enumerate(free):
        basis[f, t] = 1
        for i, c in enumerate(pivots):
            basis[c, t] = (-a[i, f]) % 3
    return basis


@pytest.mark.parametrize("make,ctx,expect_max", [
    (lambda: make_strict_upper(3, F3), F3, 2),
    (lambda: make_strict_upper(3, F5), F5, 2),
    (lambda: make_sp_parabolic_nilradical(2, "a1", F5).u_algebra, F5, 2),
    (lambda: make_sp_parabolic_nilradical(3, "a1", F5).u_algebra, F5, 3),
])
def test_extraspecial_max_dim_and_center(make, ctx, expect_max):
    g = make()
    data = darboux_basis(g)
    center = g.coords_of(data.center_generator)
    r, wit = max_elementary_dim(g)
    assert r == expect_max
    assert wit
    for pl in wit:
        assert pl.contains_vector(center)
        assert is_maximal_elementary(g, pl)


def test_scan_budget():
    gl3 = make_gl(3, F3)
    with pytest.raises(BudgetExceededError) as exc:
        enumerate_E_scan(gl3, 2, budget=1000)
    assert exc.value.count == gaussian_binomial(9, 2, 3)


def test_dfs_budget():
    gl3 = make_gl(3, F3)
    with pytest.raises(BudgetExceededError):
        enumerate_E_dfs(gl3, 2, budget=50)


def test_product_embed_block_structure():
    u3 = make_strict_upper(3, F3)
    e1 = ElementarySubalgebra(u3, unit_plane(F3, 3, [0, 1]))
    e2 = ElementarySubalgebra(u3, unit_plane(F3, 3, [1]))
    prod = product_embed(e1, e2)
    assert prod.r == 3
    assert prod.algebra.dim == 6
    assert prod.plane == unit_plane(F3, 6, [0, 1, 4])
