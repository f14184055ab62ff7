"""Constructors, bracket/p-power closure, centralizers, Darboux pairs."""

import itertools

import numpy as np
import pytest

from elemvar.errors import StructureError, UnsupportedCharacteristicError
from elemvar.fq import FqContext, FqMatrix, SubspaceBasis
from elemvar.liealg import (
    MatrixLieAlgebra,
    bracket,
    bracket_span,
    centralizer_in,
    darboux_basis,
    direct_sum,
    make_abelian,
    make_gl,
    make_nilradical_block,
    make_sl,
    make_sl_parabolic,
    make_so,
    make_sp,
    make_sp_borel_nilradical,
    make_sp_parabolic_nilradical,
    make_strict_upper,
    ppower,
    subalgebra_subspace,
)

F2 = FqContext(2)
F3 = FqContext(3)
F5 = FqContext(5)


def _em(ctx, n, i, j):
    arr = np.zeros((n, n), dtype=np.int64)
    arr[i, j] = 1
    return FqMatrix.from_array(ctx, arr)


def test_constructor_dimensions():
    assert make_gl(3, F5).dim == 9
    assert make_sl(4, F3).dim == 15
    assert make_sp(4, F5).dim == 10
    assert make_so(5, F5).dim == 10
    assert make_strict_upper(4, F3).dim == 6
    assert make_nilradical_block(2, 2, F3).dim == 4
    assert make_abelian(3, F3).dim == 3


def test_sp_so_reject_characteristic_two():
    with pytest.raises(UnsupportedCharacteristicError):
        make_sp(4, F2)
    with pytest.raises(UnsupportedCharacteristicError):
        make_so(5, F2)


def test_constructor_invariants_across_small_cases():
    # Construction itself verifies independence, bracket and p-power closure.
    for ctx in (F2, F3, F5):
        for n in range(2, 7):
            make_gl(n, ctx) if n <= 4 else make_strict_upper(n, ctx)
            make_sl(min(n, 4), ctx)
            make_strict_upper(n, ctx)
            for r in range(1, n):
                make_nilradical_block(r, n - r, ctx)
        if ctx.p > 2:
            make_sp(4, ctx)
            make_sp(6, ctx)
            make_so(5, ctx)


def test_jacobi_identity_on_basis_triples():
    algebras = [make_gl(3, F3), make_sl(4, F5), make_sp(4, F5), make_so(5, F3),
                make_strict_upper(4, F3), make_sp(6, F5),
                direct_sum(make_sl(2, F3), make_sl(2, F3))]
    for g in algebras:
        assert g.verify_jacobi(), g.name


def test_dependent_basis_rejected():
    e = _em(F3, 2, 0, 1)
    with pytest.raises(StructureError):
        MatrixLieAlgebra(F3, 2, [e, e.scale(2)])


def test_non_closed_basis_rejected():
    # span{E_12, E_21} is not bracket-closed in gl_2.
    with pytest.raises(StructureError):
        MatrixLieAlgebra(F3, 2, [_em(F3, 2, 0, 1), _em(F3, 2, 1, 0)])


def test_bracket_and_ppower_examples():
    e12, e23, e13 = _em(F2, 3, 0, 1), _em(F2, 3, 1, 2), _em(F2, 3, 0, 2)
    assert bracket(e12, e23) == e13
    assert bracket(e12, e12).is_zero()
    assert ppower(e12 + e23) == e13  # (E_12+E_23)^2 = E_13 at p = 2
    assert ppower(_em(F5, 2, 0, 1)).is_zero()


def test_strict_upper_u3_is_cube_zero_at_p3():
    u3 = make_strict_upper(3, F3)
    coords = np.stack(np.meshgrid(*([np.arange(3)] * 3), indexing="ij"),
                      axis=-1).reshape(-1, 3)
    mats = u3.elements_batch(coords)
    cubes = np.einsum("mij,mjk,mkl->mil", mats, mats, mats) % 3
    assert not cubes.any()


def test_coords_roundtrip_and_membership():
    g = make_sl(3, F5)
    v = np.arange(g.dim, dtype=np.int64) % 5
    x = g.element(v)
    assert np.array_equal(g.coords_of(x), v)
    assert g.coords_of(FqMatrix.identity(F5, 3)) is None  # I has trace 3 != 0


def test_centralizer_of_regular_nilpotent_in_gl3():
    g = make_gl(3, F5)
    j = np.zeros((3, 3), dtype=np.int64)
    j[0, 1] = j[1, 2] = 1
    jc = g.coords_of(FqMatrix.from_array(F5, j))
    cent = centralizer_in(g, SubspaceBasis.span(F5, jc[:, None]))
    assert cent.rank == 3
    jm = FqMatrix.from_array(F5, j)
    for probe in (FqMatrix.identity(F5, 3), jm, jm @ jm):
        assert cent.contains_vector(g.coords_of(probe))


def test_centralizer_of_zero_is_everything():
    g = make_gl(2, F3)
    assert centralizer_in(g, SubspaceBasis.zero(F3, g.dim)).rank == g.dim


def test_centralizer_of_hook_in_u3():
    u3 = make_strict_upper(3, F3)
    hook = SubspaceBasis.span(F3, np.eye(3, dtype=np.int64)[:, :2])  # E_12, E_13
    cent = centralizer_in(u3, hook)
    assert cent.rank == 2
    assert cent == hook


def test_bracket_span_examples():
    sl4 = make_sl(4, F5)
    pb = make_sl_parabolic(4, 2, F5)
    full = SubspaceBasis.full(F5, sl4.dim)
    assert bracket_span(pb.u_basis, full, sl4).rank == 11  # = 15 - 4
    assert bracket_span(pb.u_basis, pb.p_basis, sl4) == pb.u_basis
    assert bracket_span(pb.u_basis, pb.u_basis, sl4).is_zero()


@pytest.mark.parametrize("ctx", [F3, F5])
def test_cominuscule_parabolic_properties_type_a(ctx):
    for n in range(2, 6):
        g = make_sl(n, ctx)
        full = SubspaceBasis.full(ctx, g.dim)
        for r in range(1, n):
            pb = make_sl_parabolic(n, r, ctx)
            assert pb.is_cominuscule
            assert pb.u_basis.rank == r * (n - r)
            assert bracket_span(pb.u_basis, full, g) == pb.p_basis
            assert bracket_span(pb.u_basis, pb.p_basis, g) == pb.u_basis


@pytest.mark.parametrize("n", [2, 3])
def test_cominuscule_parabolic_properties_type_c(n):
    pb = make_sp_parabolic_nilradical(n, "an", F5)
    g = pb.parent
    full = SubspaceBasis.full(F5, g.dim)
    assert pb.is_cominuscule
    assert pb.u_basis.rank == n * (n + 1) // 2
    assert bracket_span(pb.u_basis, pb.u_basis, g).is_zero()
    assert bracket_span(pb.u_basis, full, g) == pb.p_basis
    assert bracket_span(pb.u_basis, pb.p_basis, g) == pb.u_basis


def test_sp_parabolic_dimensions():
    assert make_sp_parabolic_nilradical(2, "a1", F5).u_algebra.dim == 3
    assert make_sp_parabolic_nilradical(2, "an", F5).u_algebra.dim == 3
    assert make_sp_parabolic_nilradical(3, "an", F5).u_algebra.dim == 6
    assert make_sp_parabolic_nilradical(3, "a1", F5).u_algebra.dim == 5
    assert not make_sp_parabolic_nilradical(3, "a1", F5).is_cominuscule


def test_sp_borel_nilradical():
    u = make_sp_borel_nilradical(2, F5)
    assert u.dim == 4
    sp4 = make_sp(4, F5)
    sub = subalgebra_subspace(u, sp4)
    assert sub.rank == 4


def test_darboux_basis_u3():
    u3 = make_strict_upper(3, F3)
    data = darboux_basis(u3)
    xs, ys, yn = data.darboux
    assert len(xs) == len(ys) == 1
    assert bracket(xs[0], ys[0]) == yn
    assert data.center_generator == yn
    # Form matrix is the standard ((0,1),(-1,0)) block.
    assert data.form_matrix.entries == (0, 1, 2, 0)


@pytest.mark.parametrize("n,ctx", [(2, F5), (3, F5), (3, F3)])
def test_darboux_basis_sp_extraspecial(n, ctx):
    data = darboux_basis(make_sp_parabolic_nilradical(n, "a1", ctx).u_algebra)
    xs, ys, yn = data.darboux
    assert len(xs) == len(ys) == n - 1
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            b = bracket(x, y)
            assert b == (yn if i == j else b - b)
    for a, b in itertools.combinations(list(xs) + [yn], 2):
        assert bracket(a, b).is_zero()


def test_darboux_rejects_non_extraspecial():
    with pytest.raises(StructureError):
        darboux_basis(make_strict_upper(4, F3))  # center ok but dim 6 even
    with pytest.raises(StructureError):
        darboux_basis(make_abelian(3, F3))  # derived algebra is zero
    with pytest.raises(StructureError):
        darboux_basis(make_strict_upper(5, F5))  # center != [g, g]


def test_direct_sum():
    s = direct_sum(make_sl(2, F3), make_sl(2, F3))
    assert s.dim == 6
    assert s.ambient_size == 4
    u = direct_sum(make_strict_upper(3, F3), make_strict_upper(3, F3))
    assert u.dim == 6
    assert u.verify_jacobi()


def test_subalgebra_subspace_roundtrip():
    gl4 = make_gl(4, F3)
    u22 = make_nilradical_block(2, 2, F3)
    sub = subalgebra_subspace(u22, gl4)
    assert sub.rank == 4
    for b in u22.basis:
        assert sub.contains_vector(gl4.coords_of(b))
    with pytest.raises(StructureError):
        subalgebra_subspace(make_gl(4, F3), u22)


def test_abelian_hook_realization():
    g = make_abelian(2, F3)
    assert not g.structure.any()
    assert not g.ppow_coords.any()
