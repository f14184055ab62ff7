"""Matrix realizations of p-restricted Lie algebras.

Every algebra here is a span of N×N matrices closed under commutator and
under the p-th matrix power, which is the p-operation throughout.  Elements
are addressed either as matrices or as coordinate vectors over the chosen
basis; all the subspace machinery (centralizers, bracket spans, nilradicals)
works in basis coordinates so it can feed the plane-enumeration layer
directly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import StructureError, UnsupportedCharacteristicError
from .fq import (
    FqContext,
    FqMatrix,
    SubspaceBasis,
    _row_reduce,
    inverse,
    kernel_basis,
    rank,
)

_DT = np.int64


def bracket(x: FqMatrix, y: FqMatrix) -> FqMatrix:
    """Commutator xy - yx."""
    return (x @ y) - (y @ x)


def ppower(x: FqMatrix) -> FqMatrix:
    """p-th matrix power, p the field characteristic."""
    return x ** x.ctx.p


class MatrixLieAlgebra:
    """A p-restricted Lie algebra given by a basis of N×N matrices."""

    def __init__(self, ctx: FqContext, ambient_size: int,
                 basis: Sequence[FqMatrix], name: str = ""):
        if not basis:
            raise StructureError("empty basis")
        self.ctx = ctx
        self.ambient_size = ambient_size
        self.basis = list(basis)
        self.name = name or "g"
        n = len(self.basis)
        for b in self.basis:
            if b.rows != ambient_size or b.cols != ambient_size or b.ctx != ctx:
                raise StructureError("basis matrices must share size and context")
        flat = np.stack([b.a.reshape(-1) for b in self.basis])
        if rank(FqMatrix.from_array(ctx, flat, validate=False)) != n:
            raise StructureError(f"{self.name}: basis is linearly dependent")
        self._flat = flat
        # Pivot coordinate positions give an exact solver vec(X) -> coords.
        _, pivots = _row_reduce(ctx, flat)
        self._pivot_cols = np.array(pivots, dtype=np.intp)
        self._solver = inverse(
            FqMatrix.from_array(ctx, flat[:, self._pivot_cols].T, validate=False)).a
        self.structure = np.zeros((n, n, n), dtype=_DT)
        for i in range(n):
            for j in range(i + 1, n):
                c = self.coords_of(bracket(self.basis[i], self.basis[j]))
                if c is None:
                    raise StructureError(f"{self.name}: not closed under bracket")
                self.structure[i, :, j] = c
                self.structure[j, :, i] = ctx.neg(c)
        self.ppow_coords = np.zeros((n, n), dtype=_DT)
        for i in range(n):
            c = self.coords_of(ppower(self.basis[i]))
            if c is None:
                raise StructureError(f"{self.name}: not closed under p-th power")
            self.ppow_coords[i] = c

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords_of(self, x: FqMatrix) -> np.ndarray | None:
        """Coordinates of x in the basis, or None when x is outside the span."""
        vec = x.a.reshape(-1)
        cand = self.ctx.matmul(self._solver, vec[self._pivot_cols])
        if np.array_equal(self.ctx.matmul(self._flat.T, cand), vec):
            return cand
        return None

    def coords_batch(self, mats: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates for a stack (m, N, N); second return masks span members."""
        m = mats.shape[0]
        vecs = mats.reshape(m, -1)
        cand = self.ctx.matmul(vecs[:, self._pivot_cols], self._solver.T)
        ok = (self.ctx.matmul(cand, self._flat) == vecs).all(axis=1)
        return cand, ok

    def element(self, coords: Sequence[int] | np.ndarray) -> FqMatrix:
        v = np.asarray(coords, _DT).reshape(-1)
        arr = self.ctx.matmul(v[None, :], self._flat)[0]
        return FqMatrix.from_array(
            self.ctx, arr.reshape(self.ambient_size, self.ambient_size), validate=False)

    def elements_batch(self, coords: np.ndarray) -> np.ndarray:
        """Stack of matrices for a (m, dim) coordinate batch."""
        out = self.ctx.matmul(coords, self._flat)
        return out.reshape(coords.shape[0], self.ambient_size, self.ambient_size)

    def ad_coord_matrix(self, coords: Sequence[int] | np.ndarray) -> np.ndarray:
        """Matrix of ad(x) on basis coordinates, x given by coordinates."""
        v = np.asarray(coords, _DT).reshape(-1)
        n = self.dim
        out = np.zeros((n, n), dtype=_DT)
        for i in range(n):
            vi = int(v[i])
            if vi:
                out = self.ctx.add(out, self.ctx.mul(self.structure[i], vi))
        return out

    def verify_jacobi(self) -> bool:
        for x, y, z in itertools.combinations(self.basis, 3):
            s = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) \
                + bracket(z, bracket(x, y))
            if not s.is_zero():
                return False
        return True

    def __repr__(self):
        return f"MatrixLieAlgebra({self.name}, dim {self.dim} in gl_{self.ambient_size})"


@dataclass(frozen=True)
class ExtraspecialData:
    """Darboux presentation of an extraspecial algebra.

    ``darboux`` is (x_1..x_m, y_1..y_m, y_center) with [x_i, y_j] equal to
    delta_ij times the center generator and all other basis brackets zero.
    ``form_matrix`` is the induced skew form on g/z in that basis.
    """

    algebra: MatrixLieAlgebra
    center_generator: FqMatrix
    darboux: tuple[tuple[FqMatrix, ...], tuple[FqMatrix, ...], FqMatrix]
    form_matrix: FqMatrix


@dataclass(frozen=True)
class ParabolicData:
    """A maximal parabolic subalgebra with its nilradical.

    ``simple_root_subset`` holds the 1-based indices of the crossed-out simple
    roots (always a singleton here).  Subspaces are in parent coordinates.
    """

    parent: MatrixLieAlgebra
    simple_root_subset: tuple[int, ...]
    p_basis: SubspaceBasis
    u_basis: SubspaceBasis
    is_cominuscule: bool
    u_algebra: MatrixLieAlgebra = field(repr=False)

    def __post_init__(self):
        br = bracket_span(self.u_basis, self.p_basis, self.parent)
        if not _subspace_leq(br, self.u_basis):
            raise StructureError("nilradical is not an ideal of the parabolic")
        if self.is_cominuscule and self.parent.ctx.p > 2:
            if not bracket_span(self.u_basis, self.u_basis, self.parent).is_zero():
                raise StructureError("cominuscule nilradical must be abelian")


def _subspace_leq(a: SubspaceBasis, b: SubspaceBasis) -> bool:
    return b.contains(a)


def _e(ctx: FqContext, n: int, i: int, j: int, *pairs) -> FqMatrix:
    """Sum of signed elementary matrices: _e(ctx, n, i, j, (k, l, -1), ...)."""
    arr = np.zeros((n, n), dtype=_DT)
    arr[i, j] = 1
    for k, l, s in pairs:
        arr[k, l] = s % ctx.p
    return FqMatrix.from_array(ctx, arr, validate=False)


def make_gl(n: int, ctx: FqContext) -> MatrixLieAlgebra:
    basis = [_e(ctx, n, i, j) for i in range(n) for j in range(n)]
    return MatrixLieAlgebra(ctx, n, basis, name=f"gl{n}")


def make_sl(n: int, ctx: FqContext) -> MatrixLieAlgebra:
    basis = [_e(ctx, n, i, j) for i in range(n) for j in range(n) if i != j]
    basis += [_e(ctx, n, i, i, (i + 1, i + 1, -1)) for i in range(n - 1)]
    return MatrixLieAlgebra(ctx, n, basis, name=f"sl{n}")


def _form_algebra(ctx: FqContext, J: np.ndarray, name: str) -> MatrixLieAlgebra:
    """Basis of {X : X^T J + J X = 0} via the kernel of the linear condition."""
    N = J.shape[0]
    cond = np.zeros((N * N, N * N), dtype=_DT)
    for i in range(N):
        for j in range(N):
            col = i * N + j
            e = np.zeros((N, N), dtype=_DT)
            e[i, j] = 1
            val = ctx.add(ctx.matmul(e.T, J), ctx.matmul(J, e))
            cond[:, col] = val.reshape(-1)
    ker = kernel_basis(FqMatrix.from_array(ctx, cond, validate=False))
    basis = [FqMatrix.from_array(ctx, ker.basis.a[:, t].reshape(N, N), validate=False)
             for t in range(ker.rank)]
    return MatrixLieAlgebra(ctx, N, basis, name=name)


def make_sp(two_n: int, ctx: FqContext) -> MatrixLieAlgebra:
    """sp_{2n} as the stabilizer of the form ((0, I), (-I, 0))."""
    if ctx.p == 2:
        raise UnsupportedCharacteristicError("sp requires p > 2")
    if two_n % 2 or two_n < 2:
        raise ValueError("ambient size must be even")
    n = two_n // 2
    J = np.zeros((two_n, two_n), dtype=_DT)
    J[:n, n:] = np.eye(n, dtype=_DT)
    J[n:, :n] = (-np.eye(n, dtype=_DT)) % ctx.p
    return _form_algebra(ctx, J, name=f"sp{two_n}")


def make_so(odd: int, ctx: FqContext) -> MatrixLieAlgebra:
    """so_{2n+1} for the symmetric form with antidiagonal identity."""
    if ctx.p == 2:
        raise UnsupportedCharacteristicError("so requires p > 2")
    if odd % 2 == 0 or odd < 3:
        raise ValueError("ambient size must be odd and >= 3")
    J = np.eye(odd, dtype=_DT)[::-1].copy()
    return _form_algebra(ctx, J, name=f"so{odd}")


def make_nilradical_block(r: int, s: int, ctx: FqContext) -> MatrixLieAlgebra:
    """u_{r,s} inside gl_{r+s}: the abelian block of E_{i,j} with i <= r < j."""
    if r < 1 or s < 1:
        raise ValueError("need r >= 1 and s >= 1")
    n = r + s
    basis = [_e(ctx, n, i, j) for i in range(r) for j in range(r, n)]
    return MatrixLieAlgebra(ctx, n, basis, name=f"u_{{{r},{s}}}")


def make_strict_upper(n: int, ctx: FqContext) -> MatrixLieAlgebra:
    """u_n: strictly upper triangular matrices, the Borel nilradical of gl_n."""
    if n < 2:
        raise ValueError("need n >= 2")
    basis = [_e(ctx, n, i, j) for i in range(n) for j in range(i + 1, n)]
    return MatrixLieAlgebra(ctx, n, basis, name=f"u{n}")


def make_abelian(n: int, ctx: FqContext) -> MatrixLieAlgebra:
    """Abelian n-dim algebra with zero p-power, realized as the hook u_{1,n}."""
    basis = [_e(ctx, n + 1, 0, j) for j in range(1, n + 1)]
    return MatrixLieAlgebra(ctx, n + 1, basis, name=f"ga^{n}")


def direct_sum(g1: MatrixLieAlgebra, g2: MatrixLieAlgebra) -> MatrixLieAlgebra:
    if g1.ctx != g2.ctx:
        raise StructureError("summands over different field contexts")
    ctx = g1.ctx
    N1, N2 = g1.ambient_size, g2.ambient_size
    N = N1 + N2
    basis = []
    for b in g1.basis:
        arr = np.zeros((N, N), dtype=_DT)
        arr[:N1, :N1] = b.a
        basis.append(FqMatrix.from_array(ctx, arr, validate=False))
    for b in g2.basis:
        arr = np.zeros((N, N), dtype=_DT)
        arr[N1:, N1:] = b.a
        basis.append(FqMatrix.from_array(ctx, arr, validate=False))
    return MatrixLieAlgebra(ctx, N, basis, name=f"{g1.name}+{g2.name}")


def subalgebra_subspace(sub: MatrixLieAlgebra, g: MatrixLieAlgebra) -> SubspaceBasis:
    """The span of sub's basis expressed in g-coordinates."""
    cols = []
    for b in sub.basis:
        c = g.coords_of(b)
        if c is None:
            raise StructureError(f"{sub.name} is not contained in {g.name}")
        cols.append(c)
    return SubspaceBasis.span(g.ctx, np.stack(cols, axis=1))


def centralizer_in(g: MatrixLieAlgebra, s: SubspaceBasis) -> SubspaceBasis:
    """{x in g : [x, v] = 0 for all v in s}, via the stacked ad-map kernel."""
    if s.ambient_dim != g.dim:
        raise StructureError("subspace must be in g-coordinates")
    if s.rank == 0:
        return SubspaceBasis.full(g.ctx, g.dim)
    blocks = [g.ad_coord_matrix(s.basis.a[:, t]) for t in range(s.rank)]
    stacked = FqMatrix.from_array(g.ctx, np.vstack(blocks), validate=False)
    return kernel_basis(stacked)


def bracket_span(a: SubspaceBasis, b: SubspaceBasis, g: MatrixLieAlgebra) -> SubspaceBasis:
    """Canonical span of all [x, y], x over a's basis, y over b's."""
    if a.ambient_dim != g.dim or b.ambient_dim != g.dim:
        raise StructureError("subspaces must be in g-coordinates")
    cols = []
    for t in range(a.rank):
        ad = g.ad_coord_matrix(a.basis.a[:, t])
        for u in range(b.rank):
            cols.append(g.ctx.matmul(ad, b.basis.a[:, u]))
    if not cols:
        return SubspaceBasis.zero(g.ctx, g.dim)
    return SubspaceBasis.span(g.ctx, np.stack(cols, axis=1))


def _center(g: MatrixLieAlgebra) -> SubspaceBasis:
    return centralizer_in(g, SubspaceBasis.full(g.ctx, g.dim))


def darboux_basis(g: MatrixLieAlgebra) -> ExtraspecialData:
    """Darboux presentation of an extraspecial algebra with zero p-power.

    Requires a 1-dimensional center equal to [g, g], odd dimension, and
    vanishing p-th powers; anything else is a structure error.  The pairs are
    produced by symplectic Gram-Schmidt on the form B(x, y) = coefficient of
    [x, y] on the center generator.
    """
    ctx = g.ctx
    n = g.dim
    if n % 2 == 0:
        raise StructureError("extraspecial algebras have odd dimension")
    z = _center(g)
    full = SubspaceBasis.full(ctx, n)
    derived = bracket_span(full, full, g)
    if z.rank != 1 or derived != z:
        raise StructureError("center must be 1-dimensional and equal to [g, g]")
    if g.ppow_coords.any():
        raise StructureError("p-restriction must vanish on the basis")
    if ctx.k == 1 and ctx.q ** n <= 10**6:
        # Exhaustive p-power check; for larger algebras the basis check plus
        # nilpotency class 2 already forces x^p = 0 when p >= 3.
        coords = np.stack(np.meshgrid(*([np.arange(ctx.q)] * n), indexing="ij"),
                          axis=-1).reshape(-1, n)
        mats = g.elements_batch(coords)
        acc = mats
        for _ in range(ctx.p - 1):
            acc = np.einsum("mij,mjk->mik", acc, mats) % ctx.p
        if acc.any():
            raise StructureError("found an element with nonzero p-th power")
    zvec = z.basis.a[:, 0]
    zpiv = z.pivot_rows[0]

    def form(u: np.ndarray, v: np.ndarray) -> int:
        w = ctx.matmul(g.ad_coord_matrix(u), v)
        return int(w[zpiv])

    remaining = [np.eye(n, dtype=_DT)[i] for i in range(n) if i != zpiv]
    xs: list[np.ndarray] = []
    ys: list[np.ndarray] = []
    while remaining:
        u = remaining.pop(0)
        partner = next((t for t, w in enumerate(remaining) if form(u, w) != 0), None)
        if partner is None:
            raise StructureError("degenerate form: not extraspecial")
        v = remaining.pop(partner)
        v = ctx.mul(v, int(ctx.inv(np.asarray(form(u, v)))))
        fixed = []
        for w in remaining:
            w2 = ctx.sub(w, ctx.mul(u, form(w, v)))
            w2 = ctx.add(w2, ctx.mul(v, form(w2, u)))
            fixed.append(w2)
        remaining = fixed
        xs.append(u)
        ys.append(v)
    m = len(xs)
    pairs_basis = xs + ys
    S = np.zeros((2 * m, 2 * m), dtype=_DT)
    for i, u in enumerate(pairs_basis):
        for j, v in enumerate(pairs_basis):
            S[i, j] = form(u, v)
    expect = np.zeros((2 * m, 2 * m), dtype=_DT)
    expect[:m, m:] = np.eye(m, dtype=_DT)
    expect[m:, :m] = (-np.eye(m, dtype=_DT)) % ctx.p
    if not np.array_equal(S, expect):
        raise StructureError("Gram-Schmidt failed to reach the standard form")
    center_mat = g.element(zvec)
    data = ExtraspecialData(
        algebra=g,
        center_generator=center_mat,
        darboux=(tuple(g.element(u) for u in xs), tuple(g.element(v) for v in ys),
                 center_mat),
        form_matrix=FqMatrix.from_array(ctx, S, validate=False),
    )
    _verify_hook_relations(data)
    return data


def _verify_hook_relations(data: ExtraspecialData) -> None:
    xs, ys, yn = data.darboux
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            want = yn if i == j else FqMatrix.zeros(yn.ctx, yn.rows, yn.cols)
            if bracket(x, y) != want:
                raise StructureError("hook relations fail on an (x, y) pair")
    for a, b in itertools.combinations(xs, 2):
        if not bracket(a, b).is_zero():
            raise StructureError("hook relations fail on an (x, x) pair")
    for a, b in itertools.combinations(ys, 2):
        if not bracket(a, b).is_zero():
            raise StructureError("hook relations fail on a (y, y) pair")


# -- parabolic data for sl_n and sp_{2n} -------------------------------------


def make_sl_parabolic(n: int, r: int, ctx: FqContext) -> ParabolicData:
    """The maximal parabolic of sl_n crossing out the r-th simple root.

    Its nilradical is u_{r,n-r}; every maximal parabolic in type A is
    cominuscule.
    """
    if not 1 <= r < n:
        raise ValueError("need 1 <= r < n")
    sl = make_sl(n, ctx)
    u = make_nilradical_block(r, n - r, ctx)
    u_sub = subalgebra_subspace(u, sl)
    p_cols = []
    for i in range(n):
        for j in range(n):
            if i != j and not (i >= r and j < r):
                p_cols.append(sl.coords_of(_e(ctx, n, i, j)))
    for i in range(n - 1):
        p_cols.append(sl.coords_of(_e(ctx, n, i, i, (i + 1, i + 1, -1))))
    p_sub = SubspaceBasis.span(ctx, np.stack(p_cols, axis=1))
    return ParabolicData(parent=sl, simple_root_subset=(r,), p_basis=p_sub,
                         u_basis=u_sub, is_cominuscule=True, u_algebra=u)


def _sp_root_vector(ctx: FqContext, n: int, kind: str, i: int, j: int) -> FqMatrix:
    """Root vectors of sp_{2n} in the ((0,I),(-I,0)) realization, 0-based i, j."""
    N = 2 * n
    if kind == "a":  # e_i - e_j, i != j: A-block E_ij minus its transpose partner
        return _e(ctx, N, i, j, (n + j, n + i, -1))
    if kind == "b":  # e_i + e_j: symmetric upper-right block
        if i == j:
            return _e(ctx, N, i, n + i)
        return _e(ctx, N, i, n + j, (j, n + i, 1))
    if kind == "c":  # -(e_i + e_j): symmetric lower-left block
        if i == j:
            return _e(ctx, N, n + i, i)
        return _e(ctx, N, n + i, j, (n + j, i, 1))
    raise ValueError(kind)


def make_sp_parabolic_nilradical(n: int, which: str, ctx: FqContext) -> ParabolicData:
    """Nilradical data for the sp_{2n} parabolic crossing out alpha_1 or alpha_n.

    alpha_n gives the abelian cominuscule nilradical of symmetric matrices
    (dim n(n+1)/2); alpha_1 gives an extraspecial algebra of dim 2n-1.
    """
    if ctx.p == 2:
        raise UnsupportedCharacteristicError("sp parabolics require p > 2")
    if which not in ("a1", "an"):
        raise ValueError("which must be 'a1' or 'an'")
    if n < 2:
        raise ValueError("need n >= 2")
    sp = make_sp(2 * n, ctx)
    if which == "an":
        u_mats = [_sp_root_vector(ctx, n, "b", i, j)
                  for i in range(n) for j in range(i, n)]
        crossed = (n,)
        comin = True
        # p = everything with nonnegative alpha_n-coefficient: drop the C block.
        keep = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    keep.append(_sp_root_vector(ctx, n, "a", i, j))
        keep += [_e(ctx, 2 * n, i, i, (n + i, n + i, -1)) for i in range(n)]
        keep += u_mats
        p_cols = [sp.coords_of(m) for m in keep]
        name = f"sp{2 * n}.u_an"
    else:
        u_mats = [_sp_root_vector(ctx, n, "a", 0, j) for j in range(1, n)]
        u_mats += [_sp_root_vector(ctx, n, "b", 0, j) for j in range(1, n)]
        u_mats += [_sp_root_vector(ctx, n, "b", 0, 0)]
        crossed = (1,)
        comin = False
        keep = []
        for i in range(n):
            for j in range(n):
                if i != j and j != 0:  # drop roots e_i - e_1 (negative a1-coeff)
                    keep.append(_sp_root_vector(ctx, n, "a", i, j))
        keep += [_e(ctx, 2 * n, i, i, (n + i, n + i, -1)) for i in range(n)]
        for i in range(n):
            for j in range(i, n):
                keep.append(_sp_root_vector(ctx, n, "b", i, j))
                if i != 0:
                    keep.append(_sp_root_vector(ctx, n, "c", i, j))
        p_cols = [sp.coords_of(m) for m in keep]
        name = f"sp{2 * n}.u_a1"
    if any(c is None for c in p_cols):
        raise StructureError("parabolic basis escaped sp")  # pragma: no cover
    u_alg = MatrixLieAlgebra(ctx, 2 * n, u_mats, name=name)
    u_sub = subalgebra_subspace(u_alg, sp)
    p_sub = SubspaceBasis.span(ctx, np.stack(p_cols, axis=1))
    return ParabolicData(parent=sp, simple_root_subset=crossed, p_basis=p_sub,
                         u_basis=u_sub, is_cominuscule=comin, u_algebra=u_alg)


def make_sp_borel_nilradical(n: int, ctx: FqContext) -> MatrixLieAlgebra:
    """Span of all positive root vectors of sp_{2n}: dim n^2."""
    if ctx.p == 2:
        raise UnsupportedCharacteristicError("sp requires p > 2")
    mats = [_sp_root_vector(ctx, n, "a", i, j)
            for i in range(n) for j in range(i + 1, n)]
    mats += [_sp_root_vector(ctx, n, "b", i, j)
             for i in range(n) for j in range(i, n)]
    return MatrixLieAlgebra(ctx, 2 * n, mats, name=f"sp{2 * n}.borel_u")
