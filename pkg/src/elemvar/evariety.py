"""Rational points of the variety of r-dimensional elementary subalgebras.

An elementary subalgebra is an abelian subalgebra on which the p-operation
vanishes.  For a basis x_1..x_r of pairwise commuting elements with
x_i^p = 0, every F_p-combination also has vanishing p-th power (the binomial
expansion of a sum of commuting matrices kills the mixed terms in
characteristic p), so checking brackets and p-powers on a basis suffices.

Planes are always reported in the coordinates of the ambient algebra, in
canonical reduced column echelon form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import BudgetExceededError, StructureError
from .fq import (
    FqMatrix,
    SubspaceBasis,
    _row_reduce,
    gaussian_binomial,
    iter_echelon_batches,
)
from .liealg import MatrixLieAlgebra, bracket, direct_sum, ppower, centralizer_in

_DT = np.int64

SCAN_BUDGET = 10**7
DFS_BUDGET = 10**7


@dataclass(frozen=True, eq=False)
class ElementarySubalgebra:
    """A verified elementary plane inside a fixed algebra."""

    algebra: MatrixLieAlgebra
    plane: SubspaceBasis

    def __post_init__(self):
        if self.plane.ambient_dim != self.algebra.dim:
            raise StructureError("plane must be in algebra coordinates")
        if not is_elementary(self.algebra, self.plane):
            raise StructureError("plane is not an elementary subalgebra")

    @property
    def r(self) -> int:
        return self.plane.rank

    def __eq__(self, other):
        return (isinstance(other, ElementarySubalgebra)
                and self.algebra is other.algebra and self.plane == other.plane)

    def __hash__(self):
        return hash((id(self.algebra), self.plane))


@dataclass(frozen=True)
class EPointSet:
    """The F_q-points of E(r, g), or a partial collection when incomplete."""

    algebra_name: str
    ambient_dim: int
    r: int
    p: int
    k: int
    planes: tuple[SubspaceBasis, ...]
    strategy: str
    complete: bool

    def __len__(self):
        return len(self.planes)

    def __iter__(self):
        return iter(self.planes)

    def __contains__(self, plane):
        return plane in set(self.planes)


def _sorted_planes(planes: Iterable[SubspaceBasis]) -> tuple[SubspaceBasis, ...]:
    return tuple(sorted(planes, key=lambda s: s.basis.a.tobytes()))


class _Frame:
    """Coordinates and zero-tests for planes inside a subspace W of g.

    Vectors live in W-coordinates (dim w); brackets and p-powers are tested
    in the ambient matrix realization.
    """

    def __init__(self, g: MatrixLieAlgebra, within: SubspaceBasis | None):
        self.g = g
        self.ctx = g.ctx
        if within is None:
            inj = np.eye(g.dim, dtype=_DT)
        else:
            if within.ambient_dim != g.dim:
                raise StructureError("'within' must be in g-coordinates")
            inj = within.basis.a
        self.inj = inj
        self.w = inj.shape[1]
        # Matrices of the W basis vectors, stacked (w, N, N).
        self.wmats = g.elements_batch(inj.T.copy())
        # bracket_tensor[i, j] = g-coords of [w_i, w_j], shape (w, w, dim g).
        bt = np.zeros((self.w, self.w, g.dim), dtype=_DT)
        for i in range(self.w):
            ad = g.ad_coord_matrix(inj[:, i])
            prod = self.ctx.matmul(ad, inj)
            bt[i] = prod.T
        self.bracket_tensor = bt

    def to_g_plane(self, cols: np.ndarray) -> SubspaceBasis:
        return SubspaceBasis.span(self.ctx, self.ctx.matmul(self.inj, cols))

    def bracket_map(self, vec: np.ndarray) -> np.ndarray:
        """Matrix (dim g × w) of u -> [vec, u] in W-coordinates."""
        ctx = self.ctx
        out = np.zeros((self.g.dim, self.w), dtype=_DT)
        for i in range(self.w):
            vi = int(vec[i])
            if vi:
                out = ctx.add(out, ctx.mul(self.bracket_tensor[i].T, vi))
        return out

    def batch_mats(self, vecs: np.ndarray) -> np.ndarray:
        """Ambient matrices for a (m, w) stack of W-coordinate vectors."""
        ctx = self.ctx
        m = vecs.shape[0]
        N = self.g.ambient_size
        if ctx.k == 1:
            return np.tensordot(vecs, self.wmats, axes=(1, 0)) % ctx.p
        out = np.zeros((m, N, N), dtype=_DT)
        for i in range(self.w):
            out = ctx.add(out, ctx.mul(vecs[:, i, None, None], self.wmats[i]))
        return out

    def batch_pnilpotent(self, vecs: np.ndarray) -> np.ndarray:
        """Mask of vectors whose ambient matrix has zero p-th power."""
        ctx = self.ctx
        mats = self.batch_mats(vecs)
        if ctx.k == 1:
            acc = mats
            for _ in range(ctx.p - 1):
                acc = np.einsum("mij,mjk->mik", acc, mats) % ctx.p
            return ~acc.any(axis=(1, 2))
        out = np.zeros(vecs.shape[0], dtype=bool)
        for t in range(vecs.shape[0]):
            x = FqMatrix.from_array(ctx, mats[t], validate=False)
            out[t] = ppower(x).is_zero()
        return out


def is_elementary(g: MatrixLieAlgebra, plane: SubspaceBasis) -> bool:
    """Pairwise basis brackets vanish and basis p-th powers vanish."""
    if plane.ambient_dim != g.dim:
        raise StructureError("plane must be in g-coordinates")
    if plane.rank == 0:
        return True
    cols = plane.basis.a
    mats = g.elements_batch(cols.T.copy())
    ctx = g.ctx
    for s, t in itertools.combinations(range(plane.rank), 2):
        a = FqMatrix.from_array(ctx, mats[s], validate=False)
        b = FqMatrix.from_array(ctx, mats[t], validate=False)
        if not bracket(a, b).is_zero():
            return False
    for s in range(plane.rank):
        if not ppower(FqMatrix.from_array(ctx, mats[s], validate=False)).is_zero():
            return False
    return True


def _scan_batches(frame: _Frame, r: int, budget: int):
    """Yield (batch_cols, ok_mask) over all canonical r-planes of W."""
    ctx = frame.ctx
    total = gaussian_binomial(frame.w, r, ctx.q)
    if total > budget:
        raise BudgetExceededError(
            f"{total} candidate planes exceed budget {budget}", count=total)
    p = ctx.p
    for batch in iter_echelon_batches(ctx, frame.w, r):
        m = batch.shape[0]
        if ctx.k == 1:
            mats = np.einsum("mwr,wab->mrab", batch, frame.wmats) % p
            ok = np.ones(m, dtype=bool)
            for s, t in itertools.combinations(range(r), 2):
                c = (np.einsum("mij,mjk->mik", mats[:, s], mats[:, t])
                     - np.einsum("mij,mjk->mik", mats[:, t], mats[:, s])) % p
                ok &= ~c.any(axis=(1, 2))
            acc = mats
            for _ in range(p - 1):
                acc = np.einsum("mrij,mrjk->mrik", acc, mats) % p
            ok &= ~acc.any(axis=(1, 2, 3))
        else:
            ok = np.zeros(m, dtype=bool)
            for t in range(m):
                pl = frame.to_g_plane(batch[t])
                ok[t] = is_elementary(frame.g, pl)
        yield batch, ok


def enumerate_E_scan(g: MatrixLieAlgebra, r: int,
                     within: SubspaceBasis | None = None,
                     budget: int = SCAN_BUDGET) -> EPointSet:
    """Filter every canonical r-plane for elementarity."""
    frame = _Frame(g, within)
    found = []
    for batch, ok in _scan_batches(frame, r, budget):
        for t in np.nonzero(ok)[0]:
            found.append(frame.to_g_plane(batch[t]))
    return EPointSet(g.name, g.dim, r, g.ctx.p, g.ctx.k,
                     _sorted_planes(found), "scan", True)


def _solve_affine(ctx, M: np.ndarray, rhs: np.ndarray):
    """All solutions x of M x = rhs over the field, as a (count, vars) array."""
    nvars = M.shape[1]
    aug = np.hstack([M, rhs[:, None]])
    R, pivots = _row_reduce(ctx, aug)
    if nvars in pivots:
        return np.zeros((0, nvars), dtype=_DT)
    part = np.zeros(nvars, dtype=_DT)
    for i, c in enumerate(pivots):
        part[c] = R[i, nvars]
    free = [c for c in range(nvars) if c not in set(pivots)]
    if not free:
        return part[None, :]
    q = ctx.q
    count = q ** len(free)
    sols = np.repeat(part[None, :], count, axis=0)
    codes = np.arange(count, dtype=np.int64)
    vals = np.zeros((count, len(free)), dtype=_DT)
    for t in range(len(free) - 1, -1, -1):
        vals[:, t] = codes % q
        codes //= q
    for t, f in enumerate(free):
        sols[:, f] = ctx.add(sols[:, f], vals[:, t])
        for i, c in enumerate(pivots):
            corr = ctx.mul(vals[:, t], int(R[i, f]))
            sols[:, c] = ctx.sub(sols[:, c], corr)
    return sols


def _dfs_elementary(frame: _Frame, target_r: int | None, budget: int):
    """Depth-first growth of canonical elementary bases.

    Yields (cols, pivots) at every node (cols is a w×depth array).  A new
    column must vanish at rows < its pivot, carry 1 at the pivot, solve the
    commutation system of the current columns, have zero p-th power, and its
    pivot row must be zero in all earlier columns; this reaches each plane
    through exactly one path (the prefixes of its canonical basis).
    """
    ctx = frame.ctx
    w = frame.w
    work = 0

    def extensions(cols: np.ndarray, pivots: list[int], system: np.ndarray):
        nonlocal work
        out = []
        min_piv = pivots[-1] + 1 if pivots else 0
        for rho in range(min_piv, w):
            if cols.shape[1] and cols[rho, :].any():
                continue
            nfree = w - rho - 1
            # Unknowns: entries at rows rho+1..w-1; fixed 1 at rho, 0 below rho.
            sub = system[:, rho + 1:] if system.size else np.zeros((0, nfree), dtype=_DT)
            rhs = ctx.neg(system[:, rho]) if system.size else np.zeros(0, dtype=_DT)
            sols = _solve_affine(ctx, sub, rhs)
            if sols.shape[0] == 0:
                continue
            vecs = np.zeros((sols.shape[0], w), dtype=_DT)
            vecs[:, rho] = 1
            vecs[:, rho + 1:] = sols
            work += vecs.shape[0]
            if work > budget:
                raise BudgetExceededError(
                    f"dfs exceeded budget {budget}", count=work)
            keep = frame.batch_pnilpotent(vecs)
            for v in vecs[keep]:
                out.append((rho, v))
        return out

    def visit(cols: np.ndarray, pivots: list[int], system: np.ndarray):
        yield cols, pivots
        if target_r is not None and len(pivots) >= target_r:
            return
        for rho, v in extensions(cols, pivots, system):
            new_cols = np.hstack([cols, v[:, None]])
            new_system = np.vstack([system, frame.bracket_map(v)]) \
                if system.size else frame.bracket_map(v)
            yield from visit(new_cols, pivots + [rho], new_system)

    empty_system = np.zeros((0, w), dtype=_DT)
    yield from visit(np.zeros((w, 0), dtype=_DT), [], empty_system)


def enumerate_E_dfs(g: MatrixLieAlgebra, r: int,
                    within: SubspaceBasis | None = None,
                    budget: int = DFS_BUDGET) -> EPointSet:
    """Enumerate E(r, g)(F_q) by extending canonical commuting bases."""
    frame = _Frame(g, within)
    found = []
    for cols, pivots in _dfs_elementary(frame, r, budget):
        if len(pivots) == r:
            found.append(frame.to_g_plane(cols))
    return EPointSet(g.name, g.dim, r, g.ctx.p, g.ctx.k,
                     _sorted_planes(found), "dfs", True)


def max_elementary_dim(g: MatrixLieAlgebra,
                       within: SubspaceBasis | None = None,
                       budget: int = DFS_BUDGET,
                       strategy: str = "auto") -> tuple[int, list[SubspaceBasis]]:
    """Largest r with E(r, g) nonempty (inside 'within'), with all witnesses."""
    frame = _Frame(g, within)
    if strategy == "dfs" or (strategy == "auto"
                             and gaussian_binomial(frame.w, 1, g.ctx.q) > 10**5):
        deepest: list[np.ndarray] = []
        r_max = 0
        for cols, pivots in _dfs_elementary(frame, None, budget):
            d = len(pivots)
            if d > r_max:
                r_max = d
                deepest = []
            if d == r_max and d > 0:
                deepest.append(cols.copy())
        witnesses = [frame.to_g_plane(c) for c in deepest]
        return r_max, sorted(witnesses, key=lambda s: s.basis.a.tobytes())
    r_max, witnesses = 0, []
    for r in range(1, frame.w + 1):
        pts = enumerate_E_scan(g, r, within=within, budget=budget)
        if not len(pts):
            break
        r_max, witnesses = r, list(pts.planes)
    return r_max, witnesses


def is_maximal_elementary(g: MatrixLieAlgebra, eps: SubspaceBasis,
                          budget: int = 10**6) -> bool:
    """No p-nilpotent centralizer point extends the plane."""
    if not is_elementary(g, eps):
        raise StructureError("input plane is not elementary")
    cent = centralizer_in(g, eps)
    frame = _Frame(g, cent)
    count = (g.ctx.q ** frame.w - 1) // (g.ctx.q - 1)
    if count > budget:
        raise BudgetExceededError(
            f"{count} centralizer lines exceed budget {budget}", count=count)
    for batch in iter_echelon_batches(g.ctx, frame.w, 1):
        vecs = batch[:, :, 0]
        keep = frame.batch_pnilpotent(vecs)
        for v in vecs[keep]:
            gvec = g.ctx.matmul(frame.inj, v)
            if not eps.contains_vector(gvec):
                return False
    return True


def product_embed(e1: ElementarySubalgebra, e2: ElementarySubalgebra,
                  gsum: MatrixLieAlgebra | None = None) -> ElementarySubalgebra:
    """Block embedding of a pair of elementary planes into the direct sum."""
    g1, g2 = e1.algebra, e2.algebra
    if gsum is None:
        gsum = direct_sum(g1, g2)
    if gsum.dim != g1.dim + g2.dim:
        raise StructureError("sum algebra does not match the summands")
    n1, n2 = g1.dim, g2.dim
    cols = np.zeros((n1 + n2, e1.r + e2.r), dtype=_DT)
    cols[:n1, :e1.r] = e1.plane.basis.a
    cols[n1:, e1.r:] = e2.plane.basis.a
    return ElementarySubalgebra(gsum, SubspaceBasis.span(gsum.ctx, cols))
